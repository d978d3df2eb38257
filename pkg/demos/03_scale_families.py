"""Algebras from whole families of scales.

With r^m_n = n^(-1/m) the moderate sequences are those moderate for every
m, so exp(sqrt n) is excluded once m = 3, while exp((ln n)^2) survives.
With the Egorov family (r^m_n = 1 for n <= m, else 0) every sequence is
moderate and the negligible ones are exactly those that end in zeros.
"""
from gfakit import AbsoluteValue, GrowthCertificate, Seq
from gfakit.scale import egorov_family, log_family, power_family
from gfakit.scalefam import family_ideal_check, family_membership

p = AbsoluteValue()
powers = power_family(range(1, 5))
egorov = egorov_family()


def show(label, seq, fam, **kw):
    v = family_membership(seq, fam, p, **kw)
    levels = "  ".join(f"m={m}:{e.value:.4g}" for m, e in sorted(v.levels.items()))
    print(f"  {label:<18} in F={v.in_F!s:<5} (level {v.F_level})  in K={v.in_K!s:<5} (level {v.K_level})")
    print(f"  {'':<18} {levels}")


print("Power family n^(-1/m), m = 1..4:")
show("exp((ln n)^2)", Seq.scalar("exp(log(n)^2)", certificate=GrowthCertificate.from_terms({(0, 2): 1.0})), powers)
show("exp(sqrt n)", Seq.monomial(1.0, s=1, t=0.5), powers)
show("exp(-n)", Seq.monomial(1.0, s=-1, t=1), powers)

print("\nEgorov family:")
show("1/n", Seq.scalar("1/n"), egorov, nmax=4096)
show("(1, 1/2, 0, 0, ...)", Seq.from_values([1, 0.5]), egorov, nmax=4096)

print("\nThe ideal absorbs moderate factors:")
k = Seq.monomial(1.0, s=-1, t=1)
for label, f, fam in (("n^3, power", Seq.monomial(1.0, a=3), powers),
                      ("n^3, log", Seq.monomial(1.0, a=3), log_family(range(1, 4))),
                      ("exp(n/2), power", Seq.monomial(1.0, s=0.5, t=1), powers)):
    chk = family_ideal_check(k, f, fam, p)
    print(f"  exp(-n) * {label:<16} ok={chk.ok}  flagged={chk.flagged}  {chk.note}")
