"""Completeness, replayed on a concrete Cauchy sequence.

The members f^m = 1 + n^-1 + ... + n^-m satisfy d(f^k, f^l) = e^-(min(k,l)+1).
We pick moduli m_mu with d < 2^-mu beyond them, thresholds n_mu past
which the members in each bracket agree to within 2^-mu, and glue the
members into one diagonal sequence.  The distances to the diagonal then
shrink with m.
"""
from gfakit import AbsoluteValue, LogScale, MonoSum, Seq
from gfakit.complete import NotCauchy, diagonalize, extract_moduli, replay_bound_chain, verify_convergence

p, r = AbsoluteValue(), LogScale()
members, acc = [], MonoSum.monomial(1.0)
for m in range(8):
    members.append(Seq.from_mono(acc, f"f{m}"))
    acc = acc + MonoSum.monomial(1.0, a=-(m + 1))

cd = extract_moduli(members, p, r, mu_max=4, nmax=10**5)
print(" mu   m_mu   n_mu    2^-mu")
for row in cd.rows():
    print(f" {row['mu']:>2}   {row['m']:>4}   {row['n']:>5}   {row['eps']:.4f}")

fbar = diagonalize(cd)
rep = verify_convergence(cd, fbar, nmax=10**5)
print("\n d(f^m, fbar):")
for row in rep.rows():
    print(f"  m = {row['member']}: {row['distance']:.6f}")
print(f"\n decreasing: {rep.decreasing}; final {rep.final_distance:.4f} < {rep.bound}: {rep.within_bound}")
print(f" sampled bound chain holds: {replay_bound_chain(cd, fbar).ok}")

print("\nDistinct constants are not Cauchy; the offending pair is reported:")
try:
    extract_moduli([Seq.constant(c) for c in (0, 1, 2)], p, r, mu_max=2)
except NotCauchy as exc:
    print(" ", exc)
