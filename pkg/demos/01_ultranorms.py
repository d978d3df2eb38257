"""Growth exponents of scalar sequences and what the quotient forgets.

Under the scale r_n = 1/ln n the ultranorm of (f_n) is

    limsup |f_n|^(1/ln n) = exp(limsup ln|f_n| / ln n),

so polynomial growth n^k shows up as the number e^k, anything faster than
every power is infinite and anything faster-decaying than every power is 0.
"""
import math

from gfakit import AbsoluteValue, LogScale, Seq, classify, distance, equal_in_quotient, ultranorm

p, r = AbsoluteValue(), LogScale()

print("Polynomials: the closed form reads the exponent off the leading monomial.")
for k in (1, 2, 3):
    est = ultranorm(Seq.monomial(1.0, a=k), p, 1, 0, r)
    print(f"  <<n^{k}>> = {est.value:.12f}   (e^{k} = {math.e**k:.12f}, {est.method})")

print("\nThe same numbers from samples alone, by fitting the tail of r_n ln|f_n|:")
for src in ("n^2 + sin(n)", "3*n^2*log(n)", "n^(-1/2)"):
    est = ultranorm(Seq.scalar(src), p, 1, 0, r, method="tail")
    print(f"  {src:<14} exponent {est.exponent:+.6f}  residual {est.residual:.1e}")

print("\nClassification:")
for src in ("n^5", "exp(sqrt(n))", "exp(-sqrt(n))", "exp(log(n)^1.1)"):
    c = classify(Seq.scalar(src), p, r)
    note = c.witnesses[0].estimate.note
    print(f"  {src:<16} {c.verdict:<12} {note}")
print("  (the last one grows faster than any power, but only barely; at the default")
print("   sample budget the fit cannot tell, and says so instead of guessing)")

print("\nThe metric d(f, g) = <<f - g>> is discrete on constants:")
for a, b in ((0, 1e-9), (2, 2), (5, -7)):
    print(f"  d({a}, {b}) = {distance(Seq.constant(a), Seq.constant(b), p, 1, 0, r).value}")

print("\nEquality in the quotient ignores negligible perturbations:")
f = Seq.scalar("n^2")
print("  n^2 + exp(-n) vs n^2 :", equal_in_quotient(f + Seq.scalar("exp(-n)"), f, p, r))
print("  n^2 + 1/n     vs n^2 :", equal_in_quotient(f + Seq.scalar("1/n"), f, p, r))
