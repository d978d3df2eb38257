"""The delta sequence n*phi(n x) and its square.

Each derivative multiplies the sup norm by n, so under the log scale the
ultranorms of delta, delta', delta'' are e, e^2, e^3.  The square is
another moderate sequence (growing like n^2), not zero: the product of two
deltas exists here even though it has no meaning as a distribution.
"""
import math

from gfakit import LogScale, SupDerivatives, custom_scale, make_delta, tail_fit
from gfakit.embed import check_scale_admissible, check_unbounded, replay_unboundedness, weak_convergence_errors
from gfakit.seqspace import classify, equal_in_quotient, zero_seq

p, r = SupDerivatives(), LogScale()
d = make_delta()
NMAX = 10**5

print("Exponents of sup |delta_n^(nu)| against ln n:")
for nu in (0, 1, 2):
    est = tail_fit(d, p, 1, nu, r, nmax=NMAX)
    print(f"  nu = {nu}: {est.exponent:.6f}")

print("\nThe sup norms grow without bound:")
rep = check_unbounded(d, budget=NMAX)
for n, v in rep.sup_values[::6]:
    print(f"  n = {n:>6}: sup |delta_n| = {v:.6g}")
replay = replay_unboundedness(d)
print(f"  pairing with a tent of height C+1 = {replay.peak:.4g}: small n stay below C = {replay.bound:.4g},")
print(f"  large n give {', '.join(f'{v:.4g}' for v in replay.large_pairings.values())}")

print("\nWeakly, delta_n still tends to point evaluation:")
for n, err in weak_convergence_errors(d, "cos(x) + x^2").items():
    print(f"  n = {n:>5}: |<delta_n, psi> - psi(0)| = {err:.2e}")

print("\nThe square:")
sq = classify(d * d, p, r, mu_max=1, nu_max=0, nmax=NMAX)
print(f"  verdict {sq.verdict}, ultranorm {sq.estimate(1, 0).value:.6f} (e^2 = {math.e**2:.6f})")
print("  delta^2 = 0 in the quotient?",
      equal_in_quotient(d * d, zero_seq("function"), p, r, mu_max=1, nu_max=0, nmax=NMAX))

print("\nA scale must see the growth: 1/ln ln n is too slow.")
slow = custom_scale("1/log(log(n))", start=16)
for scale in (r, slow):
    rep = check_scale_admissible(d, p, scale, mu_max=1, nu_max=1, nmax=NMAX)
    print(f"  {scale.label:<18} admissible={rep.admissible}  verdict={rep.verdict}")
