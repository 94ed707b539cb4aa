"""Stand-alone reference evaluations used as test oracles.

Nothing here imports the package: the formulas are re-derived from scratch
so that agreement with the library is a real cross-check.
"""
import math
from fractions import Fraction

import mpmath

DEFAULTS = dict(mu=0.4, eta=0.1, dark=1e-5, vis=0.98, alpha=0.25)


def h_mp(x):
    """Binary entropy at 50-digit precision."""
    with mpmath.workdps(50):
        x = mpmath.mpf(x)
        if x in (0, 1):
            return 0.0
        return float(-x * mpmath.log(x, 2) - (1 - x) * mpmath.log(1 - x, 2))


def brute_force_fom(n_users, n1, l1, l2, mu=0.4, eta=0.1, dark=1e-5, vis=0.98, alpha=0.25):
    t_fiber = 10 ** (-alpha * (l1 + l2) / 10)
    q = (1 - vis) / 2 + dark * n_users / (2 * mu * eta * t_fiber * n1)
    bracket = math.exp(-mu) * (1 - h_mp(q)) - h_mp(q)
    return q, bracket, bracket / (n1 * l1 + n_users * l2)


def brute_force_argmax(n_users, l1, l2, **kw):
    """Exhaustive maximization over n1 in {1, 2, 4, ..., n_users}; ties go to smaller n1."""
    grid = [2 ** i for i in range(int(math.log2(n_users)) + 1)]
    best, best_fom = None, -math.inf
    for n1 in grid:
        _, frac, fom = brute_force_fom(n_users, n1, l1, l2, **kw)
        if frac > 0 and fom > best_fom:
            best, best_fom = n1, fom
    return best, best_fom


def bisect_zero_key_qber(mu, lo=1e-6, hi=0.49, iters=200):
    f = lambda q: math.exp(-mu) * (1 - h_mp(q)) - h_mp(q)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def full_model_qber_exact(p_sig, dark, vis):
    """Exact rational evaluation of the click-model expectation."""
    p, d, v = Fraction(p_sig), Fraction(dark), Fraction(vis)
    num = p * (1 - v) / 2 + (1 - p) * d / 2
    den = p + (1 - p) * d
    return float(num / den)
