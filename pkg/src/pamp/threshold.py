"""Numerics for the majority-dynamics threshold theory.

Covers the binomial majority tail Pr(Bin(n,p) >= j), the critical bias
alpha_star(d) (smallest positive fixed point of x -> Pr(Bin(d-1,x) >= (d-1)/2)
in (0, 1/2)), the effective polling degree d, the envelope
f(n,p) = [(1+1/sqrt(n-1))*2]^(2/(n-3)) * 4p(1-p), the doubly-exponential
tree-recursion bound (1/4)*f^(((d-1)/2)^h), the exact recursion it dominates,
the monotone-tail inequality Pr(Bin(2N,p) >= N) >= Pr(Bin(2N+2,p) >= N+1)
for p < 1/2, and the convergence schedule
tau_star = (1+eps)/log_d((d-1)/2) * log_d log_d t.

All functions are pure; everything here is safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "binom_tail",
    "binom_tail_exact",
    "alpha_star",
    "effective_d",
    "f_envelope",
    "tree_root_red_bound",
    "tree_recursion_exact",
    "binprop_check",
    "schedule_constant",
    "tau_star",
    "MajorityMap",
    "ConvergenceSchedule",
    "TreeBound",
]

# Above this n, per-term products of exact binomial coefficients with p-powers
# can under/overflow; switch to log-space with one exp per term.
_EXACT_MAX_N = 64


def _validate_tail_args(n: int, j: int, p: float) -> tuple[int, int]:
    n, j = int(n), int(j)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not 0 <= j <= n + 1:
        raise ValueError(f"j must lie in [0, n+1], got j={j}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return n, j


def binom_tail(n: int, j: int, p: float) -> float:
    """Pr(Bin(n, p) >= j).

    Direct upper-tail summation: exact integer coefficients with float
    products for n <= 64 (absolute error a few 1e-16), log-space terms with
    a single exp each beyond that (absolute error <~ 1e-12 up to n = 1e4;
    the log-space path also degrades gracefully to 0 instead of
    underflowing, which the doubly-exponential tree bounds rely on).
    """
    n, j = _validate_tail_args(n, j, p)
    p = float(p)
    if j <= 0:
        return 1.0
    if j > n:
        return 0.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    q = 1.0 - p
    if n <= _EXACT_MAX_N:
        terms = [math.comb(n, i) * p**i * q ** (n - i) for i in range(j, n + 1)]
        return min(1.0, math.fsum(terms))
    lp, lq = math.log(p), math.log(q)
    c = math.comb(n, j)
    terms = []
    for i in range(j, n + 1):
        lt = math.log(c) + i * lp + (n - i) * lq
        terms.append(math.exp(lt) if lt > -745.0 else 0.0)
        if i < n:
            c = c * (n - i) // (i + 1)
    return min(1.0, math.fsum(terms))


def binom_tail_exact(n: int, j: int, p) -> Fraction:
    """Pr(Bin(n, p) >= j) in exact rational arithmetic (p taken at its
    exact binary value when given as a float)."""
    pf = Fraction(p)
    if not 0 <= pf <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    n, j = _validate_tail_args(n, j, 0.0)
    if j <= 0:
        return Fraction(1)
    if j > n:
        return Fraction(0)
    q = 1 - pf
    return sum(
        (math.comb(n, i) * pf**i * q ** (n - i) for i in range(j, n + 1)),
        Fraction(0),
    )


def _validate_odd_d(d: int) -> int:
    d = int(d)
    if d < 5 or d % 2 == 0:
        raise ValueError(f"d must be an odd integer >= 5, got {d}")
    return d


@lru_cache(maxsize=None)
def alpha_star(d: int) -> float:
    """Critical initial red bias: the unique root of
    Pr(Bin(d-1, x) >= (d-1)/2) = x in (0, 1/2), by bisection (|error| <~ 1e-12).

    Values approach 1/2 from below as d grows.
    """
    d = _validate_odd_d(d)
    n, j = d - 1, (d - 1) // 2
    lo, hi = 1e-6, 0.5 - 1e-6
    if not (binom_tail(n, j, lo) - lo < 0.0 < binom_tail(n, j, hi) - hi):
        raise RuntimeError(f"fixed-point bracket failed for d={d}")
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if binom_tail(n, j, mid) - mid <= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12:
            break
    return 0.5 * (lo + hi)


def effective_d(m: int, k: int) -> int:
    """Effective polling degree: m ^ k for odd m, (m-1) ^ k for even m (^ = min)."""
    m, k = int(m), int(k)
    if m < 1:
        raise ValueError("m must be >= 1")
    if k < 1 or k % 2 == 0:
        raise ValueError(f"k must be a positive odd integer, got {k}")
    return min(m if m % 2 == 1 else m - 1, k)


def f_envelope(n: int, p: float) -> float:
    """Envelope [(1 + 1/sqrt(n-1)) * 2]^(2/(n-3)) * 4p(1-p) for odd n >= 5."""
    n = int(n)
    if n < 5 or n % 2 == 0:
        raise ValueError(f"n must be an odd integer >= 5, got {n}")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    base = (1.0 + 1.0 / math.sqrt(n - 1)) * 2.0
    return base ** (2.0 / (n - 3)) * 4.0 * p * (1.0 - p)


def tree_root_red_bound(d: int, p: float, h: int) -> float:
    """(1/4) * f_envelope(d, p)^(((d-1)/2)^h): probability that the root of a
    depth-h d-regular tree ends red after h recursion steps.

    Only a meaningful bound when f_envelope(d, p) < 1; returned unconditionally
    and left to callers to gate (it is total by design).
    """
    h = int(h)
    if h < 0:
        raise ValueError("h must be >= 0")
    f = f_envelope(d, p)
    ex = ((d - 1) // 2) ** h
    if ex == 1:
        return 0.25 * f
    if f == 0.0:
        return 0.0
    le = ex * math.log(f)
    if le > 709.0:
        return math.inf
    if le < -745.0:
        return 0.0
    return 0.25 * math.exp(le)


def tree_recursion_exact(d: int, p: float, h: int) -> float:
    """Iterate p -> Pr(Bin(d-1, p) >= (d-1)/2) exactly h times from p_0 = p
    (the child-only majority recursion with adversarial parent)."""
    d = _validate_odd_d(d)
    h = int(h)
    if h < 0:
        raise ValueError("h must be >= 0")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    n, j = d - 1, (d - 1) // 2
    for _ in range(h):
        p = binom_tail(n, j, p)
    return p


def _int_tail_numerator(n: int, j: int, a: int, b: int) -> int:
    # sum_{i=j..n} C(n,i) a^i b^(n-i) as an exact integer
    pa = [1] * (n + 1)
    pb = [1] * (n + 1)
    for i in range(1, n + 1):
        pa[i] = pa[i - 1] * a
        pb[i] = pb[i - 1] * b
    c = math.comb(n, j)
    total = 0
    for i in range(j, n + 1):
        total += c * pa[i] * pb[n - i]
        if i < n:
            c = c * (n - i) // (i + 1)
    return total


def binprop_check(N: int, p: float) -> bool:
    """Whether Pr(Bin(2N, p) >= N) >= Pr(Bin(2N+2, p) >= N+1), decided in exact
    integer arithmetic at the exact binary value of p.  Holds for all N >= 1
    and 0 < p < 1/2."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be >= 1")
    p = float(p)
    if not 0.0 < p < 0.5:
        raise ValueError(f"p must lie in (0, 1/2), got {p}")
    num, den = p.as_integer_ratio()
    qnum = den - num
    t1 = _int_tail_numerator(2 * N, N, num, qnum)
    t2 = _int_tail_numerator(2 * N + 2, N + 1, num, qnum)
    # compare t1/den^(2N) >= t2/den^(2N+2)
    return t1 * den * den >= t2


def schedule_constant(d: int, epsilon: float) -> float:
    """B = (1 + eps) / log_d((d-1)/2)."""
    d = _validate_odd_d(d)
    epsilon = float(epsilon)
    if epsilon <= 0.0:
        raise ValueError("epsilon must be > 0")
    return (1.0 + epsilon) * math.log(d) / math.log((d - 1) / 2.0)


def tau_star(d: int, epsilon: float, t) -> float:
    """Convergence schedule (1+eps)/log_d((d-1)/2) * log_d(log_d(t)).

    Requires t >= d so the double logarithm is nonnegative (it vanishes at
    t = d exactly).
    """
    B = schedule_constant(d, epsilon)
    t = float(t)
    if t < d:
        raise ValueError(f"t={t} too small: log_d log_d t is negative below t = d")
    ld = math.log(t) / math.log(d)
    return B * (math.log(ld) / math.log(d))


@dataclass(frozen=True)
class MajorityMap:
    """The majority update map x -> Pr(Bin(d-1, x) >= (d-1)/2) for odd d >= 5:
    strictly increasing on (0,1) with f(0)=0, f(1)=1 and unique interior
    fixed point alpha_star(d) in (0, 1/2)."""

    d: int

    def __post_init__(self):
        _validate_odd_d(self.d)

    def __call__(self, x: float) -> float:
        return binom_tail(self.d - 1, (self.d - 1) // 2, x)

    def fixed_point(self) -> float:
        return alpha_star(self.d)


@dataclass(frozen=True)
class ConvergenceSchedule:
    d: int
    epsilon: float
    t: float
    B: float
    tau_star: float

    @classmethod
    def compute(cls, d: int, epsilon: float, t) -> "ConvergenceSchedule":
        return cls(
            d=int(d),
            epsilon=float(epsilon),
            t=float(t),
            B=schedule_constant(d, epsilon),
            tau_star=tau_star(d, epsilon, t),
        )


@dataclass(frozen=True)
class TreeBound:
    d: int
    p: float
    h: int
    f_env: float
    bound: float

    @classmethod
    def compute(cls, d: int, p: float, h: int) -> "TreeBound":
        return cls(
            d=int(d),
            p=float(p),
            h=int(h),
            f_env=f_envelope(d, p),
            bound=tree_root_red_bound(d, p, h),
        )
