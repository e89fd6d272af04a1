from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pamp.threshold import (
    ConvergenceSchedule,
    MajorityMap,
    TreeBound,
    alpha_star,
    binom_tail,
    binom_tail_exact,
    binprop_check,
    effective_d,
    f_envelope,
    schedule_constant,
    tau_star,
    tree_recursion_exact,
    tree_root_red_bound,
)

from conftest import tail_fraction


def alpha_star_fraction(d: int, iters: int = 60) -> Fraction:
    """Independent oracle: exact-rational bisection of tail(x) = x."""
    n, j = d - 1, (d - 1) // 2
    lo, hi = Fraction(1, 10**6), Fraction(1, 2) - Fraction(1, 10**6)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if tail_fraction(n, j, mid) - mid < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# ---------------------------------------------------------------- binom_tail

def test_tail_known_values():
    assert binom_tail(4, 2, 0.5) == pytest.approx(11 / 16, abs=1e-15)
    assert binom_tail(10, 0, 0.3) == 1.0
    assert binom_tail(10, 11, 0.3) == 0.0
    assert binom_tail(10, 4, 0.0) == 0.0
    assert binom_tail(10, 4, 1.0) == 1.0


def test_tail_near_fixed_point():
    assert binom_tail(4, 2, 0.232) == pytest.approx(0.2317, abs=5e-4)


def test_tail_validation():
    with pytest.raises(ValueError):
        binom_tail(-1, 0, 0.5)
    with pytest.raises(ValueError):
        binom_tail(4, -1, 0.5)
    with pytest.raises(ValueError):
        binom_tail(4, 6, 0.5)
    with pytest.raises(ValueError):
        binom_tail(4, 2, 1.5)


@pytest.mark.parametrize("n", [1, 7, 30, 64])
def test_tail_exact_path_vs_fraction(n):
    for j in range(0, n + 1):
        for pnum in (1, 13, 49, 99):
            want = float(tail_fraction(n, j, Fraction(pnum, 100)))
            assert binom_tail(n, j, pnum / 100) == pytest.approx(want, abs=1e-13)


@pytest.mark.parametrize("n", [65, 100, 500])
def test_tail_log_path_vs_fraction(n):
    # relative error; measured worst case is ~6e-14 on this grid
    for j in (1, n // 4, n // 2, n - 1, n):
        for pnum in (1, 13, 50, 87):
            p = Fraction(pnum, 100)
            want = tail_fraction(n, j, p)
            got = binom_tail(n, j, pnum / 100)
            if want > Fraction(1, 10**290):
                assert abs(got / float(want) - 1.0) < 1e-11
            else:
                assert got <= 1e-290


def test_tail_underflow_degrades_to_zero():
    assert binom_tail(10_000, 10_000, 1e-6) == 0.0


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 40), p=st.floats(0.0, 1.0))
def test_tail_monotone_decreasing_in_j(n, p):
    tails = [binom_tail(n, j, p) for j in range(0, n + 2)]
    assert all(a >= b - 1e-15 for a, b in zip(tails, tails[1:]))


def test_exact_tail_is_exact():
    assert binom_tail_exact(4, 2, Fraction(1, 2)) == Fraction(11, 16)
    p = 0.3  # the float, at its exact binary value
    assert binom_tail_exact(6, 3, p) == tail_fraction(6, 3, Fraction(p))


# ---------------------------------------------------------------- alpha_star

def test_alpha_star_reference_table():
    assert alpha_star(5) == pytest.approx(0.232, abs=5e-4)
    assert alpha_star(7) == pytest.approx(0.347, abs=5e-4)
    assert alpha_star(9) == pytest.approx(0.396, abs=5e-4)
    assert alpha_star(11) == pytest.approx(0.421, abs=5e-4)


def test_alpha_star_vs_rational_oracle():
    for d in (5, 7, 9, 11, 31, 101):
        assert alpha_star(d) == pytest.approx(float(alpha_star_fraction(d)), abs=1e-11)


def test_alpha_star_increases_towards_half():
    values = [alpha_star(d) for d in range(5, 103, 2)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert 0.45 < values[-1] < 0.5


def test_alpha_star_validation():
    with pytest.raises(ValueError):
        alpha_star(4)
    with pytest.raises(ValueError):
        alpha_star(3)


def test_majority_map_wraps_tail_and_fixed_point():
    mm = MajorityMap(5)
    assert mm(0.3) == binom_tail(4, 2, 0.3)
    fp = mm.fixed_point()
    assert fp == alpha_star(5)
    assert mm(fp) == pytest.approx(fp, abs=1e-10)


# ---------------------------------------------------------------- effective_d

@pytest.mark.parametrize("m,k,want", [
    (5, 5, 5), (6, 7, 5), (9, 5, 5), (4, 5, 3), (2, 7, 1), (10, 5, 5),
    (5, 7, 5), (7, 7, 7), (1, 5, 1),
])
def test_effective_d_table(m, k, want):
    assert effective_d(m, k) == want


@given(m=st.integers(1, 40), k=st.integers(0, 20).map(lambda i: 2 * i + 1))
def test_effective_d_is_odd_min(m, k):
    d = effective_d(m, k)
    assert d % 2 == 1
    assert d == min(m if m % 2 == 1 else m - 1, k)


def test_effective_d_rejects_even_k():
    with pytest.raises(ValueError):
        effective_d(5, 4)


# ------------------------------------------------------------------ envelope

def test_envelope_values():
    assert f_envelope(5, 0.0) == 0.0
    assert f_envelope(5, 0.1) == pytest.approx(3.0 * 0.36, rel=1e-12)
    assert f_envelope(5, 0.01) == pytest.approx(3.0 * 0.0396, rel=1e-12)


def test_envelope_validation():
    with pytest.raises(ValueError):
        f_envelope(4, 0.1)
    with pytest.raises(ValueError):
        f_envelope(5, 1.0001)


@given(p=st.floats(0.0, 0.5), n=st.integers(2, 30).map(lambda i: 2 * i + 1))
def test_envelope_monotone_on_lower_half(n, p):
    assert f_envelope(n, p) <= f_envelope(n, 0.5) + 1e-12


# --------------------------------------------------------------- tree bounds

def test_tree_bound_height_zero_is_quarter_envelope():
    for d, p in ((5, 0.1), (7, 0.02), (11, 0.3)):
        assert tree_root_red_bound(d, p, 0) == pytest.approx(f_envelope(d, p) / 4)


def test_tree_bound_small_heights():
    f = f_envelope(5, 0.01)
    assert tree_root_red_bound(5, 0.01, 1) == pytest.approx(0.25 * f**2, rel=1e-12)
    assert tree_root_red_bound(5, 0.01, 1) == pytest.approx(3.528e-3, rel=1e-3)
    # h=3: 0.25 * f^8 with f = 0.1188 gives ~9.92e-9
    assert tree_root_red_bound(5, 0.01, 3) == pytest.approx(0.25 * f**8, rel=1e-9)
    assert tree_root_red_bound(5, 0.01, 3) == pytest.approx(9.919e-9, rel=1e-3)


def test_tree_bound_extremes():
    assert tree_root_red_bound(5, 0.0, 4) == 0.0
    assert tree_root_red_bound(5, 0.5, 50) == float("inf")  # f > 1 blows up


def test_tree_recursion_fixed_points():
    for h in range(5):
        assert tree_recursion_exact(5, 0.0, h) == 0.0
    a = alpha_star(5)
    for h in range(5):
        assert tree_recursion_exact(5, a, h) == pytest.approx(a, abs=1e-6)


def test_tree_bound_dominates_recursion():
    for d in (5, 7, 9, 11):
        a = alpha_star(d)
        for p in (a / 4, a / 2):
            if f_envelope(d, p) >= 1.0:
                continue
            for h in range(7):
                bound = tree_root_red_bound(d, p, h)
                assert tree_recursion_exact(d, p, h) <= bound * (1 + 1e-9)


def test_tree_bound_class():
    tb = TreeBound.compute(5, 0.01, 3)
    assert tb.f_env == f_envelope(5, 0.01)
    assert tb.bound == tree_root_red_bound(5, 0.01, 3)


# ------------------------------------------------------------------- binprop

def test_binprop_known_cases():
    assert binprop_check(2, 0.3)
    assert binprop_check(1, 0.49)


def test_binprop_validation():
    with pytest.raises(ValueError):
        binprop_check(0, 0.3)
    with pytest.raises(ValueError):
        binprop_check(2, 0.5)
    with pytest.raises(ValueError):
        binprop_check(2, 0.0)


@settings(max_examples=30, deadline=None)
@given(N=st.integers(1, 25), pnum=st.integers(1, 499))
def test_binprop_matches_fraction_oracle(N, pnum):
    p = pnum / 1000
    want = tail_fraction(2 * N, N, Fraction(p)) >= tail_fraction(2 * N + 2, N + 1, Fraction(p))
    assert binprop_check(N, p) == want


# ------------------------------------------------------------------ schedule

def test_schedule_constant_value():
    import math

    assert schedule_constant(5, 0.1) == pytest.approx(1.1 * math.log(5) / math.log(2),
                                                      rel=1e-15)
    assert schedule_constant(5, 0.1) == pytest.approx(2.554121, abs=1e-6)


def test_tau_star_values():
    assert tau_star(5, 0.1, 1e5) == pytest.approx(3.12249, abs=1e-4)
    assert tau_star(5, 0.1, 5) == 0.0  # double log vanishes at t = d
    # at t = d^d the inner log_d equals d, so tau* = B * log_d(d) = B
    assert tau_star(5, 0.1, 5**5) == pytest.approx(schedule_constant(5, 0.1), rel=1e-12)


def test_tau_star_rejects_small_t():
    with pytest.raises(ValueError):
        tau_star(5, 0.1, 4.99)
    with pytest.raises(ValueError):
        schedule_constant(5, 0.0)


def test_schedule_class_round_trip():
    cs = ConvergenceSchedule.compute(5, 0.1, 1e5)
    assert cs.B == schedule_constant(5, 0.1)
    assert cs.tau_star == tau_star(5, 0.1, 1e5)


@given(d=st.integers(2, 40).map(lambda i: 2 * i + 1),
       eps=st.floats(0.01, 2.0),
       texp=st.floats(1.0, 8.0))
def test_tau_star_monotone_in_t(d, eps, texp):
    t1, t2 = d ** texp, d ** (texp + 0.5)
    assert tau_star(d, eps, t2) >= tau_star(d, eps, t1)
