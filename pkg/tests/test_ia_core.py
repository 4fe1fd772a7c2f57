import math

import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st

from interstatis import ia_core
from interstatis.errors import (
    ArithmeticOverflowError,
    IntervalDivisionError,
    InvalidIntervalError,
    NegativeSqrtError,
    NumericalError,
)
from interstatis.ia_core import Interval

N_PAIRS = 10_000
N_SAMPLES = 100

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False, allow_subnormal=False)


@st.composite
def intervals(draw, elements=finite):
    a = draw(elements)
    b = draw(elements)
    return Interval(min(a, b), max(a, b))


@st.composite
def nested_intervals(draw):
    """Par (a, a') com a ⊆ a'."""
    a = draw(intervals())
    folga_lo = draw(st.floats(min_value=0.0, max_value=10.0))
    folga_hi = draw(st.floats(min_value=0.0, max_value=10.0))
    return a, Interval(a.lo - folga_lo, a.hi + folga_hi)


def test_construction_rejects_bad_endpoints():
    with pytest.raises(InvalidIntervalError):
        Interval(2.0, 1.0)
    with pytest.raises(InvalidIntervalError):
        Interval(float('nan'), 1.0)
    with pytest.raises(InvalidIntervalError):
        Interval(0.0, float('inf'))
    with pytest.raises(ValueError):
        Interval('a', 1.0)


def test_basic_operations():
    assert ia_core.add(Interval(1, 2), Interval(3, 5)) == Interval(4, 7)
    assert ia_core.sub(Interval(1, 2), Interval(3, 5)) == Interval(-4, -1)
    assert ia_core.mul(Interval(-1, 2), Interval(3, 4)) == Interval(-4, 8)
    assert ia_core.div(Interval(1, 2), Interval(4, 8)) == Interval(0.125, 0.5)
    assert ia_core.sqrt(Interval(4, 9)) == Interval(2, 3)
    assert ia_core.scalar_mul(-2, Interval(1, 3)) == Interval(-6, -2)


def test_operators_accept_reals():
    x = Interval(1, 2)
    assert x + 1 == Interval(2, 3)
    assert 1 + x == Interval(2, 3)
    assert 1 - x == Interval(-1, 0)
    assert x - 1 == Interval(0, 1)
    assert 2 * x == Interval(2, 4)
    assert x * -1 == Interval(-2, -1)
    assert x / 2 == Interval(0.5, 1)
    assert -x == Interval(-2, -1)
    assert x * Interval(-1, 1) == Interval(-2, 2)


def test_division_by_interval_containing_zero():
    for divisor in (Interval(-1, 1), Interval(0, 1), Interval(-1, 0), Interval.point(0)):
        with pytest.raises(IntervalDivisionError) as exc:
            ia_core.div(Interval(1, 2), divisor)
        assert isinstance(exc.value, ZeroDivisionError)
        assert exc.value.exit_code == 2


def test_sqrt_of_negative_lower_endpoint():
    with pytest.raises(NegativeSqrtError):
        ia_core.sqrt(Interval(-1, 4))


def test_overflow_is_reported():
    with pytest.raises(ArithmeticOverflowError):
        ia_core.mul(Interval(1e200, 1e200), Interval(1e200, 1e200))
    with pytest.raises(NumericalError):
        ia_core.add(Interval(1.7e308, 1.7e308), Interval(1.7e308, 1.7e308))


def test_midpoint_near_max_float():
    assert ia_core.midpoint(Interval(1e308, 1.5e308)) == pytest.approx(1.25e308, rel=1e-14)
    assert math.isfinite(Interval(-1.7e308, -1.6e308).midpoint)


def test_helpers():
    x = Interval(1, 3)
    assert x.midpoint == 2 and x.width == 2 and x.radius == 1
    assert ia_core.contains(x, 1) and ia_core.contains(x, 3) and not ia_core.contains(x, 3.5)
    assert ia_core.is_subset(Interval(1.5, 2), x)
    assert not ia_core.is_subset(Interval(0.5, 2), x)
    assert ia_core.is_subset(Interval(0.9, 2), x, tol=0.1 + 1e-12)
    assert Interval.point(4).is_degenerate()
    assert Interval(1, 1 + 1e-9).is_degenerate(tol=1e-8)
    assert str(Interval(1, 2)) == '[1.0, 2.0]'


def test_tightness_and_enclosure_on_random_pairs():
    rng = np.random.default_rng(7)
    a = np.sort(rng.uniform(-10, 10, size=(N_PAIRS, 2)), axis=1)
    b = np.sort(rng.uniform(-10, 10, size=(N_PAIRS, 2)), axis=1)
    for k in range(N_PAIRS):
        x = Interval(*a[k])
        y = Interval(*b[k])

        assert ia_core.add(x, y) == Interval(x.lo + y.lo, x.hi + y.hi)
        assert ia_core.sub(x, y) == Interval(x.lo - y.hi, x.hi - y.lo)

        produtos = [x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi]
        m = ia_core.mul(x, y)
        assert m == Interval(min(produtos), max(produtos))

        ta = rng.uniform(x.lo, x.hi, N_SAMPLES)
        tb = rng.uniform(y.lo, y.hi, N_SAMPLES)
        assert np.all((m.lo <= ta * tb) & (ta * tb <= m.hi))

        if not y.lo <= 0.0 <= y.hi:
            quocientes = [x.lo / y.lo, x.lo / y.hi, x.hi / y.lo, x.hi / y.hi]
            d = ia_core.div(x, y)
            assert d == Interval(min(quocientes), max(quocientes))
            assert np.all((d.lo <= ta / tb) & (ta / tb <= d.hi))


@seed(11)
@given(st.floats(-1e6, 1e6, allow_subnormal=False), st.floats(-1e6, 1e6, allow_subnormal=False))
def test_degenerate_operands_give_real_results(a, b):
    x, y = Interval.point(a), Interval.point(b)
    assert ia_core.add(x, y) == Interval.point(a + b)
    assert ia_core.sub(x, y) == Interval.point(a - b)
    assert ia_core.mul(x, y) == Interval.point(a * b)
    if b != 0:
        assert ia_core.div(x, y) == Interval.point(a / b)
    if a >= 0:
        assert ia_core.sqrt(x) == Interval.point(math.sqrt(a))


@seed(12)
@given(nested_intervals(), nested_intervals())
def test_inclusion_monotonicity(par_a, par_b):
    a, a_largo = par_a
    b, b_largo = par_b
    for op in (ia_core.add, ia_core.sub, ia_core.mul):
        assert ia_core.is_subset(op(a, b), op(a_largo, b_largo))
    if not b_largo.lo <= 0.0 <= b_largo.hi:
        assert ia_core.is_subset(ia_core.div(a, b), ia_core.div(a_largo, b_largo))


@seed(13)
@given(st.floats(-100, 100, allow_subnormal=False), intervals())
def test_scalar_mul_matches_point_product(c, x):
    assert ia_core.scalar_mul(c, x) == ia_core.mul(Interval.point(c), x)
