import math

import pytest
from hypothesis import given, strategies as st

from estimation.angle import (
    TWO_PI,
    Angle,
    CandidateSet,
    angular_distance,
    candidate_set,
    nearest_candidate,
    reference_angle,
    wrap,
    wrapped_abs,
)
from utils.exceptions import InvalidArgumentError

finite_angles = st.floats(min_value=-100.0, max_value=100.0, allow_nan=False, allow_infinity=False)


def test_wrap_canonical_range():
    assert wrap(TWO_PI + 0.5) == pytest.approx(0.5)
    assert wrap(-0.5) == pytest.approx(TWO_PI - 0.5)
    assert wrap(0.0) == 0.0
    assert wrap(TWO_PI) == 0.0


def test_angle_arithmetic_stays_wrapped():
    a = Angle(6.0)
    assert 0.0 <= a + 1.0 < TWO_PI
    assert float(a + 1.0) == pytest.approx(7.0 - TWO_PI)
    assert float(1.0 - a) == pytest.approx(1.0 - 6.0 + TWO_PI)
    assert float(-Angle(1.0)) == pytest.approx(TWO_PI - 1.0)
    assert float(Angle(1.5) * 4) == pytest.approx(6.0)
    assert isinstance(a + 1.0, Angle)


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), -float("inf")])
def test_non_finite_angles_rejected(bad):
    with pytest.raises(InvalidArgumentError):
        Angle(bad)


@given(finite_angles)
def test_wrapped_abs_is_a_circle_distance(theta):
    d = wrapped_abs(theta)
    assert 0.0 <= d <= math.pi
    assert d == pytest.approx(wrapped_abs(-theta), abs=1e-12)


@given(finite_angles, finite_angles)
def test_wrapped_abs_triangle_inequality(a, b):
    assert wrapped_abs(a + b) <= wrapped_abs(a) + wrapped_abs(b) + 1e-12


@given(finite_angles)
def test_reference_angle_range(theta):
    r = reference_angle(theta)
    assert -math.pi <= r < math.pi
    assert angular_distance(r, theta) < 1e-9


def test_wrapped_abs_examples():
    assert wrapped_abs(0.0) == 0.0
    assert wrapped_abs(math.pi) == pytest.approx(math.pi)
    assert wrapped_abs(TWO_PI - 0.1) == pytest.approx(0.1)


def test_candidate_set_members():
    s = candidate_set(1.0, 3)
    assert len(s) == 8
    assert s.spacing == pytest.approx(TWO_PI / 8)
    for k, member in enumerate(s):
        assert float(member) == pytest.approx((TWO_PI * k + 1.0) / 8)
        assert s.contains(member)
    assert not s.contains(float(s.member(0)) + 0.01)


def test_candidate_set_level_zero_is_base():
    s = candidate_set(2.5, 0)
    assert list(s) == [Angle(2.5)]


@pytest.mark.parametrize("level", [-1, 63, 1.5, True])
def test_candidate_set_rejects_bad_levels(level):
    with pytest.raises(InvalidArgumentError):
        CandidateSet(level=level, base=0.0)


def test_member_index_bounds():
    with pytest.raises(InvalidArgumentError):
        candidate_set(0.0, 2).member(4)


@given(st.integers(min_value=0, max_value=12),
       st.floats(min_value=0.0, max_value=TWO_PI, exclude_max=True),
       finite_angles)
def test_nearest_candidate_matches_brute_force(level, base, theta_prev):
    s = candidate_set(base, level)
    chosen = nearest_candidate(s, theta_prev)
    best = min(angular_distance(m, theta_prev) for m in s)
    assert s.contains(chosen)
    assert angular_distance(chosen, theta_prev) <= best + 1e-12


def test_nearest_candidate_tie_prefers_smaller_index():
    # members 0 and π are both π/2 away
    s = candidate_set(0.0, 1)
    assert nearest_candidate(s, math.pi / 2) == s.member(0)


def test_nearest_candidate_deep_level_without_enumeration():
    s = candidate_set(0.7, 40)
    chosen = nearest_candidate(s, 2.0)
    assert angular_distance(chosen, 2.0) <= math.pi / 2 ** 40 + 1e-12
