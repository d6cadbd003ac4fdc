import io
import math
from fractions import Fraction

import pytest

from sfebounds import bounds
from sfebounds.bounds import (
    InsecureTaskError,
    bob_lower_bound,
    bound_report,
    ca_crossing,
    cb_from_ca,
    emit_curve,
    present,
    solve_fixed_point,
    write_curve_csv,
)
from sfebounds.tasks import make_family

# (b_rand, y_size) per family instance, with the pinned 4-digit constants
SPECIAL_CASES = [
    ("1-of-2 bit OT", Fraction(1, 2), 2, 1.0484),
    ("1-of-3 bit OT", Fraction(1, 4), 3, 1.0326),
    ("1-of-2 trit OT", Fraction(1, 3), 2, 1.0850),
    ("2-of-3 bit OT", Fraction(1, 2), 3, 1.0145),
    ("2-of-4 bit OT", Fraction(1, 4), 6, 1.0056),
    ("3-of-4 bit OT", Fraction(1, 2), 4, 1.0067),
    ("xot n=1", Fraction(1, 2), 3, 1.0145),
    ("xot n=2", Fraction(1, 4), 3, 1.0326),
    ("equality n=3", Fraction(2, 3), 3, 1.0065),
    ("inner product n=3", Fraction(1, 4), 7, 1.0039),
    ("millionaire n=10", Fraction(1, 5), 9, 1.0025),
]


def solve_directly_in_c(b_rand, y_size):
    """Independent route: bisect the fixed-point equation in c itself."""
    k = 1.0 / float(b_rand)
    m = y_size - 1

    def h(c):
        return c - k * (1.0 / c - 2.0 * m * math.sqrt(max(0.0, 1.0 - 1.0 / c)))

    lo, hi = 1.0, k
    assert h(lo) < 0 < h(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if h(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestBobLowerBound:
    def test_boundary_is_exactly_one(self):
        assert bob_lower_bound(Fraction(1, 3), 3) == 1.0
        assert bob_lower_bound(1 / 3, 3) == 1.0  # float roundoff lands on the floor
        assert bob_lower_bound(0.5, 2) == 1.0

    def test_symmetric_point_two_inputs(self):
        # at alice_cheat ~ c/2 for the two-input bit case both bounds meet
        assert bob_lower_bound(0.5242, 2) == pytest.approx(0.5242, abs=2e-4)

    def test_vacuous_region_returned_unclipped(self):
        value = bob_lower_bound(1.0, 3)
        assert value == pytest.approx(1 / 3 - 4 * math.sqrt(2 / 3), abs=1e-12)
        assert value < 0

    def test_below_floor_rejected(self):
        with pytest.raises(ValueError):
            bob_lower_bound(0.2, 3)
        with pytest.raises(ValueError):
            bob_lower_bound(0.5, 0)


class TestCbFromCa:
    def test_left_endpoint_exact(self):
        assert cb_from_ca(1.0, Fraction(1, 2), 2) == 2.0
        assert cb_from_ca(1.0, Fraction(2, 3), 3) == 1.5
        assert cb_from_ca(1.0, Fraction(1, 4), 6) == 4.0
        assert cb_from_ca(1.0, Fraction(1, 2), 3) == 2.0  # three-input xor variant

    def test_right_endpoint_near_one(self):
        assert cb_from_ca(1.0533, Fraction(1, 2), 2) == pytest.approx(1.0, abs=2e-3)

    def test_fixed_point_property(self):
        for name, br, y_size, _ in SPECIAL_CASES:
            fp = solve_fixed_point(br, y_size)
            assert cb_from_ca(fp.c, br, y_size) == pytest.approx(fp.c, abs=1e-10), name

    def test_strictly_decreasing(self):
        for name, br, y_size, _ in SPECIAL_CASES:
            hi = float(1 / br)
            grid = [1.0 + (hi - 1.0) * i / 50 for i in range(51)]
            values = [cb_from_ca(c_a, br, y_size) for c_a in grid]
            assert all(a > b for a, b in zip(values, values[1:])), name

    def test_rejects_ca_below_one(self):
        with pytest.raises(ValueError):
            cb_from_ca(0.99, Fraction(1, 2), 2)


class TestSolveFixedPoint:
    def test_pinned_constants(self):
        for name, br, y_size, expected in SPECIAL_CASES:
            fp = solve_fixed_point(br, y_size)
            assert fp.c == pytest.approx(expected, abs=5e-4), name
            assert not fp.warnings, name

    def test_extreme_scale_excess(self):
        fp = solve_fixed_point(Fraction(2, 10**9), 10**9 - 1)
        assert fp.epsilon == pytest.approx(2.5e-19, rel=0.1)
        assert fp.c == 1.0  # the excess is far below float resolution around 1

    def test_transform_consistency(self):
        for name, br, y_size, _ in SPECIAL_CASES:
            fp = solve_fixed_point(br, y_size)
            recomputed = 1.0 / (1.0 - fp.s * fp.s)
            assert abs(recomputed - fp.c) <= 4 * math.ulp(fp.c), name
            assert fp.epsilon > 0
            assert abs(fp.residual) <= 1e-14
            assert fp.iterations <= 200

    def test_agrees_with_direct_c_bisection(self):
        for name, br, y_size, _ in SPECIAL_CASES:
            fp = solve_fixed_point(br, y_size)
            if fp.epsilon < 1e-6:
                continue
            direct = solve_directly_in_c(br, y_size)
            assert fp.c == pytest.approx(direct, rel=1e-9), name

    def test_root_is_inside_open_interval(self):
        for name, br, y_size, _ in SPECIAL_CASES:
            fp = solve_fixed_point(br, y_size)
            assert 1.0 < fp.c < float(1 / br), name
            assert 0.0 < fp.s < 1.0

    def test_single_input_receiver(self):
        # with |Y| = 1 the square-root term drops and c = sqrt(1/b_rand)
        fp = solve_fixed_point(Fraction(1, 4), 1)
        assert fp.c == pytest.approx(2.0, abs=1e-12)

    def test_degenerate_baselines_rejected(self):
        with pytest.raises(InsecureTaskError):
            solve_fixed_point(Fraction(1), 2)
        with pytest.raises(InsecureTaskError):
            solve_fixed_point(Fraction(3, 2), 2)
        with pytest.raises(ValueError):
            solve_fixed_point(Fraction(0), 2)
        with pytest.raises(ValueError):
            solve_fixed_point(Fraction(-1, 2), 2)


class TestBoundReport:
    def test_pinned_bound_pairs(self):
        cases = [
            (make_family("ot", alphabet=2, n=3), 0.2581, 0.3442),
            (make_family("knot", alphabet=2, n=4, k=2), 0.2514, 0.1676),
            (make_family("mp", n=10), 0.2005, 0.1114),
        ]
        for task, bob, alice in cases:
            report = bound_report(task)
            assert report.bob_bound == pytest.approx(bob, abs=1e-3)
            assert report.alice_bound == pytest.approx(alice, abs=1e-3)

    def test_report_invariants(self):
        for family, params in [
            ("ot", dict(alphabet=2, n=2)),
            ("xot", dict(n=2)),
            ("eq", dict(n=4)),
            ("ip", dict(n=3)),
            ("mp", dict(n=6)),
        ]:
            report = bound_report(make_family(family, **params))
            assert report.c >= 1
            assert report.alice_bound >= float(report.a_rand)
            assert report.bob_bound >= float(report.b_rand)
            assert report.bob_bound <= 1

    def test_insecure_task_flagged_without_solving(self):
        with pytest.raises(InsecureTaskError):
            bound_report(make_family("eq", n=2))

    def test_bruteforce_fallback_for_table_tasks(self):
        from sfebounds.tasks import SfeTask

        # this explicit table coincides with 1-of-2 bit OT, so the report
        # must match that family's numbers without family metadata
        task = SfeTask("ad hoc", 4, 2, 2, table=((0, 0), (0, 1), (1, 0), (1, 1)))
        report = bound_report(task)
        assert report.b_rand == Fraction(1, 2)
        assert report.c == pytest.approx(1.0484, abs=5e-4)


class TestCurves:
    def test_endpoints_and_shape(self):
        points = emit_curve(Fraction(1, 2), 2, samples=200)
        assert len(points) == 200
        assert points[0].c_a == 1.0
        assert points[0].c_b == 2.0
        assert points[-1].c_b == pytest.approx(1.0, abs=1e-9)
        assert all(a.c_b > b.c_b for a, b in zip(points, points[1:]))

    def test_crossing_matches_frozen_value(self):
        assert ca_crossing(Fraction(1, 2), 2) == pytest.approx(1.0531972647421806, abs=1e-9)

    def test_clip_drops_sub_one_samples(self):
        full = emit_curve(Fraction(1, 2), 2, samples=50, ca_max=1.06)
        clipped = emit_curve(Fraction(1, 2), 2, samples=50, ca_max=1.06, clip_below_one=True)
        assert len(clipped) < len(full)
        assert all(p.c_b >= 1.0 - 1e-12 for p in clipped)

    def test_range_validation(self):
        with pytest.raises(ValueError):
            emit_curve(Fraction(1, 2), 2, samples=1)
        with pytest.raises(ValueError):
            emit_curve(Fraction(1, 2), 2, ca_min=1.05, ca_max=1.01)
        with pytest.raises(ValueError):
            emit_curve(Fraction(1, 2), 2, ca_max=2.5)  # beyond 1/b_rand

    def test_csv_format_and_round_trip(self):
        points = emit_curve(Fraction(1, 4), 3, samples=5)
        buffer = io.StringIO()
        write_curve_csv(points, buffer)
        text = buffer.getvalue()
        lines = text.split("\n")
        assert lines[0] == "c_A,c_B"
        assert text.endswith("\n") and "\r" not in text
        for line, point in zip(lines[1:], points):
            ca, cb = line.split(",")
            assert float(ca) == point.c_a and float(cb) == point.c_b

    def test_fixed_point_sits_on_curve(self):
        fp = solve_fixed_point(Fraction(1, 4), 7)  # inner product n=3
        assert fp.c == pytest.approx(1.0039, abs=5e-4)
        assert cb_from_ca(fp.c, Fraction(1, 4), 7) == pytest.approx(fp.c, abs=1e-10)


class TestPresentation:
    def test_half_away_from_zero(self):
        assert present(0.25815) == "0.2582"
        assert present(-0.00005) == "-0.0001"
        assert present(1.04838) == "1.0484"
        assert present(0.5) == "0.5000"
