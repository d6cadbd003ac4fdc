"""Cheating trade-off curve, security-constant fixed point, and curve emission.

For a task with baselines a_rand = 1/|Y| and b_rand < 1, any protocol obeys
a trade-off between the two parties' cheating probabilities; the constant
c > 1 solving

    c = (1/b_rand) * (1/c - 2*(|Y|-1)*sqrt(1 - 1/c))

guarantees that at least one party can cheat with probability >= c times
their baseline.  The root is found in the transformed variable
s = sqrt(1 - 1/c), which turns the equation into the quartic residual

    g(s) = 1 - K*(1 - s^2)*(1 - s^2 - 2*m*s),   K = 1/b_rand, m = |Y| - 1,

bracketed by g(0) = 1 - K < 0 and g(sqrt(1 - b_rand)) > 0.  Solving in s
keeps the extreme regime well conditioned: excesses c - 1 down to ~1e-19
map to s ~ 1e-10, comfortably representable, while c itself rounds to 1.0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Iterable, Optional, TextIO, Union

from .tasks import SfeTask, b_rand

Rational = Union[Fraction, int, float]

SOLVER_MAX_ITERATIONS = 200
SOLVER_WIDTH_TARGET = Fraction(1, 10**16)  # bracket width in s
SOLVER_RESIDUAL_TARGET = Fraction(1, 10**14)


class InsecureTaskError(ValueError):
    """The single-query baseline is already 1: nothing left to bound."""


@dataclass(frozen=True)
class FixedPointResult:
    """Root of the security-constant equation.

    ``s`` is the transformed root sqrt(1 - 1/c); ``epsilon`` is the excess
    c - 1 computed as s^2/(1 - s^2) so tiny excesses survive rounding.
    ``residual`` is g evaluated exactly (rational arithmetic) at the
    solver's final estimate, before rounding s to a float.
    """

    c: float
    s: float
    epsilon: float
    residual: float
    iterations: int
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class BoundReport:
    """Evaluated trade-off for one task: baselines, constant, and bounds."""

    name: str
    y_size: int
    b_rand: Fraction
    a_rand: Fraction
    c: float
    epsilon: float
    alice_bound: float  # c / |Y|
    bob_bound: float  # c * b_rand
    fixed_point: FixedPointResult = field(repr=False)


@dataclass(frozen=True)
class CurvePoint:
    c_a: float
    c_b: float


def bob_lower_bound(alice_cheat: Rational, y_size: int) -> float:
    """Lower bound on the receiver's full-learning probability given the
    sender's cheating probability.

    Evaluates t - 2*(|Y|-1)*sqrt(1-t) with t = 1/(|Y|*alice_cheat).  The
    value may be negative (a vacuous bound) and is returned unmodified.
    Requires alice_cheat >= 1/|Y|, the blind-guess floor; at the floor the
    bound is exactly 1.
    """
    if y_size < 1:
        raise ValueError("y_size must be positive")
    u = alice_cheat * y_size
    if u < 1 - 1e-12:
        raise ValueError(f"alice_cheat {alice_cheat} below the blind-guess floor 1/{y_size}")
    uf = float(u)
    if uf <= 1.0:
        return 1.0
    t = 1.0 / uf
    return t - 2.0 * (y_size - 1) * math.sqrt(1.0 - t)


def cb_from_ca(c_a: float, b_rand_value: Rational, y_size: int) -> float:
    """Lower bound on the receiver's gap factor c_B at sender gap c_A."""
    if c_a < 1:
        raise ValueError("c_a must be at least 1")
    if y_size < 1:
        raise ValueError("y_size must be positive")
    k = float(1 / Fraction(b_rand_value))
    inv = 1.0 / c_a
    return k * (inv - 2.0 * (y_size - 1) * math.sqrt(1.0 - inv))


def _quartic_residual(k: Fraction, m: int):
    def g(s: Fraction) -> Fraction:
        u = 1 - s * s
        return 1 - k * u * (u - 2 * m * s)

    return g


def solve_fixed_point(b_rand_value: Rational, y_size: int) -> FixedPointResult:
    """Solve the security-constant equation for given baseline and |Y|.

    Bisection runs on the quartic residual g with exact rational
    arithmetic, so sign decisions are never corrupted by rounding and the
    bracket can shrink far below float resolution; it stops once the
    bracket is narrower than 1e-16 and |g| <= 1e-14 at the midpoint (at
    most 200 iterations).  A 1024-point pre-scan looks for unexpected
    extra sign changes; if any exist the smallest root is taken and a
    warning is attached.
    """
    if y_size < 1:
        raise ValueError("y_size must be positive")
    br = Fraction(b_rand_value)
    if br >= 1:
        raise InsecureTaskError("baseline is 1: completely insecure, no constant to solve")
    if br <= 0:
        raise ValueError("b_rand must be positive")

    k = 1 / br
    m = y_size - 1
    g = _quartic_residual(k, m)
    warnings: list[str] = []

    s_hi = Fraction(math.sqrt(1.0 - float(br)))
    while g(s_hi) <= 0:  # float sqrt can land a hair short of the sign flip
        s_hi = (s_hi + 1) / 2

    # pre-scan for multiple roots; the equation is expected to have one
    lo, hi = Fraction(0), s_hi
    changes = []
    prev_sign = -1  # g(0) = 1 - K < 0
    prev_s = Fraction(0)
    for i in range(1, 1025):
        s = s_hi * i / 1024
        sign = 1 if g(s) >= 0 else -1
        if sign != prev_sign:
            changes.append((prev_s, s))
        prev_sign, prev_s = sign, s
    if len(changes) > 1:
        warnings.append(f"{len(changes)} sign changes detected; using the smallest root")
        lo, hi = changes[0]

    mid = (lo + hi) / 2
    g_mid = g(mid)
    iterations = 0
    for iterations in range(1, SOLVER_MAX_ITERATIONS + 1):
        mid = (lo + hi) / 2
        g_mid = g(mid)
        if g_mid == 0:
            break
        if g_mid < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= SOLVER_WIDTH_TARGET and abs(g_mid) <= SOLVER_RESIDUAL_TARGET:
            break
    else:
        warnings.append("residual target not reached within iteration budget")

    s = float(mid)
    c = 1.0 / (1.0 - s * s)
    epsilon = s * s / (1.0 - s * s)
    return FixedPointResult(
        c=c,
        s=s,
        epsilon=epsilon,
        residual=float(g_mid),
        iterations=iterations,
        warnings=tuple(warnings),
    )


def bound_report(task: SfeTask) -> BoundReport:
    """Baselines, solved constant, and the two multiplicative bounds.

    Raises InsecureTaskError when the receiver baseline is already 1.
    """
    br = b_rand(task)
    if br >= 1:
        raise InsecureTaskError(f"{task.name}: completely insecure (baseline {br})")
    fp = solve_fixed_point(br, task.y_size)
    return BoundReport(
        name=task.name,
        y_size=task.y_size,
        b_rand=br,
        a_rand=Fraction(1, task.y_size),
        c=fp.c,
        epsilon=fp.epsilon,
        alice_bound=fp.c / task.y_size,
        bob_bound=fp.c * float(br),
        fixed_point=fp,
    )


def ca_crossing(b_rand_value: Rational, y_size: int, target: float = 1.0) -> float:
    """The c_A at which the trade-off curve c_B(c_A) falls to ``target``.

    Float bisection on the strictly decreasing curve over [1, 1/b_rand].
    """
    br = Fraction(b_rand_value)
    if not 0 < br < 1:
        raise ValueError("b_rand must lie in (0, 1)")
    lo, hi = 1.0, float(1 / br)
    if cb_from_ca(lo, br, y_size) < target:
        raise ValueError(f"curve starts below target {target}")
    if cb_from_ca(hi, br, y_size) >= target:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if cb_from_ca(mid, br, y_size) >= target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def emit_curve(
    b_rand_value: Rational,
    y_size: int,
    samples: int = 200,
    ca_min: float = 1.0,
    ca_max: Optional[float] = None,
    clip_below_one: bool = False,
) -> list[CurvePoint]:
    """Evenly spaced samples of the trade-off curve.

    ``ca_max`` defaults to the point where c_B reaches 1, matching how the
    curves are plotted.  With ``clip_below_one`` samples whose c_B drops
    below 1 are dropped (the plots show only c_B >= 1).
    """
    br = Fraction(b_rand_value)
    if samples < 2:
        raise ValueError("need at least 2 samples")
    if ca_max is None:
        ca_max = ca_crossing(br, y_size)
    if not 1.0 <= ca_min < ca_max:
        raise ValueError(f"bad c_a range [{ca_min}, {ca_max}]")
    if ca_max > float(1 / br) * (1 + 1e-12):
        raise ValueError(f"ca_max {ca_max} beyond 1/b_rand = {float(1 / br)}")
    step = (ca_max - ca_min) / (samples - 1)
    points = []
    for i in range(samples):
        c_a = ca_min + i * step
        c_b = cb_from_ca(c_a, br, y_size)
        if clip_below_one and c_b < 1.0 - 1e-12:
            continue
        points.append(CurvePoint(c_a=c_a, c_b=c_b))
    return points


def write_curve_csv(points: Iterable[CurvePoint], out: TextIO) -> None:
    """CSV with header c_A,c_B; shortest round-trip decimals, LF endings."""
    out.write("c_A,c_B\n")
    for pt in points:
        out.write(f"{pt.c_a!r},{pt.c_b!r}\n")


def present(value: float, digits: int = 4) -> str:
    """Round half away from zero to ``digits`` decimals, for display."""
    quantum = Decimal(1).scaleb(-digits)
    return str(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))
