"""Floating-point cross-validation of the closed forms.

The chain member is integrated as a first-order system with an embedded
Dormand-Prince 5(4) pair under PI step-size control; initial conditions come
from the exact derivative tower of the closed form at the left endpoint.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .chains import ABEL, RICCATI, ChainEquation, ChainFamily, generate_chain
from .kernel import jet_exponents
from .kernel.roots import real_roots, sign_on, to_coeffs, horner
from .report import FAIL, PASS, CheckEntry, VerificationReport
from .solutions import SolutionFamily, direct_solution

SAMPLES_PER_UNIT = 64
MIN_COMPARISON_POINTS = 200
UNDERFLOW_FRACTION = 1e-13
MAX_STEPS = 200_000


class StepUnderflow(ArithmeticError):
    def __init__(self, last_x: float, step: float, reason: str = "step size underflow"):
        super().__init__(f"{reason} at x = {last_x!r} (step {step:.3g})")
        self.last_x = last_x
        self.step = step


class PoleInInterval(ArithmeticError):
    def __init__(self, root, interval):
        super().__init__(f"pole at x = {float(root)!r} inside {[float(a) for a in interval]}")
        self.root = root
        self.interval = interval


class NotRealOnInterval(ArithmeticError):
    """The Abel radicand is negative on the interval."""


@dataclass(frozen=True)
class IVP:
    equation: ChainEquation
    x0: float
    state: Tuple[float, ...]

    def __post_init__(self):
        if len(self.state) != self.equation.order:
            raise ValueError(f"state needs {self.equation.order} components, got {len(self.state)}")


@dataclass
class Trajectory:
    xs: List[float]
    states: List[Tuple[float, ...]]
    steps: int = 0
    rejected: int = 0
    min_step: float = math.inf

    def values(self, k: int = 0) -> List[float]:
        return [s[k] for s in self.states]


# --- right-hand side ---------------------------------------------------------------

def compile_rhs(eq: ChainEquation) -> Callable[[float, Sequence[float]], Tuple[float, ...]]:
    """``y = (u, u', ..., u^(N-1))``; ``u^(N) = -(E_N - u^(N))`` generated as Python source."""
    n = eq.order
    top = eq.highest_derivative_rhs()
    terms = []
    for mono, c in top.terms.items():
        factors = [repr(float(c))]
        for k, e in sorted(jet_exponents(mono, eq.dep).items()):
            if k >= n:
                raise ValueError("right-hand side depends on the highest derivative")
            factors.append(f"y{k}" if e == 1 else f"y{k}**{e}")
        terms.append("*".join(factors))
    names = ", ".join(f"y{k}" for k in range(n))
    shifted = ", ".join(f"y{k}" for k in range(1, n))
    body = f"({shifted}, {' + '.join(terms) or '0.0'})" if n > 1 else f"({' + '.join(terms) or '0.0'},)"
    src = f"def rhs(x, y):\n    {names}{',' if n == 1 else ''} = y\n    return {body}\n"
    scope: dict = {}
    exec(compile(src, f"<rhs {eq.family.value} {n}>", "exec"), scope)
    return scope["rhs"]


# --- Dormand-Prince 5(4) ------------------------------------------------------------

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


def _combine(y, h, coeffs, ks):
    out = list(y)
    for a, k in zip(coeffs, ks):
        if a:
            ha = h * a
            for i, ki in enumerate(k):
                out[i] += ha * ki
    return out


def dopri_step(f, x, y, h, k1=None):
    """One step; returns ``(y5, error_vector, k7)``. ``k7`` is f at the new point (FSAL)."""
    ks = [k1 if k1 is not None else f(x, y)]
    for s in range(1, 7):
        ks.append(f(x + _C[s] * h, _combine(y, h, _A[s], ks)))
    y5 = _combine(y, h, _B5, ks)
    err = [h * sum(e * k[i] for e, k in zip(_E, ks) if e) for i in range(len(y))]
    return y5, err, ks[6]


def _error_norm(err, y, ynew, rtol, atol) -> float:
    acc = 0.0
    for e, a, b in zip(err, y, ynew):
        sc = atol + rtol * max(abs(a), abs(b))
        acc += (e / sc) ** 2
    return math.sqrt(acc / len(err))


def _finite(v) -> bool:
    return all(math.isfinite(t) for t in v)


def integrate(ivp: IVP, x_end: float, rel_tol: float = 1e-9, abs_tol: float = 1e-12,
              samples_per_unit: int = SAMPLES_PER_UNIT, min_samples: int = 2) -> Trajectory:
    """Adaptive integration with output on a uniform grid (steps are clipped to land on it)."""
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    x0 = float(ivp.x0)
    x_end = float(x_end)
    if x_end == x0:
        raise ValueError("x_end must differ from x0")
    f = compile_rhs(ivp.equation)
    length = abs(x_end - x0)
    direction = 1.0 if x_end > x0 else -1.0
    n_pts = max(min_samples, math.ceil(samples_per_unit * length) + 1)
    grid = [x0 + (x_end - x0) * i / (n_pts - 1) for i in range(n_pts)]
    h_min = UNDERFLOW_FRACTION * length

    y = [float(v) for v in ivp.state]
    traj = Trajectory([x0], [tuple(y)])
    k1 = f(x0, y)
    h = _initial_step(f, x0, y, k1, direction, rel_tol, abs_tol, length)
    x = x0
    err_old = 1e-4
    target = 1
    while target < n_pts:
        if traj.steps + traj.rejected > MAX_STEPS:
            raise StepUnderflow(x, h, "step budget exhausted")
        gap = grid[target] - x
        step = direction * min(h, abs(gap))
        landing = abs(step) >= abs(gap)
        if abs(step) < h_min:
            raise StepUnderflow(x, abs(step))
        ynew, err, k7 = dopri_step(f, x, y, step, k1)
        if not (_finite(ynew) and _finite(err)):
            traj.rejected += 1
            h = abs(step) * 0.2
            continue
        e = _error_norm(err, y, ynew, rel_tol, abs_tol)
        if e <= 1.0:
            x = grid[target] if landing else x + step
            y, k1 = ynew, k7
            traj.steps += 1
            traj.min_step = min(traj.min_step, abs(step))
            if landing:
                traj.xs.append(x)
                traj.states.append(tuple(y))
                target += 1
            # PI controller; a step shortened to hit the grid does not shrink h
            fac = 0.9 * max(e, 1e-10) ** -0.17 * err_old ** 0.04
            proposal = abs(step) * min(10.0, max(0.2, fac))
            h = max(h, proposal) if abs(step) < h else proposal
            err_old = max(e, 1e-4)
        else:
            traj.rejected += 1
            h = abs(step) * max(0.2, 0.9 * e ** -0.2)
    return traj


def _initial_step(f, x0, y, k1, direction, rtol, atol, length) -> float:
    sc = [atol + rtol * abs(v) for v in y]
    d0 = math.sqrt(sum((v / s) ** 2 for v, s in zip(y, sc)) / len(y))
    d1 = math.sqrt(sum((v / s) ** 2 for v, s in zip(k1, sc)) / len(y))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, length)
    y1 = [a + direction * h0 * b for a, b in zip(y, k1)]
    k2 = f(x0 + direction * h0, y1)
    d2 = math.sqrt(sum(((a - b) / s) ** 2 for a, b, s in zip(k2, k1, sc)) / len(y)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, length)


def integrate_fixed(ivp: IVP, x_end: float, h: float) -> Tuple[float, ...]:
    """Fixed-step fifth-order solution at ``x_end`` (no error control)."""
    f = compile_rhs(ivp.equation)
    n = max(1, round(abs(x_end - ivp.x0) / h))
    step = (x_end - ivp.x0) / n
    x, y = float(ivp.x0), [float(v) for v in ivp.state]
    for _ in range(n):
        y, _, _ = dopri_step(f, x, y, step)
        x += step
    return tuple(y)


def measure_order(steps: Sequence[float] = (0.1, 0.05, 0.025, 0.0125)) -> Tuple[float, List[float]]:
    """Least-squares slope of log(error) vs log(h) on ``u' = -u^2``, ``u(1) = 1``, over [1, 2]."""
    ivp = IVP(generate_chain(RICCATI, 1), 1.0, (1.0,))
    errors = [abs(integrate_fixed(ivp, 2.0, h)[0] - 0.5) for h in steps]
    lx = [math.log(h) for h in steps]
    ly = [math.log(e) for e in errors]
    mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
    slope = sum((a - mx) * (b - my) for a, b in zip(lx, ly)) / sum((a - mx) ** 2 for a in lx)
    return slope, errors


# --- closed-form comparison -----------------------------------------------------------

def pole_scan(sol: SolutionFamily, interval, width=Fraction(1, 10 ** 12)) -> List[Fraction]:
    """Real roots of the Riccati denominator or the Abel radicand in the closed interval."""
    lo, hi = (Fraction(v) for v in interval)
    return real_roots(sol.denominator, lo, hi, width)


def initial_state(sol: SolutionFamily, x0) -> Tuple[float, ...]:
    """``(u, u', ..., u^(N-1))`` at ``x0`` from the exact tower, rounded once per component."""
    x0 = Fraction(x0)
    out = []
    for form in sol.power_form().tower(sol.order - 1):
        num = Fraction(form.num.evaluate({"x": x0}))
        base = Fraction(form.base.evaluate({"x": x0}))
        if base == 0:
            raise PoleInInterval(x0, (x0, x0))
        whole, half = divmod(form.h, 2)
        exact = num / base ** whole
        if half:
            if base < 0:
                raise NotRealOnInterval(f"radicand negative at x = {x0}")
            out.append(float(exact) / math.sqrt(base))
        else:
            out.append(float(exact))
    return tuple(out)


def exact_values(sol: SolutionFamily, xs: Sequence[float]) -> List[float]:
    num = to_coeffs(sol.numerator)
    den = to_coeffs(sol.denominator)
    out = []
    for x in xs:
        fx = Fraction(x)
        p, d = horner(num, fx), horner(den, fx)
        out.append(float(p / d) if sol.family is RICCATI else float(p) / math.sqrt(d))
    return out


@dataclass(frozen=True)
class CrossCheckResult:
    deviation: float
    threshold: float
    trajectory: Trajectory
    exact: List[float]

    @property
    def passed(self) -> bool:
        return self.deviation < self.threshold


def max_deviation(numeric: Sequence[float], exact: Sequence[float]) -> float:
    """``max |u_num - u_exact| / max(1, |u_exact|)``."""
    return max(abs(a - b) / max(1.0, abs(b)) for a, b in zip(numeric, exact))


def run_cross_check(family, n: int, constants, interval, rel_tol: float = 1e-9,
                    abs_tol: Optional[float] = None) -> CrossCheckResult:
    family = ChainFamily.parse(family)
    lo, hi = (Fraction(v) for v in interval)
    if hi <= lo:
        raise ValueError("interval must be increasing")
    sol = direct_solution(family, n, [Fraction(c) for c in constants])
    roots = pole_scan(sol, (lo, hi))
    if roots:
        raise PoleInInterval(roots[0], (lo, hi))
    if family is ABEL and sign_on(sol.denominator, (lo + hi) / 2) < 0:
        raise NotRealOnInterval(f"radicand negative on [{float(lo)}, {float(hi)}]")
    ivp = IVP(generate_chain(family, n), float(lo), initial_state(sol, lo))
    length = float(hi - lo)
    per_unit = max(SAMPLES_PER_UNIT, math.ceil((MIN_COMPARISON_POINTS - 1) / length))
    traj = integrate(ivp, float(hi), rel_tol, abs_tol if abs_tol is not None else rel_tol * 1e-3,
                     samples_per_unit=per_unit, min_samples=MIN_COMPARISON_POINTS)
    exact = exact_values(sol, traj.xs)
    dev = max_deviation(traj.values(0), exact)
    return CrossCheckResult(dev, 100 * rel_tol, traj, exact)


def cross_check(family, n: int, constants, interval, rel_tol: float = 1e-9) -> VerificationReport:
    family = ChainFamily.parse(family)
    res = run_cross_check(family, n, constants, interval, rel_tol)
    report = VerificationReport(f"numerical cross-check, {family.value} N={n}")
    consts = ",".join(str(Fraction(c)) for c in constants)
    report.add(CheckEntry(
        f"{family.value} N={n} k=({consts}) on [{interval[0]}, {interval[1]}]",
        PASS if res.passed else FAIL, f"{family.value} chain general solution, order {n}",
        f"{res.deviation:.3e}", family.value, n,
        f"threshold {res.threshold:.1e}; {len(res.trajectory.xs)} points; "
        f"{res.trajectory.steps} steps, {res.trajectory.rejected} rejected"))
    report.data["samples"] = [[x, u] for x, u in zip(res.trajectory.xs, res.trajectory.values(0))]
    return report


def singularity_distance(sol: SolutionFamily, lo: float, hi: float) -> float:
    """Distance from ``[lo, hi]`` to the nearest complex root of the denominator or radicand."""
    coeffs = [float(c) for c in reversed(to_coeffs(sol.denominator))]
    if len(coeffs) < 2:
        return math.inf
    dist = math.inf
    for z in np.roots(coeffs):
        nearest = min(max(z.real, lo), hi)
        dist = min(dist, abs(z - nearest))
    return dist


def random_case(family, n: int, rng: random.Random, length: float = 1.0, margin: float = 0.25,
                span: int = 6, tries: int = 500):
    """Random small rational constants and an interval of the given length whose
    distance to every complex singularity of the closed form is at least ``margin``."""
    family = ChainFamily.parse(family)
    for _ in range(tries):
        consts = [Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for _ in range(n)]
        sol = direct_solution(family, n, consts)
        a = Fraction(rng.uniform(-span, span - length)).limit_denominator(64)
        b = a + Fraction(length).limit_denominator(64)
        if singularity_distance(sol, float(a), float(b)) < margin:
            continue
        if real_roots(sol.denominator, a, b):
            continue
        if family is ABEL and sign_on(sol.denominator, (a + b) / 2) <= 0:
            continue
        return consts, (a, b)
    raise RuntimeError("no pole-free interval found")


def reduction_consistency(traj: Trajectory, family, order: int) -> float:
    """Max residual of Riccati N-1 at ``zeta = u'/u + u^m`` with 5-point finite differences."""
    family = ChainFamily.parse(family)
    if not 2 <= order <= 3:
        raise ValueError("finite-difference check supports orders 2 and 3")
    m = family.exponent
    xs = traj.xs
    h = xs[1] - xs[0]
    z = [s[1] / s[0] + s[0] ** m for s in traj.states]
    worst = 0.0
    for i in range(2, len(z) - 2):
        d1 = (z[i - 2] - 8 * z[i - 1] + 8 * z[i + 1] - z[i + 2]) / (12 * h)
        if order == 2:
            r = d1 + z[i] ** 2
        else:
            d2 = (-z[i - 2] + 16 * z[i - 1] - 30 * z[i] + 16 * z[i + 1] - z[i + 2]) / (12 * h * h)
            r = d2 + 3 * z[i] * d1 + z[i] ** 3
        worst = max(worst, abs(r))
    return worst


__all__ = [
    "IVP", "Trajectory", "StepUnderflow", "PoleInInterval", "NotRealOnInterval",
    "CrossCheckResult", "compile_rhs", "dopri_step", "integrate", "integrate_fixed",
    "measure_order", "pole_scan", "initial_state", "exact_values", "max_deviation",
    "run_cross_check", "cross_check", "random_case", "singularity_distance", "reduction_consistency",
]
