import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from chainlab.chains import ABEL, RICCATI, generate_chain
from chainlab.numcheck import (IVP, NotRealOnInterval, PoleInInterval, StepUnderflow,
                               compile_rhs, cross_check, dopri_step, exact_values, initial_state,
                               integrate, integrate_fixed, max_deviation, measure_order,
                               pole_scan, random_case, reduction_consistency, run_cross_check,
                               singularity_distance)
from chainlab.solutions import abel_solution, direct_solution, riccati_solution


def test_riccati_one_example():
    traj = integrate(IVP(generate_chain(RICCATI, 1), 1.0, (1.0,)), 2.0)
    assert traj.xs[-1] == 2.0
    assert abs(traj.states[-1][0] - 0.5) < 1e-9
    assert max(abs(u - 1 / x) for x, (u,) in zip(traj.xs, traj.states)) < 1e-9


def test_riccati_two_example():
    traj = integrate(IVP(generate_chain(RICCATI, 2), 1.0, (2.0, -2.0)), 3.0)
    assert abs(traj.states[-1][0] - 2 / 3) < 1e-8


def test_pole_gives_step_underflow():
    # u = 1/x through u(-1/2) = -2 blows up at 0
    with pytest.raises(StepUnderflow) as info:
        integrate(IVP(generate_chain(RICCATI, 1), -0.5, (-2.0,)), 0.5)
    assert abs(info.value.last_x) < 1e-6


def test_positive_start_has_no_pole():
    # u(-1/2) = 2 is u = 1/(x+1), regular on [-1/2, 1/2]
    traj = integrate(IVP(generate_chain(RICCATI, 1), -0.5, (2.0,)), 0.5)
    assert abs(traj.states[-1][0] - 1 / 1.5) < 1e-9


def test_backward_integration():
    traj = integrate(IVP(generate_chain(RICCATI, 1), 2.0, (0.5,)), 1.0)
    assert traj.xs[-1] == 1.0 and abs(traj.states[-1][0] - 1.0) < 1e-9


def test_grid_and_bookkeeping():
    traj = integrate(IVP(generate_chain(RICCATI, 1), 1.0, (1.0,)), 2.0, samples_per_unit=10)
    assert len(traj.xs) == 11
    assert np.allclose(np.diff(traj.xs), 0.1)
    assert traj.steps >= 10 and traj.min_step <= 0.1


def test_argument_validation():
    eq = generate_chain(RICCATI, 2)
    with pytest.raises(ValueError):
        IVP(eq, 0.0, (1.0,))
    with pytest.raises(ValueError):
        integrate(IVP(eq, 1.0, (1.0, 0.0)), 1.0)
    with pytest.raises(ValueError):
        integrate(IVP(eq, 1.0, (1.0, 0.0)), 2.0, rel_tol=0)


def test_rhs_matches_equation():
    eq = generate_chain(ABEL, 3)
    f = compile_rhs(eq)
    y = (0.3, -1.2, 0.7)
    out = f(0.0, y)
    assert out[:2] == (y[1], y[2])
    env = {"u_0": 0.3, "u_1": -1.2, "u_2": 0.7, "u_3": out[2]}
    assert abs(eq.lhs.evaluate(env)) < 1e-12


def test_dopri_single_step_on_exponential():
    # y' = y from 0 with h = 0.1: local error of the 5th order solution is O(h^6)
    y5, err, _ = dopri_step(lambda x, y: (y[0],), 0.0, [1.0], 0.1)
    assert abs(y5[0] - math.exp(0.1)) < 1e-8
    assert abs(err[0]) < 1e-6


def test_measured_order():
    slope, errors = measure_order()
    assert slope >= 4.5
    assert errors == sorted(errors, reverse=True)


def test_fixed_step_matches_exact():
    y = integrate_fixed(IVP(generate_chain(RICCATI, 1), 1.0, (1.0,)), 2.0, 0.01)
    assert abs(y[0] - 0.5) < 1e-12


@pytest.mark.parametrize("family, n, state, x0, x1", [
    (RICCATI, 3, (0.5, -0.1, 0.2), 0.0, 1.0),
    (ABEL, 2, (0.7, 0.3), 0.0, 1.5),
    (ABEL, 4, (0.4, 0.1, -0.2, 0.05), 0.0, 1.0),
])
def test_agrees_with_scipy(family, n, state, x0, x1):
    eq = generate_chain(family, n)
    f = compile_rhs(eq)
    traj = integrate(IVP(eq, x0, state), x1, rel_tol=1e-11, abs_tol=1e-13)
    ref = solve_ivp(lambda x, y: f(x, y), (x0, x1), state, method="DOP853", rtol=1e-12,
                    atol=1e-14, t_eval=traj.xs)
    assert ref.success
    assert np.max(np.abs(ref.y[0] - np.array(traj.values(0)))) < 1e-8


# --- closed-form comparison --------------------------------------------------------------------

def test_pole_scan_examples():
    assert pole_scan(riccati_solution(2, [0, 0]), (-1, 1)) == [0]
    assert pole_scan(abel_solution(2, [0, 0]), (-1, 1)) == [0]
    assert pole_scan(riccati_solution(2, [0, Fraction(-1, 2)]), (-10, 10)) == []


def test_cross_check_examples():
    rep = cross_check(ABEL, 2, (0, 1), (Fraction(1, 2), 3))
    assert rep.status == "pass"
    assert len(rep.data["samples"]) >= 200
    with pytest.raises(PoleInInterval) as info:
        cross_check(RICCATI, 2, (0, 0), (-1, 1))
    assert info.value.root == 0


def test_riccati_three_example_interval_has_a_pole():
    # Q = x^3 + 3x^2 - 6x - 3 vanishes near 1.67, inside [0, 2]
    with pytest.raises(PoleInInterval) as info:
        cross_check(RICCATI, 3, (1, 1, 1), (0, 2))
    assert abs(float(info.value.root) - 1.6691) < 1e-3
    res = run_cross_check(RICCATI, 3, (1, 1, 1), (2, 4))
    assert res.passed and res.deviation < 1e-7


def test_negative_radicand_is_rejected():
    with pytest.raises(NotRealOnInterval):
        run_cross_check(ABEL, 2, (0, -1), (Fraction(1, 4), Fraction(1, 2)))


def test_initial_state_is_exact_tower():
    sol = riccati_solution(2, [0, 0])
    assert initial_state(sol, 1) == (2.0, -2.0)
    sol = abel_solution(1, [0])
    u, = initial_state(sol, 2)
    assert u == pytest.approx(0.5)


def test_deviation_metric():
    assert max_deviation([1.0, 10.0], [1.0, 10.5]) == pytest.approx(0.5 / 10.5)
    assert max_deviation([0.0], [1e-3]) == pytest.approx(1e-3)


def test_singularity_distance():
    sol = riccati_solution(2, [0, Fraction(-1, 2)])  # x^2 + 1: roots at +-i
    assert singularity_distance(sol, -1, 1) == pytest.approx(1.0)
    assert singularity_distance(sol, 2, 3) == pytest.approx(math.hypot(2, 1))


@settings(max_examples=30)
@given(st.sampled_from([RICCATI, ABEL]), st.integers(1, 6), st.integers(0, 2 ** 32))
def test_random_closed_form_agreement(family, n, seed):
    consts, interval = random_case(family, n, random.Random(seed))
    sol = direct_solution(family, n, consts)
    assert pole_scan(sol, interval) == []
    assert interval[1] - interval[0] >= 1
    res = run_cross_check(family, n, consts, interval, 1e-9)
    assert res.passed, (consts, interval, res.deviation)
    assert res.deviation < 1e-7


# --- reduction consistency -----------------------------------------------------------------------

def test_abel_trajectory_reduces_to_riccati():
    sol = abel_solution(2, [0, 1])
    ivp = IVP(generate_chain(ABEL, 2), 0.5, initial_state(sol, Fraction(1, 2)))
    traj = integrate(ivp, 2.5, rel_tol=1e-12, abs_tol=1e-14, samples_per_unit=256)
    assert reduction_consistency(traj, ABEL, 2) < 1e-6


def test_abel_three_trajectory_reduces_to_riccati_two():
    sol = abel_solution(3, [0, 1, 1])
    ivp = IVP(generate_chain(ABEL, 3), 0.5, initial_state(sol, Fraction(1, 2)))
    traj = integrate(ivp, 2.0, rel_tol=1e-12, abs_tol=1e-14, samples_per_unit=128)
    assert reduction_consistency(traj, ABEL, 3) < 1e-6


def test_non_solution_is_not_consistent():
    # a Riccati-2 trajectory fed to the Abel check does not reduce
    ivp = IVP(generate_chain(RICCATI, 2), 1.0, (1.0, 0.5))
    traj = integrate(ivp, 2.0, rel_tol=1e-12, abs_tol=1e-14, samples_per_unit=256)
    assert reduction_consistency(traj, ABEL, 2) > 1e-3
    with pytest.raises(ValueError):
        reduction_consistency(traj, ABEL, 4)
