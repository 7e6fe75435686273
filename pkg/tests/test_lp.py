import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nsmac._rat import Rat
from nsmac.lp import (EQ, GE, LE, CertificationError, LinearProgram, LpError,
                      certify_from_basis, check_value_is_one, dump_lp, solve,
                      solve_with_highs)


def tiny_lp(rational=False):
    """max x0 + 2 x1  s.t. x0 + x1 <= 4, x0 - x1 >= -2, x <= 3.
    Optimum at (1, 3): value 7."""
    lp = LinearProgram(2, maximize=True, rational=rational)
    one = Rat(1) if rational else 1.0
    lp.set_objective({0: one, 1: one + one})
    lp.add_row({0: one, 1: one}, LE, 4)
    lp.add_row({0: one, 1: -one}, GE, -2)
    lp.set_bounds(0, 0, 3)
    lp.set_bounds(1, 0, 3)
    return lp


def test_float_simplex_tiny():
    sol = solve(tiny_lp())
    assert sol.status == "optimal"
    assert abs(sol.value - 7.0) <= 1e-9
    assert np.allclose(sol.x, [1.0, 3.0])


def test_exact_simplex_tiny():
    sol = solve(tiny_lp(rational=True), mode="exact")
    assert sol.value_exact == 7
    assert sol.x_exact == [Rat(1), Rat(3)]


def test_highs_agrees():
    sol = solve_with_highs(tiny_lp())
    assert abs(sol.value - 7.0) <= 1e-7


def test_equality_and_minimize():
    lp = LinearProgram(2, maximize=False)
    lp.set_objective({0: 1.0, 1: 3.0})
    lp.add_row({0: 1.0, 1: 1.0}, EQ, 2)
    sol = solve(lp)
    assert abs(sol.value - 2.0) <= 1e-9   # all mass on the cheap variable


def test_infeasible():
    lp = LinearProgram(1, maximize=True)
    lp.set_objective({0: 1.0})
    lp.add_row({0: 1.0}, LE, 1)
    lp.add_row({0: 1.0}, GE, 2)
    assert solve(lp).status == "infeasible"


def test_unbounded():
    lp = LinearProgram(1, maximize=True)
    lp.set_objective({0: 1.0})
    lp.add_row({0: -1.0}, LE, 0)
    assert solve(lp).status == "unbounded"


def test_free_variable():
    lp = LinearProgram(2, maximize=True)
    lp.set_objective({0: 1.0, 1: -1.0})
    lp.set_bounds(1, None, None)     # free
    lp.add_row({0: 1.0, 1: -1.0}, LE, 5)
    lp.add_row({1: 1.0}, GE, -3)
    sol = solve(lp)
    assert sol.status == "optimal"
    assert abs(sol.value - 5.0) <= 1e-9  # the x0 - x1 <= 5 row is tight


def test_negative_lower_bounds():
    lp = LinearProgram(1, maximize=False)
    lp.set_objective({0: 1.0})
    lp.set_bounds(0, -4, 4)
    lp.add_row({0: 1.0}, GE, -10)
    sol = solve(lp)
    assert abs(sol.value - (-4.0)) <= 1e-9


def test_certify_from_basis_exact_value():
    lp = tiny_lp(rational=True)
    fsol = solve(lp, mode="float")
    value, x, dual_ok, feas_ok = certify_from_basis(lp, fsol, check_dual=True)
    assert feas_ok and dual_ok
    assert value == 7


def test_check_value_is_one():
    # max x0 s.t. x0 <= 1: value exactly one
    lp = LinearProgram(1, maximize=True, rational=True)
    lp.set_objective({0: Rat(1)})
    lp.add_row({0: Rat(1)}, LE, 1)
    assert check_value_is_one(lp, mode="exact").is_one
    lp2 = LinearProgram(1, maximize=True, rational=True)
    lp2.set_objective({0: Rat(1)})
    lp2.add_row({0: Rat(2)}, LE, 1)
    chk = check_value_is_one(lp2, mode="exact")
    assert not chk.is_one and chk.value == Rat(1, 2)


def test_dump_lp_roundtrip_text():
    text = dump_lp(tiny_lp(rational=True))
    assert "Maximize" in text and "Subject To" in text and "Bounds" in text
    assert "2 x1" in text        # rational printed exactly


def test_solver_status_errors():
    with pytest.raises(LpError):
        solve(tiny_lp(), solver="external")   # none registered


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_small_lps_float_matches_exact(seed):
    """Random bounded LPs: bundled float value equals full exact value."""
    rng = np.random.default_rng(seed)
    n, m = int(rng.integers(2, 5)), int(rng.integers(1, 4))
    lpf = LinearProgram(n, maximize=True)
    lpx = LinearProgram(n, maximize=True, rational=True)
    for j in range(n):
        c = int(rng.integers(-5, 6))
        lpf.obj[j] = float(c)
        lpx.obj[j] = Rat(c)
        hi = int(rng.integers(1, 5))
        lpf.set_bounds(j, 0, hi)
        lpx.set_bounds(j, 0, hi)
    for i in range(m):
        cols = list(range(n))
        vals = [int(rng.integers(-3, 4)) for _ in cols]
        rhs = int(rng.integers(0, 8))
        rel = [LE, GE, EQ][int(rng.integers(0, 3))]
        if rel == GE:
            rhs = -rhs
        if rel == EQ:
            # keep equalities satisfiable: rhs reachable at box center
            rhs = int(sum(v for v in vals))
        lpf.add_row(dict(zip(cols, [float(v) for v in vals])), rel, rhs)
        lpx.add_row(dict(zip(cols, [Rat(v) for v in vals])), rel, rhs)
    sf = solve(lpf)
    sx = solve(lpx, mode="exact")
    assert sf.status == sx.status
    if sf.status == "optimal":
        assert abs(sf.value - float(sx.value_exact)) <= 1e-7
