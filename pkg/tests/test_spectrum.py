import numpy as np
import pytest

from hingedmems.grid import RadialGrid, boundary_normal_derivative, inner
from hingedmems.model import Params
from hingedmems.plate import PlateOperator
from hingedmems.spectrum import (linearized_spectral_bound, nonexistence_certificate,
                                 principal_eigenpair, second_eigenvalue)
from hingedmems.stationary import Problem, continue_in_lambda, solve_stationary

from conftest import J01


def test_navier_plate_bessel_oracle():
    pair = principal_eigenpair(Params(sigma=1.0), RadialGrid(512))
    assert pair.converged
    assert pair.mu1 == pytest.approx(J01**4, rel=1e-3)


def test_navier_plate_with_tension_bessel_oracle():
    pair = principal_eigenpair(Params(sigma=1.0, tau=1.0), RadialGrid(512))
    assert pair.mu1 == pytest.approx(J01**4 + J01**2, rel=1e-3)


def test_hinged_plate_self_convergence():
    coarse = principal_eigenpair(Params(), RadialGrid(256))
    fine = principal_eigenpair(Params(), RadialGrid(1024))
    assert coarse.mu1 == pytest.approx(fine.mu1, rel=2e-3)
    g = RadialGrid(256)
    assert np.all(coarse.phi1[:-1] > 0) and coarse.phi1[-1] == 0
    assert boundary_normal_derivative(g, coarse.phi1) < 0


@pytest.mark.parametrize("sigma", [-0.9, -0.4, 0.0, 0.5, 0.9])
@pytest.mark.parametrize("tau", [0.0, 1.0, 5.0])
def test_positivity_and_rayleigh_consistency(sigma, tau):
    g = RadialGrid(64)
    p = Params(sigma=sigma, tau=tau)
    pair = principal_eigenpair(p, g)
    assert pair.mu1 > 0 and pair.phi1.max() == 1.0
    assert np.all(pair.phi1[:-1] > 0) and pair.boundary_slope(g) < 0
    A = PlateOperator(p, g)
    rq = inner(g, A.apply(pair.phi1), pair.phi1) / inner(g, pair.phi1, pair.phi1)
    assert abs(rq - pair.mu1) <= 1e-8 * pair.mu1


def test_residual_reported_and_small_relative_to_operator():
    g = RadialGrid(64)
    pair = principal_eigenpair(Params(), g)
    # relative to the operator norm, which grows like n^4
    assert 0 <= pair.residual <= 1e-8 * PlateOperator(Params(), g)._norm


def test_simplicity_gap_is_grid_stable():
    gaps = []
    for n in (32, 64, 128):
        g = RadialGrid(n)
        pair = principal_eigenpair(Params(), g)
        gaps.append(second_eigenvalue(Params(), g, pair) - pair.mu1)
    assert min(gaps) > 100
    assert max(gaps) / min(gaps) < 1.1


def test_flat_state_bound_equals_mu1():
    pb = Problem(Params(eps=0.1, lam=0.0), 32, 16)
    rep = linearized_spectral_bound(pb, np.zeros(33))
    mu1 = principal_eigenpair(Params(), pb.radial).mu1
    assert rep.min_real_part == pytest.approx(mu1, rel=5e-3) and rep.stable


@pytest.fixture(scope="module")
def trace():
    return continue_in_lambda(Problem(Params(eps=0.1), 32, 16), 0.5)


def test_stable_at_small_lambda(trace):
    lam = 0.1 * trace.lambda_star
    pb = Problem(Params(eps=0.1, lam=lam), 32, 16)
    U = solve_stationary(pb).solution
    rep = linearized_spectral_bound(pb, U)
    assert rep.stable and rep.min_real_part > 0 and rep.lam == lam


def test_spectral_bound_decreases_towards_fold(trace):
    pb = Problem(Params(eps=0.1), 32, 16)
    lams = sorted(trace.solutions)
    vals = [linearized_spectral_bound(pb.with_lambda(l), trace.solutions[l]).min_real_part for l in lams]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_certificate_at_half_fold(trace):
    pb = Problem(Params(eps=0.1, lam=0.5 * trace.lambda_star), 32, 16)
    U = solve_stationary(pb).solution
    pair = principal_eigenpair(Params(), pb.radial)
    rep = nonexistence_certificate(pb, pair.mu1, pair.phi1, U)
    assert rep.holds
    assert rep.lam_int_phi <= rep.minus_AU_phi <= rep.mu1_int_phi


def test_certificate_degenerate_at_zero():
    pb = Problem(Params(lam=0.0), 32, 16)
    pair = principal_eigenpair(Params(), pb.radial)
    rep = nonexistence_certificate(pb, pair.mu1, pair.phi1, np.zeros(33))
    assert rep.holds and rep.lam_int_phi == 0 and rep.minus_AU_phi == 0 and rep.mu1_int_phi > 0


def test_certificate_recordwise(trace):
    pb = Problem(Params(eps=0.1), 32, 16)
    pair = principal_eigenpair(Params(), pb.radial)
    for lam, U in trace.solutions.items():
        rep = nonexistence_certificate(pb.with_lambda(lam), pair.mu1, pair.phi1, U)
        assert rep.holds, (lam, rep)
