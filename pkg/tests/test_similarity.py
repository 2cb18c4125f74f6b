import math

import numpy as np
import pytest

from minsurf import autodiff as ad
from minsurf.errors import InvalidParameter, OutOfDomain
from minsurf.fields import random_polynomial
from minsurf.similarity import (ProfileJet, SimilarityPoint, chain_rule_comparison, closed_form_profile,
                                from_similarity, ode_integrate, profile_ode_residual, reduced_residual,
                                reduction_consistency, to_similarity)


def test_coordinate_roundtrip(rng):
    for t, x in zip(rng.uniform(0.01, 5, 50), rng.uniform(-5, 5, 50)):
        back = from_similarity(to_similarity((t, x)))
        assert back == pytest.approx((t, x), rel=1e-14)
    assert to_similarity((1.0, 2.0)) == SimilarityPoint(0.0, 2.0)
    with pytest.raises(OutOfDomain):
        to_similarity((0.0, 1.0))


def test_reduction_consistency_random_profiles(rng):
    for _ in range(30):
        v = random_polynomial(rng, 3)
        p = (float(rng.uniform(0.5, 2)), float(rng.uniform(-2, 2)))
        assert reduction_consistency(v, p).deviation < 1e-10


def test_reduction_consistency_transcendental():
    v = lambda tau, rho: ad.exp(0.3 * tau) * ad.atan(rho) + tau * rho
    assert reduction_consistency(v, (0.8, -0.6)).deviation < 1e-12


def test_tau_independent_profile_reduces_to_linear_ode(rng):
    for _ in range(50):
        c = rng.uniform(-1, 1, 4)
        rho = float(rng.uniform(-3, 3))
        p = ProfileJet(*c)
        r = reduced_residual(p.as_jet(), 0.0, rho)
        assert r == pytest.approx((1 + rho * rho) * p.v_rr + 2 * rho * p.v_r, abs=1e-13)


def test_jet_chain_rule_matches_hand_derivation():
    # u = (x/t)^2: u_t = -2x^2/t^3, u_x = 2x/t^2, u_tx = -4x/t^3
    v = lambda tau, rho: rho * rho
    t, x = 1.3, 0.7
    cmp = chain_rule_comparison(v, (t, x))
    assert cmp["u_t"][1] == pytest.approx(-2 * x * x / t**3)
    assert cmp["u_x"][1] == pytest.approx(2 * x / t**2)
    assert cmp["u_tx"][1] == pytest.approx(-4 * x / t**3)
    assert cmp["u_x"][0] == pytest.approx(cmp["u_x"][1])
    assert cmp["u_xx"][0] == pytest.approx(cmp["u_xx"][1])
    # the tabulated u_t and u_tx carry the wrong sign on the rho v_rho terms
    assert cmp["u_t"][0] == pytest.approx(-cmp["u_t"][1])
    assert cmp["u_tx"][0] != pytest.approx(cmp["u_tx"][1])


def test_profile_ode_residuals_closed_forms():
    for rho in np.linspace(-5, 5, 21):
        q = 1 + rho * rho
        r_paper, r_alt = profile_ode_residual(ProfileJet.of(ad.atan, rho), rho)
        assert r_paper == pytest.approx(0.0, abs=1e-14)
        assert r_alt == pytest.approx(-rho / q, abs=1e-14)
        r_paper, r_alt = profile_ode_residual(ProfileJet.of(ad.asinh, rho), rho)
        assert r_paper == pytest.approx(rho / math.sqrt(q), abs=1e-14)
        assert r_alt == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("ode,fn", [("paper", math.atan), ("alt", math.asinh)])
def test_ode_integrate_general_solution(ode, fn):
    C, D = 1.7, -0.3
    tab = ode_integrate(ode, C, D, (-5.0, 5.0), 1e-3)
    err = np.max(np.abs(tab.v - (C * np.vectorize(fn)(tab.rho) + D)))
    assert err < 1e-9
    assert tab.error_estimate < 1e-9
    assert tab.rho[0] == -5.0 and tab.rho[-1] == 5.0
    closed = closed_form_profile(ode, C, D)
    assert closed(2.0) == pytest.approx(C * fn(2.0) + D)


def test_ode_integrate_rejects_bad_input():
    with pytest.raises(InvalidParameter):
        ode_integrate("cubic")
    with pytest.raises(InvalidParameter):
        ode_integrate("paper", step=0.0)
