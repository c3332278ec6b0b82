import numpy as np
import pytest

from integrable import models, ybe
from integrable.tensor import identity, permutation_operator


def test_permutation_and_identity_pass_braided_ybe():
    for R in (permutation_operator(2, 2), identity((2, 2))):
        assert ybe.verify_braided_ybe(R)["pass"]


@pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0])
def test_one_parameter_families_pass(alpha):
    r1 = ybe.verify_braided_ybe(ybe.r_alpha_beta(alpha, 0.0))
    r2 = ybe.verify_braided_ybe(ybe.r_alpha_beta(1.0, alpha))
    assert r1["pass"] and r2["pass"]


def test_generic_two_parameter_point_fails():
    res = ybe.verify_braided_ybe(ybe.r_alpha_beta(0.5, 0.5))
    assert not res["pass"]
    assert min(res["residual"], res["r_check_residual"]) > 1e-3


def test_r_alpha_beta_rejects_bad_rates():
    with pytest.raises(ybe.RateOutOfRange):
        ybe.r_alpha_beta(1.2, 0.0)


def test_spectral_r_regular_and_stochastic():
    fam = ybe.asep_r_family(0.4)
    P = permutation_operator(2, 2).entries
    assert np.max(np.abs(fam.r_form(1.0) - P)) <= 1e-12
    for z in (0.2, 0.5, 0.8):
        assert np.max(np.abs(fam.r_form(z).sum(axis=1) - 1.0)) <= 1e-12


@pytest.mark.parametrize("q", [0.3, 0.8])
def test_spectral_ybe_on_grid(q):
    fam = ybe.asep_r_family(q)
    for z in (0.25, 0.55, 0.85):
        for w in (0.3, 0.6, 0.9):
            assert ybe.verify_spectral_ybe(fam, z, w)["pass"]


def test_spectral_pole_raises():
    with pytest.raises(ybe.YbeError):
        ybe.asep_spectral_r(2.0, 0.5)


def test_frt_hecke_quadratic():
    q = 0.7
    R = ybe.frt_r(q)
    assert ybe.verify_hecke_quadratic(R, q**-2, -1.0)["pass"]
    assert not ybe.verify_hecke_quadratic(R, q**-2, -2.0)["pass"]


def test_frt_satisfies_braided_ybe():
    assert ybe.verify_braided_ybe(ybe.frt_r(0.7))["pass"]


def test_reflection_equation_both_sides():
    q = 0.5
    rfam = ybe.asep_r_family(q)
    kl = ybe.reflection_family(q, 0.6, 0.15, side="left")
    kr = ybe.reflection_family(q, 0.4, 0.2, side="right")
    for z, w in [(0.3, 0.55), (0.7, 0.32), (0.9, 0.77)]:
        assert ybe.verify_reflection_equation(rfam, kl, z, w)["pass"]
        assert ybe.verify_reflection_equation(rfam, kr, z, w)["pass"]


def test_reflection_k_regular_at_one():
    for side, a, c in (("left", 0.6, 0.15), ("right", 0.4, 0.2)):
        K = ybe.reflection_k(1.0, 0.5, a, c, side).entries
        assert np.max(np.abs(K - np.eye(2))) <= 1e-12


def test_reflection_pole_surfaces_as_evaluation_pole():
    rfam = ybe.asep_r_family(0.5)
    kl = ybe.reflection_family(0.5, 0.6, 0.15, side="left")
    with pytest.raises(ybe.EvaluationPole):
        # z/w = 2 makes q z/w = 1, a pole of the R factor
        ybe.verify_reflection_equation(rfam, kl, 0.7, 0.35)


def test_markov_structure_report_fits_rho():
    q = 0.4
    rep = ybe.markov_structure_report(ybe.asep_r_family(q), models.asep_bulk_w(q))
    assert rep["pass"], rep
    assert rep["params"]["rho_fit"] == pytest.approx(1.0 / (q - 1.0), abs=1e-6)


def test_report_to_json_round_trips():
    import json

    q = 0.4
    rep = ybe.markov_structure_report(ybe.asep_r_family(q), models.asep_bulk_w(q))
    text = ybe.report_to_json(rep)
    assert json.loads(text)["params"]["q"] == q
