import numpy as np
import pytest

from integrable import uqsl2
from integrable.tensor import permutation_operator


@pytest.mark.parametrize("q", [0.3, 0.7, 1.5])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_defining_relations(m, q):
    res = uqsl2.check_relations(uqsl2.rep(m, q))
    assert res["max"] <= 1e-10, res


def test_rep_dimension_and_weights():
    r = uqsl2.rep(3, 0.5)
    assert r.dim == 4
    # K = q^h is diagonal with exponents m, m-2, ..., -m
    diag = np.diag(r.K.entries).real
    assert np.allclose(sorted(diag), sorted(0.5 ** np.array([3, 1, -1, -3])))


def test_invalid_deformation_rejected():
    with pytest.raises(uqsl2.Uqsl2Error):
        uqsl2.rep(2, 1.0)
    with pytest.raises(uqsl2.Uqsl2Error):
        uqsl2.rep(2, 0.0)


def test_coproduct_vs_opposite_differ_generically():
    r = uqsl2.rep(1, 0.6)
    D = uqsl2.coproduct_action(r, r, "e").entries
    Dop = uqsl2.opposite_coproduct_action(r, r, "e").entries
    assert np.max(np.abs(D - Dop)) > 1e-3


@pytest.mark.parametrize("q", [0.4, 1.3])
@pytest.mark.parametrize("lm", [(1, 1), (1, 2), (2, 2)])
def test_universal_r_intertwines(lm, q):
    l, m = lm
    res = uqsl2.universal_r_check(uqsl2.rep(l, q), uqsl2.rep(m, q))
    assert res["pass"], res


def test_deformation_mismatch_raises():
    with pytest.raises(uqsl2.DeformationMismatch):
        uqsl2.universal_r(uqsl2.rep(1, 0.4), uqsl2.rep(1, 0.5))


def test_braided_r_is_p_compose_r():
    r = uqsl2.rep(1, 0.6)
    R = uqsl2.universal_r(r, r).entries
    P = permutation_operator(2, 2).entries
    assert np.allclose(uqsl2.braided_r(r, r).entries, P @ R)


def test_braided_r_satisfies_braid_relation():
    r = uqsl2.rep(1, 0.7)
    Rc = uqsl2.braided_r(r, r).entries
    I = np.eye(2)
    R12 = np.kron(Rc, I)
    R23 = np.kron(I, Rc)
    assert np.max(np.abs(R12 @ R23 @ R12 - R23 @ R12 @ R23)) <= 1e-12
