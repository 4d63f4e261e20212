import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conslaw import builtin_models, eigen_decompose, get_model
from conslaw.errors import DomainViolation, NotFound
from conslaw.hyperbolic_system import FieldType, classify_fields


def test_unknown_model():
    with pytest.raises(NotFound):
        get_model("euler-9")


def test_builtin_models_have_distinct_names():
    names = [m.name for m in builtin_models()]
    assert len(names) == len(set(names)) >= 4


def test_psystem_eigenvalues_at_rest(psys):
    # c(v) = sqrt(gamma) v^{-(gamma+1)/2} = sqrt(1.4) at v = 1
    es = eigen_decompose(psys, [1.0, 0.0])
    c = math.sqrt(1.4)
    assert np.allclose(es.lambdas, [-c, c], atol=1e-9)
    assert es.lambdas[0] == pytest.approx(-1.18321596, abs=1e-8)


def test_psystem_eigenvectors_are_eigenvectors(psys):
    u = np.array([1.3, 0.2])
    es = eigen_decompose(psys, u)
    A = psys.A(u)
    for i in range(2):
        assert np.allclose(A @ es.r(i), es.lambdas[i] * es.r(i), atol=1e-10)
        assert np.linalg.norm(es.r(i)) == pytest.approx(1.0)
    assert np.allclose(es.left_vecs @ es.right_vecs, np.eye(2), atol=1e-12)


def test_burgers_classification(burgers):
    fc = classify_fields(burgers, burgers.sample_points(20))
    assert fc[0] is FieldType.GENUINELY_NONLINEAR
    assert fc.gn_lower_bound[0] == pytest.approx(1.0, rel=1e-6)


def test_psystem_both_fields_gn(psys):
    assert psys.is_gn(0) and psys.is_gn(1)


def test_linear_fields_are_ld():
    m = get_model("linear")
    assert all(m.is_ld(i) for i in range(m.n))


def test_orientation_makes_dlambda_r_positive(psys):
    # lambda_i must increase along r_i for a GN family
    u = np.array([1.1, -0.1])
    es = eigen_decompose(psys, u)
    h = 1e-6
    for i in range(2):
        lp = eigen_decompose(psys, u + h * es.r(i)).lambdas[i]
        lm = eigen_decompose(psys, u - h * es.r(i)).lambdas[i]
        assert (lp - lm) / (2 * h) > 0


def test_domain_violation(psys):
    with pytest.raises(DomainViolation):
        eigen_decompose(psys, [-1.0, 0.0])


@given(st.floats(0.5, 2.0), st.floats(-1.0, 1.0))
def test_psystem_strict_hyperbolicity(v, u):
    m = get_model("p-system")
    lam = eigen_decompose(m, [v, u]).lambdas
    assert lam[0] < 0 < lam[1]
    assert lam[1] == pytest.approx(math.sqrt(1.4) * v ** (-1.2), rel=1e-8)
