import numpy as np
import pytest

from stiffplate.material import (
    MaterialError,
    apply_elasticity,
    coercivity_constant,
    energy_density,
    from_lame,
    from_young,
    sym_dot,
    sym_from_matrix,
    sym_norm2,
    sym_to_matrix,
)


def test_from_lame_pure_shear():
    m = from_lame(0.0, 1.0)
    assert m.young == 2.0
    assert m.poisson == 0.0


def test_from_lame_unit_pair():
    m = from_lame(1.0, 1.0)
    assert m.young == pytest.approx(2.5, rel=1e-15)
    assert m.poisson == pytest.approx(0.25, rel=1e-15)


def test_from_lame_steel_like():
    # frozen from exact rational evaluation of the two conversion formulas
    m = from_lame(121.15, 80.77)
    assert m.young == pytest.approx(210.00119998019017, rel=1e-12)
    assert m.poisson == pytest.approx(0.29999504754358164, rel=1e-12)


@pytest.mark.parametrize("lam,mu", [(1.0, 0.0), (1.0, -2.0), (-1.0, 1.0)])
def test_inadmissible_lame_rejected(lam, mu):
    with pytest.raises(MaterialError):
        from_lame(lam, mu)


def test_round_trip_lame_engineering():
    rng = np.random.default_rng(7)
    for _ in range(200):
        mu = rng.uniform(0.1, 100.0)
        lam = rng.uniform(-2.0 * mu / 3.0 + 1e-3, 20.0 * mu)
        m = from_lame(lam, mu)
        back = from_young(m.young, m.poisson)
        assert back.lam == pytest.approx(lam, rel=1e-14, abs=1e-14 * mu)
        assert back.mu == pytest.approx(mu, rel=1e-14)


def test_round_trip_near_incompressible():
    # lam >> mu drives nu toward 1/2; the 1 - 2*nu cancellation caps the
    # representable accuracy, so only a looser bound is meaningful there
    m = from_lame(5000.0, 1.0)
    back = from_young(m.young, m.poisson)
    assert back.lam == pytest.approx(5000.0, rel=1e-11)
    assert back.mu == pytest.approx(1.0, rel=1e-11)


def test_sym_vector_matrix_round_trip():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(3, 3))
    v = sym_from_matrix(a)
    s = sym_to_matrix(v)
    assert np.allclose(s, 0.5 * (a + a.T))
    assert sym_norm2(v) == pytest.approx(np.sum(s * s), rel=1e-14)


def test_apply_elasticity_zero_and_identity():
    m = from_lame(1.0, 1.0)
    assert np.all(apply_elasticity(m, np.zeros(6)) == 0.0)
    eye = sym_from_matrix(np.eye(3))
    out = sym_to_matrix(apply_elasticity(m, eye))
    assert np.allclose(out, 5.0 * np.eye(3))


def test_stress_strain_product_is_twice_energy():
    m = from_lame(2.0, 3.0)
    rng = np.random.default_rng(11)
    for _ in range(50):
        v = sym_from_matrix(rng.normal(size=(3, 3)))
        lhs = sym_dot(apply_elasticity(m, v), v)
        assert lhs == pytest.approx(2.0 * energy_density(m, v), rel=1e-12)


def test_energy_density_values():
    m = from_lame(1.0, 1.0)
    assert energy_density(m, np.zeros(6)) == 0.0
    eye = sym_from_matrix(np.eye(3))
    assert energy_density(m, eye) == pytest.approx(7.5, rel=1e-14)


def test_energy_coercive_on_random_sweep():
    m = from_lame(2.0, 3.0)
    rng = np.random.default_rng(23)
    for _ in range(1000):
        v = sym_from_matrix(rng.normal(size=(3, 3)))
        assert energy_density(m, v) >= 3.0 * sym_norm2(v) - 1e-12


def test_quadratic_homogeneity():
    m = from_lame(-0.5, 2.0)
    rng = np.random.default_rng(5)
    v = sym_from_matrix(rng.normal(size=(3, 3)))
    for alpha in (-2.0, 0.5, 3.7):
        assert energy_density(m, alpha * v) == pytest.approx(
            alpha**2 * energy_density(m, v), rel=1e-13
        )


def test_coercivity_constant_positive_near_cone_edge():
    mu = 1.0
    m = from_lame(-2.0 * mu / 3.0 + 1e-6, mu)
    c = coercivity_constant(m)
    assert c > 0.0
    rng = np.random.default_rng(1)
    for _ in range(200):
        v = sym_from_matrix(rng.normal(size=(3, 3)))
        assert energy_density(m, v) >= c * sym_norm2(v) - 1e-12
