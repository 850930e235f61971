import numpy as np
import pytest

from stiffplate.cross_section import (
    SectionDomainError,
    _neumann_rhs,
    constants,
    phi_to_csv,
    project_rigid,
    rigid_field,
    solve_torsion,
)


def rectangle_torsion_series(W, H, nterms=80):
    """Independent oracle: classical series for the torsion constant of a
    rectangle with half-widths a >= b (tanh series, exact in the limit)."""
    a = max(W, H / 2.0)
    b = min(W, H / 2.0)
    s = sum(np.tanh((2 * i + 1) * np.pi * a / (2 * b)) / (2 * i + 1) ** 5 for i in range(nterms))
    return (16.0 / 3.0) * a * b**3 * (1.0 - 192.0 / np.pi**5 * (b / a) * s)


def quad_integral(f, W, H, n=400):
    """Gauss-Legendre product quadrature over the section, independent of the
    closed forms (exact for the polynomial integrands used here)."""
    x, wx = np.polynomial.legendre.leggauss(8)
    x2 = W * x
    w2 = W * wx
    x3 = H / 2.0 * (x + 1.0)
    w3 = H / 2.0 * wx
    X2, X3 = np.meshgrid(x2, x3, indexing="ij")
    return float(np.einsum("i,ij,j->", w2, f(X2, X3), w3))


def test_constants_unit_section():
    c = constants(1.0, 1.0)
    assert c.area == 2.0
    assert c.static_moment == 1.0
    assert c.inertia_x2 == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert c.torsion_wide == pytest.approx(8.0 / 3.0, rel=1e-15)


def test_constants_tall_section():
    c = constants(0.5, 2.0)
    assert c.area == 2.0
    assert c.static_moment == 2.0
    assert c.inertia_x2 == pytest.approx(8.0 / 3.0, rel=1e-15)
    assert c.torsion_wide == pytest.approx(2.0 / 3.0, rel=1e-15)
    # 4 * integral of the centered vertical square moment, integrated exactly
    assert c.torsion_tall == pytest.approx(
        4.0 * quad_integral(lambda x2, x3: (x3 - 1.0) ** 2, 0.5, 2.0), rel=1e-13
    )


def test_constants_reject_degenerate_section():
    with pytest.raises(SectionDomainError):
        constants(0.0, 1.0)
    with pytest.raises(SectionDomainError):
        constants(1.0, -2.0)


def test_constants_match_quadrature_random_sections():
    rng = np.random.default_rng(101)
    for _ in range(20):
        W = rng.uniform(0.1, 3.0)
        H = rng.uniform(0.1, 3.0)
        c = constants(W, H)
        assert c.area == pytest.approx(quad_integral(lambda a, b: 1.0 + 0 * a, W, H), rel=1e-12)
        assert c.static_moment == pytest.approx(quad_integral(lambda a, b: b, W, H), rel=1e-12)
        assert c.inertia_x2 == pytest.approx(quad_integral(lambda a, b: b**2, W, H), rel=1e-12)
        assert c.inertia_x3 == pytest.approx(quad_integral(lambda a, b: a**2, W, H), rel=1e-12)
        assert c.torsion_wide == pytest.approx(
            4.0 * quad_integral(lambda a, b: a**2, W, H), rel=1e-12
        )
        assert c.polar_centroid == pytest.approx(
            quad_integral(lambda a, b: a**2 + (b - H / 2) ** 2, W, H), rel=1e-12
        )
        assert c.inertia_centered == pytest.approx(W * H**3 / 6.0, rel=1e-12)


def test_torsion_square_against_series_oracle():
    field = solve_torsion(0.5, 1.0, 128)
    exact = rectangle_torsion_series(0.5, 1.0)
    assert exact == pytest.approx(0.140577, rel=1e-4)
    assert abs(field.rigidity - exact) / exact < 0.01


def test_torsion_monotone_grid_convergence():
    exact = rectangle_torsion_series(0.5, 1.0)
    errs = [abs(solve_torsion(0.5, 1.0, n).rigidity - exact) for n in (32, 64, 128)]
    assert errs[0] > errs[1] > errs[2]


def test_torsion_zero_mean_and_positive_rigidity():
    for W, H in [(0.5, 1.0), (0.3, 1.4), (1.2, 0.7)]:
        f = solve_torsion(W, H, 24)
        assert abs(f.mean()) <= 1e-10 * (W * H)
        assert 0.0 < f.rigidity <= constants(W, H).polar_centroid


def test_branch_constants_are_thin_section_limits_of_series():
    # squeezing the section height (or width) by s makes the exact rigidity
    # approach the corresponding closed-form constant times s^3
    W, H = 0.4, 0.8
    c = constants(W, H)
    for s, tol in ((0.1, 0.1), (0.01, 0.01)):
        flat = rectangle_torsion_series(W, s * H) / s**3
        assert flat == pytest.approx(c.torsion_tall, rel=tol)
        narrow = rectangle_torsion_series(s * W, H) / s**3
        assert narrow == pytest.approx(c.torsion_wide, rel=tol)


def test_torsion_grid_size_guard():
    with pytest.raises(ValueError):
        solve_torsion(0.5, 1.0, 4)


def test_torsion_neumann_data_compatible():
    b = _neumann_rhs(32, 24, 0.7, 1.3)
    assert abs(b.sum()) <= 1e-12 * np.abs(b).sum()


def test_torsion_discrete_equation_residual():
    from stiffplate.cross_section import _neumann_laplacian

    f = solve_torsion(0.4, 0.9, 16, tol=1e-12)
    dx2 = 2 * 0.4 / f.n2
    dx3 = 0.9 / f.n3
    a = _neumann_laplacian(f.n2, f.n3, dx2, dx3)
    b = _neumann_rhs(f.n2, f.n3, 0.4, 0.9)
    b = b - b.mean()
    r = a @ f.phi.ravel() - b
    assert np.linalg.norm(r) <= 1e-10 * max(np.linalg.norm(b), 1.0)


def trap_weights(x):
    w = np.zeros_like(x)
    w[:-1] += 0.5 * np.diff(x)
    w[1:] += 0.5 * np.diff(x)
    return w


def grid_and_weights(W, H, n2=24, n3=20):
    x2 = np.linspace(-W, W, n2 + 1)
    x3 = np.linspace(0.0, H, n3 + 1)
    X2, X3 = np.meshgrid(x2, x3, indexing="ij")
    Wq = np.outer(trap_weights(x2), trap_weights(x3))
    return X2, X3, Wq


def test_project_rigid_recovers_rotation():
    W, H = 0.6, 1.1
    X2, X3, Wq = grid_and_weights(W, H)
    phi = 0.37
    u2, u3 = rigid_field(X2, X3, H, 0.0, 0.0, phi)
    t2, t3, theta = project_rigid(X2, X3, Wq, u2, u3, H)
    assert theta == pytest.approx(phi, rel=1e-12)
    assert abs(t2) < 1e-14 and abs(t3) < 1e-14


def test_project_rigid_translation_has_zero_angle():
    W, H = 0.6, 1.1
    X2, X3, Wq = grid_and_weights(W, H)
    t2, t3, theta = project_rigid(X2, X3, Wq, 0.8 + 0 * X2, -0.3 + 0 * X2, H)
    assert (t2, t3) == pytest.approx((0.8, -0.3), rel=1e-14)
    assert abs(theta) < 1e-15


def test_project_rigid_residual_orthogonality():
    W, H = 0.5, 1.3
    X2, X3, Wq = grid_and_weights(W, H, 30, 26)
    u2 = np.sin(X2) * np.cosh(X3) + 0.2 * X3**2
    u3 = np.cos(X2 * X3) - 0.1 * X2
    t2, t3, theta = project_rigid(X2, X3, Wq, u2, u3, H)
    r2, r3 = rigid_field(X2, X3, H, t2, t3, theta)
    d2, d3 = u2 - r2, u3 - r3
    scale = float((Wq * (u2**2 + u3**2)).sum())
    # residual is L2-orthogonal to the three rigid basis fields
    assert abs((Wq * d2).sum()) <= 1e-9 * scale
    assert abs((Wq * d3).sum()) <= 1e-9 * scale
    rot2, rot3 = rigid_field(X2, X3, H, 0.0, 0.0, 1.0)
    assert abs((Wq * (d2 * rot2 + d3 * rot3)).sum()) <= 1e-9 * scale


def test_project_rigid_idempotent():
    W, H = 0.5, 1.3
    X2, X3, Wq = grid_and_weights(W, H)
    u2 = np.exp(X2) + X3
    u3 = X2 * X3
    t2, t3, theta = project_rigid(X2, X3, Wq, u2, u3, H)
    p2, p3 = rigid_field(X2, X3, H, t2, t3, theta)
    t2b, t3b, thetab = project_rigid(X2, X3, Wq, p2, p3, H)
    assert (t2b, t3b, thetab) == pytest.approx((t2, t3, theta), rel=1e-12)


def test_phi_csv_shape():
    f = solve_torsion(0.5, 1.0, 8)
    text = phi_to_csv(f)
    lines = text.strip().split("\n")
    assert lines[0] == "x2,x3,phi"
    assert len(lines) == 1 + (f.n2 + 1) * (f.n3 + 1)
