"""Element matrices: C1 plate rectangle, bilinear membrane quad, beam, hexahedron.

All elements are axis-aligned boxes/rectangles/segments, which keeps every
Jacobian diagonal.  Plate bending uses the bicubic C1-conforming rectangle
(nodal dofs value, both first derivatives and the mixed second derivative),
so nested uniform refinements give conforming subspaces.
"""

from __future__ import annotations

import numpy as np

GAUSS4_PTS = np.array(
    [-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526]
)
GAUSS4_WTS = np.array(
    [0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538]
)


def gauss_on_interval(lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """4-point Gauss rule mapped to [lo, hi] (exact to degree 7)."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return mid + half * GAUSS4_PTS, half * GAUSS4_WTS


def hermite1d(x: np.ndarray, length: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cubic Hermite basis [val0, slope0, val1, slope1] on [0, length].

    Returns value, first and second derivative arrays of shape (4,) + x.shape.
    """
    s = np.asarray(x, dtype=float) / length
    a = length
    val = np.stack(
        [
            1.0 - 3.0 * s**2 + 2.0 * s**3,
            a * (s - 2.0 * s**2 + s**3),
            3.0 * s**2 - 2.0 * s**3,
            a * (s**3 - s**2),
        ]
    )
    d1 = np.stack(
        [
            (-6.0 * s + 6.0 * s**2) / a,
            1.0 - 4.0 * s + 3.0 * s**2,
            (6.0 * s - 6.0 * s**2) / a,
            3.0 * s**2 - 2.0 * s,
        ]
    )
    d2 = np.stack(
        [
            (-6.0 + 12.0 * s) / a**2,
            (-4.0 + 6.0 * s) / a,
            (6.0 - 12.0 * s) / a**2,
            (6.0 * s - 2.0) / a,
        ]
    )
    return val, d1, d2


def linear1d(x: np.ndarray, length: float) -> tuple[np.ndarray, np.ndarray]:
    """P1 basis [N0, N1] on [0, length]: values and first derivatives."""
    s = np.asarray(x, dtype=float) / length
    val = np.stack([1.0 - s, s])
    d1 = np.stack([np.full_like(s, -1.0 / length), np.full_like(s, 1.0 / length)])
    return val, d1


# local corner ordering of plate elements: (0,0), (a,0), (a,b), (0,b)
_CORNERS = ((0, 0), (1, 0), (1, 1), (0, 1))


def membrane_rows(a: float, b: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Strain rows of the bilinear quad at points (x, y).

    Output shape (3, 8, npts): rows are (d1 u1, d2 u2, sym d12); dofs are
    (u1, u2) per corner in the local ordering.
    """
    nx, dnx = linear1d(x, a)
    ny, dny = linear1d(y, b)
    npts = np.broadcast(x, y).size
    rows = np.zeros((3, 8, npts))
    for ln, (p, q) in enumerate(_CORNERS):
        dx = dnx[p] * ny[q]
        dy = nx[p] * dny[q]
        rows[0, 2 * ln] = dx
        rows[1, 2 * ln + 1] = dy
        rows[2, 2 * ln] = 0.5 * dy
        rows[2, 2 * ln + 1] = 0.5 * dx
    return rows


def membrane_values(a: float, b: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Bilinear shape values, shape (4, npts) in the local corner ordering."""
    nx, _ = linear1d(x, a)
    ny, _ = linear1d(y, b)
    return np.stack([nx[p] * ny[q] for p, q in _CORNERS])


def bending_basis(a: float, b: float, x: np.ndarray, y: np.ndarray):
    """Bicubic C1 basis at points (x, y) on the rectangle [0,a]x[0,b].

    Returns (val, d1, d2, curv) where val/d1/d2 have shape (16, npts) giving
    the value and first derivatives, and curv has shape (3, 16, npts) with
    rows (d11, d22, d12).  Dof ordering per corner: (v, v_x, v_y, v_xy).
    """
    hx, dhx, ddhx = hermite1d(x, a)
    hy, dhy, ddhy = hermite1d(y, b)
    npts = np.broadcast(x, y).size
    val = np.zeros((16, npts))
    d1 = np.zeros((16, npts))
    d2 = np.zeros((16, npts))
    curv = np.zeros((3, 16, npts))
    for ln, (p, q) in enumerate(_CORNERS):
        # x-factors: value dof uses [H1,H3][p], slope dof uses [H2,H4][p]
        xv, xs = 2 * p, 2 * p + 1
        yv, ys = 2 * q, 2 * q + 1
        combos = ((xv, yv), (xs, yv), (xv, ys), (xs, ys))
        for c, (ix, iy) in enumerate(combos):
            k = 4 * ln + c
            val[k] = hx[ix] * hy[iy]
            d1[k] = dhx[ix] * hy[iy]
            d2[k] = hx[ix] * dhy[iy]
            curv[0, k] = ddhx[ix] * hy[iy]
            curv[1, k] = hx[ix] * ddhy[iy]
            curv[2, k] = dhx[ix] * dhy[iy]
    return val, d1, d2, curv


def plane_stress_k(young: float, poisson: float) -> np.ndarray:
    """The 3x3 coupling matrix acting on (e11, e22, e12) strain triples."""
    nu = poisson
    c = young / (1.0 - nu * nu)
    return c * np.array([[1.0, nu, 0.0], [nu, 1.0, 0.0], [0.0, 0.0, 2.0 * (1.0 - nu)]])


def plate_element(young: float, poisson: float, thick: float, a: float, b: float):
    """Membrane/coupling/bending element matrices of the plate rectangle.

    Returns (kmm 8x8, kmb 8x16, kbb 16x16) for the through-thickness
    integrated energy: membrane stiffness ``T*C``, membrane-curvature coupling
    ``-(T^2/2)*C`` and bending stiffness ``(T^3/3)*C`` with ``C`` the
    plane-stress matrix on (e11, e22, e12) / (d11, d22, d12) triples.
    """
    ck = plane_stress_k(young, poisson)
    xg, wx = gauss_on_interval(0.0, a)
    yg, wy = gauss_on_interval(0.0, b)
    X, Y = np.meshgrid(xg, yg, indexing="ij")
    Wq = np.outer(wx, wy).ravel()
    bm = membrane_rows(a, b, X.ravel(), Y.ravel())
    _, _, _, curv = bending_basis(a, b, X.ravel(), Y.ravel())
    t = thick
    kmm = np.einsum("g,aig,ab,bjg->ij", Wq, bm, t * ck, bm)
    kmb = np.einsum("g,aig,ab,bjg->ij", Wq, bm, -(t**2 / 2.0) * ck, curv)
    kbb = np.einsum("g,aig,ab,bjg->ij", Wq, curv, (t**3 / 3.0) * ck, curv)
    return kmm, kmb, kbb


def hermite_stiffness(length: float) -> np.ndarray:
    """Integral of second-derivative products of the cubic Hermite basis."""
    xg, wg = gauss_on_interval(0.0, length)
    _, _, d2 = hermite1d(xg, length)
    return np.einsum("g,ig,jg->ij", wg, d2, d2)


def p1_stiffness(length: float) -> np.ndarray:
    return np.array([[1.0, -1.0], [-1.0, 1.0]]) / length


def axial_bending_coupling(length: float) -> np.ndarray:
    """Integral of P1 first derivatives against Hermite second derivatives (2x4)."""
    xg, wg = gauss_on_interval(0.0, length)
    _, dn = linear1d(xg, length)
    _, _, d2 = hermite1d(xg, length)
    return np.einsum("g,ig,jg->ij", wg, dn, d2)


# VTK-style hexahedron corner ordering
_HEX_CORNERS = np.array(
    [
        (0, 0, 0),
        (1, 0, 0),
        (1, 1, 0),
        (0, 1, 0),
        (0, 0, 1),
        (1, 0, 1),
        (1, 1, 1),
        (0, 1, 1),
    ]
)


def elasticity_d(lam: float, mu: float) -> np.ndarray:
    """6x6 isotropic stiffness on (exx, eyy, ezz, gyz, gxz, gxy) with engineering shears."""
    d = np.zeros((6, 6))
    d[:3, :3] = lam
    d[np.arange(3), np.arange(3)] += 2.0 * mu
    d[np.arange(3, 6), np.arange(3, 6)] = mu
    return d


def hex_shape(xi: np.ndarray, eta: np.ndarray, zeta: np.ndarray):
    """Trilinear shape values and natural-coordinate gradients at given points."""
    signs = 2.0 * _HEX_CORNERS - 1.0
    vals = np.stack(
        [
            0.125 * (1 + s[0] * xi) * (1 + s[1] * eta) * (1 + s[2] * zeta)
            for s in signs
        ]
    )
    grads = np.stack(
        [
            np.stack(
                [
                    0.125 * s[0] * (1 + s[1] * eta) * (1 + s[2] * zeta),
                    0.125 * s[1] * (1 + s[0] * xi) * (1 + s[2] * zeta),
                    0.125 * s[2] * (1 + s[0] * xi) * (1 + s[1] * eta),
                ]
            )
            for s in signs
        ]
    )
    return vals, grads


_G2 = np.array([-1.0 / np.sqrt(3.0), 1.0 / np.sqrt(3.0)])


def hex_element(lam: float, mu: float, hx: float, hy: float, hz: float) -> np.ndarray:
    """24x24 stiffness of an axis-aligned box with 2x2x2 Gauss quadrature.

    Dof ordering: (u1, u2, u3) per corner in the VTK corner order.
    """
    d = elasticity_d(lam, mu)
    jac = np.array([hx / 2.0, hy / 2.0, hz / 2.0])
    detj = jac.prod()
    ke = np.zeros((24, 24))
    for gx in _G2:
        for gy in _G2:
            for gz in _G2:
                _, grads = hex_shape(gx, gy, gz)
                g = grads / jac[None, :]  # physical gradients, shape (8, 3)
                bmat = np.zeros((6, 24))
                for a in range(8):
                    gxp, gyp, gzp = g[a]
                    c = 3 * a
                    bmat[0, c] = gxp
                    bmat[1, c + 1] = gyp
                    bmat[2, c + 2] = gzp
                    bmat[3, c + 1] = gzp
                    bmat[3, c + 2] = gyp
                    bmat[4, c] = gzp
                    bmat[4, c + 2] = gxp
                    bmat[5, c] = gyp
                    bmat[5, c + 1] = gxp
                ke += bmat.T @ d @ bmat * detj
    return ke


def hex_gauss_points(hx: float, hy: float, hz: float):
    """Physical offsets from the box corner and weights of the 2x2x2 rule,
    plus shape values there; used for consistent body-force vectors."""
    pts = []
    vals = []
    for gx in _G2:
        for gy in _G2:
            for gz in _G2:
                v, _ = hex_shape(gx, gy, gz)
                vals.append(v)
                pts.append(((gx + 1) / 2 * hx, (gy + 1) / 2 * hy, (gz + 1) / 2 * hz))
    w = hx * hy * hz / 8.0
    return np.array(pts), np.array(vals), w
