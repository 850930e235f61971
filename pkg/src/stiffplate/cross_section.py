"""Stiffener cross-section: closed-form constants, torsion function, rigid projection.

The cross-section is the rectangle ``(-W, W) x (0, H)`` with centroid
``(0, H/2)``.  The torsion function solves a pure-Neumann Laplace problem on
it; its rigidity feeds the torsional term of the limit beam energy when both
section exponents coincide.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


class SectionDomainError(ValueError):
    """Raised for nonpositive section dimensions."""


@dataclass(frozen=True)
class CrossSection:
    """Closed-form section constants of the rectangle ``(-W, W) x (0, H)``.

    ``area = 2*W*H``; ``static_moment = W*H^2`` (about the x2 axis);
    ``inertia_x2 = (2/3)*W*H^3`` and ``inertia_x3 = (2/3)*W^3*H`` (second
    moments about the x2/x3 axes through the section origin);
    ``torsion_wide = (8/3)*H*W^3`` and ``torsion_tall = (2/3)*W*H^3`` are the
    thin-section torsion constants ``4*int(x2^2)`` and ``4*int((x3-H/2)^2)``;
    ``polar_centroid`` is the polar moment about the centroid.
    """

    W: float
    H: float
    area: float
    static_moment: float
    inertia_x2: float
    inertia_x3: float
    torsion_wide: float
    torsion_tall: float
    polar_centroid: float

    @property
    def centroid(self) -> tuple[float, float]:
        return (0.0, 0.5 * self.H)

    @property
    def inertia_centered(self) -> float:
        """Bending inertia about the centroidal x2 axis, ``inertia_x2 - S2^2/A``."""
        return self.inertia_x2 - self.static_moment**2 / self.area


def constants(W: float, H: float) -> CrossSection:
    """Section constants by exact integration over the rectangle."""
    if not (W > 0 and H > 0):
        raise SectionDomainError(f"section dimensions must be positive, got W={W}, H={H}")
    area = 2.0 * W * H
    return CrossSection(
        W=W,
        H=H,
        area=area,
        static_moment=W * H**2,
        inertia_x2=2.0 / 3.0 * W * H**3,
        inertia_x3=2.0 / 3.0 * W**3 * H,
        torsion_wide=8.0 / 3.0 * H * W**3,
        torsion_tall=2.0 / 3.0 * W * H**3,
        polar_centroid=area * (W**2 / 3.0 + H**2 / 12.0),
    )


@dataclass(frozen=True)
class TorsionField:
    """Discrete torsion function on a uniform node grid over the section.

    ``phi`` has shape ``(n2+1, n3+1)`` with axis 0 along x2 and axis 1 along
    x3; ``rigidity`` is the torsion constant obtained from the warping field.
    """

    W: float
    H: float
    n2: int
    n3: int
    phi: np.ndarray
    rigidity: float
    solver_iterations: int
    solver_residual: float

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        x2 = np.linspace(-self.W, self.W, self.n2 + 1)
        x3 = np.linspace(0.0, self.H, self.n3 + 1)
        return x2, x3

    def mean(self) -> float:
        """Area-weighted mean of phi (trapezoid weights); zero by construction."""
        w2 = _trapezoid_weights(self.n2)
        w3 = _trapezoid_weights(self.n3)
        dx2 = 2.0 * self.W / self.n2
        dx3 = self.H / self.n3
        total = float(np.einsum("i,ij,j->", w2, self.phi, w3)) * dx2 * dx3
        return total / (2.0 * self.W * self.H)


class TorsionSolverError(RuntimeError):
    """Raised when the conjugate-gradient iteration fails to converge."""


def _trapezoid_weights(n: int) -> np.ndarray:
    w = np.ones(n + 1)
    w[0] = w[-1] = 0.5
    return w


def _neumann_laplacian(n2: int, n3: int, dx2: float, dx3: float):
    """Symmetric 5-point Neumann Laplacian (energy form) on the node grid.

    Assembled from edge conductances so the matrix is PSD with constants as
    its null space; boundary data enters through the weighted right-hand side.
    """
    nn = (n2 + 1) * (n3 + 1)

    def nid(i, j):
        return i * (n3 + 1) + j

    rows, cols, vals = [], [], []
    # x2-direction edges: conductance dx3/dx2, halved on the x3 boundary rows
    for j in range(n3 + 1):
        c = dx3 / dx2 * (0.5 if j in (0, n3) else 1.0)
        for i in range(n2):
            a, b = nid(i, j), nid(i + 1, j)
            rows += [a, b, a, b]
            cols += [a, b, b, a]
            vals += [c, c, -c, -c]
    # x3-direction edges: conductance dx2/dx3, halved on the x2 boundary cols
    for i in range(n2 + 1):
        c = dx2 / dx3 * (0.5 if i in (0, n2) else 1.0)
        for j in range(n3):
            a, b = nid(i, j), nid(i, j + 1)
            rows += [a, b, a, b]
            cols += [a, b, b, a]
            vals += [c, c, -c, -c]
    return sp.coo_matrix((vals, (rows, cols)), shape=(nn, nn)).tocsr()


def _neumann_rhs(n2: int, n3: int, W: float, H: float) -> np.ndarray:
    """Boundary integral of the Neumann data against nodal hat weights.

    Data ``g = -x2*n3 + (x3 - H/2)*n2`` on the four sides, integrated with
    trapezoid weights along each edge.
    """
    x2 = np.linspace(-W, W, n2 + 1)
    x3 = np.linspace(0.0, H, n3 + 1)
    dx2 = 2.0 * W / n2
    dx3 = H / n3
    b = np.zeros((n2 + 1, n3 + 1))
    w2 = _trapezoid_weights(n2) * dx2
    w3 = _trapezoid_weights(n3) * dx3
    b[:, 0] += w2 * x2  # bottom, n = (0, -1): g = x2
    b[:, n3] += w2 * (-x2)  # top, n = (0, +1): g = -x2
    b[0, :] += w3 * (-(x3 - 0.5 * H))  # left, n = (-1, 0)
    b[n2, :] += w3 * (x3 - 0.5 * H)  # right, n = (+1, 0)
    return b.ravel()


def _deflated_cg(A, b, tol, maxiter):
    """CG on the singular-consistent system, projecting out constants each step."""
    n = b.shape[0]

    def deflate(v):
        return v - v.mean()

    diag = A.diagonal()
    minv = 1.0 / diag
    x = np.zeros(n)
    b = deflate(b)
    r = b.copy()
    z = deflate(minv * r)
    p = z.copy()
    rz = float(r @ z)
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return x, 0, 0.0
    for it in range(1, maxiter + 1):
        Ap = A @ p
        alpha = rz / float(p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        res = float(np.linalg.norm(r)) / bnorm
        if res <= tol:
            return deflate(x), it, res
        z = deflate(minv * r)
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise TorsionSolverError(f"no convergence in {maxiter} iterations, residual {res:.3e}")


def solve_torsion(W: float, H: float, n: int, tol: float = 1e-10) -> TorsionField:
    """Solve the torsion-function Neumann problem on the section.

    The grid has ``n`` cells across the width ``2W``; the x3 direction gets a
    proportional count so cells stay near-square.  A 5-point finite-difference
    scheme with the Neumann data folded into the right-hand side is solved by
    deflated conjugate gradients (zero mean enforced throughout), and the
    rigidity is the midpoint-quadrature integral of
    ``(d2_phi - (x3 - H/2))^2 + (d3_phi + x2)^2``.

    Parameters
    ----------
    n : int
        Cells across the width; must be at least 8.
    """
    if W <= 0 or H <= 0:
        raise SectionDomainError(f"section dimensions must be positive, got W={W}, H={H}")
    if n < 8:
        raise ValueError(f"grid size must be at least 8, got {n}")
    n2 = int(n)
    n3 = max(8, round(n * H / (2.0 * W)))
    dx2 = 2.0 * W / n2
    dx3 = H / n3
    A = _neumann_laplacian(n2, n3, dx2, dx3)
    b = _neumann_rhs(n2, n3, W, H)
    maxiter = 20 * max(n2, n3) ** 2
    x, iters, res = _deflated_cg(A, b, tol, maxiter)
    phi = x.reshape((n2 + 1, n3 + 1))

    # shift so the trapezoid-weighted section mean is exactly zero
    w2 = _trapezoid_weights(n2)
    w3 = _trapezoid_weights(n3)
    mean = float(np.einsum("i,ij,j->", w2, phi, w3)) * dx2 * dx3 / (2.0 * W * H)
    phi = phi - mean

    # cell-midpoint gradients from averaged one-sided differences
    d2 = (phi[1:, :-1] - phi[:-1, :-1] + phi[1:, 1:] - phi[:-1, 1:]) / (2.0 * dx2)
    d3 = (phi[:-1, 1:] - phi[:-1, :-1] + phi[1:, 1:] - phi[1:, :-1]) / (2.0 * dx3)
    x2c = np.linspace(-W + 0.5 * dx2, W - 0.5 * dx2, n2)[:, None]
    x3c = np.linspace(0.5 * dx3, H - 0.5 * dx3, n3)[None, :]
    integrand = (d2 - (x3c - 0.5 * H)) ** 2 + (d3 + x2c) ** 2
    rigidity = float(integrand.sum()) * dx2 * dx3

    return TorsionField(
        W=W,
        H=H,
        n2=n2,
        n3=n3,
        phi=phi,
        rigidity=rigidity,
        solver_iterations=iters,
        solver_residual=res,
    )


def project_rigid(
    x2: np.ndarray,
    x3: np.ndarray,
    weights: np.ndarray,
    u2: np.ndarray,
    u3: np.ndarray,
    H: float,
) -> tuple[float, float, float]:
    """L2 projection of a section displacement field onto rigid motions.

    Returns the translation ``(t2, t3)`` (weighted averages) and the rotation
    angle about the centroid ``(0, H/2)``:
    ``theta = (1/I_G) * int[(x2 - x2_G)*u3 - (x3 - x3_G)*u2]``.

    Parameters
    ----------
    x2, x3 : arrays
        Quadrature point coordinates on the section.
    weights : array
        Quadrature weights; their sum is the section area measure used.
    u2, u3 : arrays
        Field samples at the quadrature points.
    """
    x2 = np.asarray(x2, dtype=float)
    x3 = np.asarray(x3, dtype=float)
    weights = np.asarray(weights, dtype=float)
    area = float(weights.sum())
    t2 = float((weights * u2).sum()) / area
    t3 = float((weights * u3).sum()) / area
    c2 = x2 - 0.0
    c3 = x3 - 0.5 * H
    ig = float((weights * (c2**2 + c3**2)).sum())
    theta = float((weights * (c2 * u3 - c3 * u2)).sum()) / ig
    return t2, t3, theta


def rigid_field(
    x2: np.ndarray, x3: np.ndarray, H: float, t2: float, t3: float, theta: float
) -> tuple[np.ndarray, np.ndarray]:
    """Rigid section motion with the given translation and centroid rotation."""
    c2 = np.asarray(x2, dtype=float) - 0.0
    c3 = np.asarray(x3, dtype=float) - 0.5 * H
    return t2 - c3 * theta, t3 + c2 * theta


def phi_to_csv(field: TorsionField) -> str:
    """Torsion function as CSV text with header ``x2,x3,phi``."""
    x2, x3 = field.grid()
    buf = io.StringIO()
    buf.write("x2,x3,phi\n")
    for i in range(field.n2 + 1):
        for j in range(field.n3 + 1):
            buf.write(f"{x2[i]!r},{x3[j]!r},{field.phi[i, j]!r}\n")
    return buf.getvalue()
