"""Isotropic linear-elastic material law and stored-energy density.

Symmetric 3x3 strain tensors are stored as 6-vectors in the tensorial
(non-engineering) ordering ``(a11, a22, a33, a23, a13, a12)``, so that the
Frobenius norm is ``a11^2 + a22^2 + a33^2 + 2*(a23^2 + a13^2 + a12^2)``.
All quantities are in user-supplied coherent units; no unit system is imposed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# index pairs of the 6-vector components in the full 3x3 tensor
_VOIGT_PAIRS = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))


class MaterialError(ValueError):
    """Raised for Lame pairs outside the admissible cone."""


@dataclass(frozen=True)
class IsotropicMaterial:
    """Isotropic material given by its Lame pair, with derived engineering constants.

    Attributes
    ----------
    lam : float
        First Lame parameter.  Must satisfy ``lam > -2*mu/3``.
    mu : float
        Shear modulus, strictly positive.
    young : float
        Young modulus ``mu*(2*mu + 3*lam)/(mu + lam)``.
    poisson : float
        Poisson ratio ``lam/(2*(lam + mu))``.
    """

    lam: float
    mu: float
    young: float
    poisson: float


def from_lame(lam: float, mu: float) -> IsotropicMaterial:
    """Build a material from the Lame pair ``(lam, mu)``.

    Raises
    ------
    MaterialError
        If ``mu <= 0`` or ``lam <= -2*mu/3`` (outside the positive-definite cone).
    """
    if not mu > 0.0:
        raise MaterialError(f"shear modulus must be positive, got mu={mu}")
    if not lam > -2.0 * mu / 3.0:
        raise MaterialError(f"need lam > -2*mu/3, got lam={lam}, mu={mu}")
    young = mu * (2.0 * mu + 3.0 * lam) / (mu + lam)
    poisson = lam / (2.0 * (lam + mu))
    return IsotropicMaterial(lam=lam, mu=mu, young=young, poisson=poisson)


def from_young(young: float, poisson: float) -> IsotropicMaterial:
    """Build a material from engineering constants; inverse of :func:`from_lame`."""
    if not young > 0.0:
        raise MaterialError(f"Young modulus must be positive, got {young}")
    if not -1.0 < poisson < 0.5:
        raise MaterialError(f"Poisson ratio must lie in (-1, 1/2), got {poisson}")
    mu = young / (2.0 * (1.0 + poisson))
    lam = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson))
    return from_lame(lam, mu)


def sym_from_matrix(a: np.ndarray) -> np.ndarray:
    """6-vector of the symmetric part of a 3x3 matrix."""
    a = np.asarray(a, dtype=float)
    s = 0.5 * (a + a.T)
    return np.array([s[i, j] for i, j in _VOIGT_PAIRS])


def sym_to_matrix(v: np.ndarray) -> np.ndarray:
    """Full 3x3 symmetric matrix from its 6-vector."""
    a = np.zeros((3, 3))
    for c, (i, j) in zip(v, _VOIGT_PAIRS):
        a[i, j] = c
        a[j, i] = c
    return a


def sym_trace(v: np.ndarray) -> float:
    return float(v[0] + v[1] + v[2])


def sym_norm2(v: np.ndarray) -> float:
    """Squared Frobenius norm of the tensor represented by the 6-vector."""
    v = np.asarray(v, dtype=float)
    return float(v[0] ** 2 + v[1] ** 2 + v[2] ** 2 + 2.0 * (v[3] ** 2 + v[4] ** 2 + v[5] ** 2))


def sym_dot(u: np.ndarray, v: np.ndarray) -> float:
    """Frobenius inner product of two symmetric tensors in 6-vector form."""
    return float(
        u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + 2.0 * (u[3] * v[3] + u[4] * v[4] + u[5] * v[5])
    )


def apply_elasticity(mat: IsotropicMaterial, strain: np.ndarray) -> np.ndarray:
    """Stress ``2*mu*A + lam*tr(A)*I`` of a strain 6-vector."""
    strain = np.asarray(strain, dtype=float)
    out = 2.0 * mat.mu * strain
    t = mat.lam * sym_trace(strain)
    out = out.copy()
    out[:3] += t
    return out


def energy_density(mat: IsotropicMaterial, strain: np.ndarray) -> float:
    """Stored-energy density ``mu*|A|^2 + (lam/2)*tr(A)^2``.

    Coercive on the admissible cone: bounded below by ``c*|A|^2`` with
    ``c = min(mu, mu + 3*lam/2) > 0``.
    """
    return float(mat.mu * sym_norm2(strain) + 0.5 * mat.lam * sym_trace(strain) ** 2)


def coercivity_constant(mat: IsotropicMaterial) -> float:
    """Largest ``c`` with ``energy_density >= c*|A|^2`` for all symmetric ``A``."""
    # eigenvalues of the elasticity map on Sym are 2*mu (deviatoric, x5)
    # and 2*mu + 3*lam (spherical); the density is half the quadratic form.
    return min(mat.mu, mat.mu + 1.5 * mat.lam)
