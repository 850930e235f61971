"""Relaxed stored-energy densities for the plate and the stiffener.

The plate density fixes the in-plane strain components and minimizes the full
3D density over the remaining ones; the stiffener density fixes the first row.
Both minima have closed forms, reproduced here together with the minimizing
tensors and an exact minimization oracle used for cross-checking.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .material import IsotropicMaterial, sym_norm2, sym_trace
from .regime import Branch

# 6-vector ordering: (a11, a22, a33, a23, a13, a12)
PLATE_FIXED = (0, 1, 5)  # in-plane components a11, a22, a12
BEAM_FIXED = (0, 5, 4)  # first-row components a11, a12, a13


def plate_density(mat: IsotropicMaterial, e11: float, e22: float, e12: float) -> float:
    """Plane-stress relaxed density.

    Equals ``E/(2(1-nu^2)) * (e11^2 + e22^2 + 2*nu*e11*e22 + 2*(1-nu)*e12^2)``,
    the minimum of the 3D density over the out-of-plane strain components.
    """
    nu = mat.poisson
    c = mat.young / (2.0 * (1.0 - nu * nu))
    return c * (e11 * e11 + e22 * e22 + 2.0 * nu * e11 * e22 + 2.0 * (1.0 - nu) * e12 * e12)


def beam_density(
    mat: IsotropicMaterial,
    e11: float,
    e12: float,
    e13: float,
    branch: Optional[Branch] = None,
) -> float:
    """Uniaxial-plus-shear relaxed density ``(E/2)*e11^2 + 2*mu*(e12^2 + e13^2)``.

    When a branch tag is passed, the shear slot that the branch excludes must
    be zero (the limit strain has no such component there); violating that is
    a caller bug, not a data condition.
    """
    if branch is Branch.W_GT_H and e12 != 0.0:
        raise ValueError("width-dominated branch admits no 12 shear in the limit strain")
    if branch is Branch.H_GT_W and e13 != 0.0:
        raise ValueError("height-dominated branch admits no 13 shear in the limit strain")
    return 0.5 * mat.young * e11 * e11 + 2.0 * mat.mu * (e12 * e12 + e13 * e13)


def relaxed_plate_tensor(mat: IsotropicMaterial, e11: float, e22: float, e12: float) -> np.ndarray:
    """Minimizing 6-vector for the plate relaxation.

    Out-of-plane shears vanish and ``a33 = -nu/(1-nu)*(e11 + e22)`` (transverse
    contraction under plane stress).
    """
    nu = mat.poisson
    a33 = -nu / (1.0 - nu) * (e11 + e22)
    return np.array([e11, e22, a33, 0.0, 0.0, e12])


def relaxed_beam_tensor(mat: IsotropicMaterial, e11: float, e12: float, e13: float) -> np.ndarray:
    """Minimizing 6-vector for the stiffener relaxation.

    Lateral normal strains contract by ``-nu*e11``; the cross-section shear
    ``a23`` vanishes; the first-row shears are kept as prescribed.
    """
    nu = mat.poisson
    return np.array([e11, -nu * e11, -nu * e11, 0.0, e13, e12])


def _hessian(mat: IsotropicMaterial) -> np.ndarray:
    """Hessian of the density as a quadratic form on 6-vectors."""
    q = np.diag([2.0 * mat.mu] * 3 + [4.0 * mat.mu] * 3)
    q[:3, :3] += mat.lam
    return q


def oracle_min_density(
    mat: IsotropicMaterial, fixed_values: np.ndarray, fixed_mask: np.ndarray
) -> float:
    """Minimum of the density over the non-fixed components of a symmetric tensor.

    The density is a strictly convex quadratic on the admissible cone, so the
    minimizer solves the (at most 6x6) linear stationarity system exactly; no
    iteration or tolerance is involved.

    Parameters
    ----------
    fixed_values : (6,) array
        Prescribed components; entries where ``fixed_mask`` is False are ignored.
    fixed_mask : (6,) bool array
        True marks a fixed component, False a free one.

    Returns
    -------
    float
        The minimum density value.
    """
    fixed_values = np.asarray(fixed_values, dtype=float)
    fixed_mask = np.asarray(fixed_mask, dtype=bool)
    v = np.where(fixed_mask, fixed_values, 0.0)
    free = ~fixed_mask
    if free.any():
        q = _hessian(mat)
        qff = q[np.ix_(free, free)]
        rhs = -q[np.ix_(free, fixed_mask)] @ v[fixed_mask]
        try:
            v[free] = np.linalg.solve(qff, rhs)
        except np.linalg.LinAlgError as exc:  # cannot occur on the admissible cone
            raise RuntimeError("singular stationarity system") from exc
    return float(mat.mu * sym_norm2(v) + 0.5 * mat.lam * sym_trace(v) ** 2)


def oracle_plate(mat: IsotropicMaterial, e11: float, e22: float, e12: float) -> float:
    """Plate relaxation computed by the oracle instead of the closed form."""
    values = np.zeros(6)
    mask = np.zeros(6, dtype=bool)
    values[list(PLATE_FIXED)] = (e11, e22, e12)
    mask[list(PLATE_FIXED)] = True
    return oracle_min_density(mat, values, mask)


def oracle_beam(mat: IsotropicMaterial, e11: float, e12: float, e13: float) -> float:
    """Stiffener relaxation computed by the oracle instead of the closed form."""
    values = np.zeros(6)
    mask = np.zeros(6, dtype=bool)
    values[list(BEAM_FIXED)] = (e11, e12, e13)
    mask[list(BEAM_FIXED)] = True
    return oracle_min_density(mat, values, mask)


__all__ = [
    "plate_density",
    "beam_density",
    "relaxed_plate_tensor",
    "relaxed_beam_tensor",
    "oracle_min_density",
    "oracle_plate",
    "oracle_beam",
]
