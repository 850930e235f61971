"""Coupled plate/beam/torsion limit problem: assembly, junction coupling, solve.

The limit state consists of two in-plane plate fields and a deflection on the
mid-plane square, plus an axial field, two deflections and a twist angle on
the stiffener axis.  The stored energy is a block quadratic form; the regime
decides which junction conditions tie the plate traces on the line ``x2 = 0``
to the beam fields.  Constraints are eliminated exactly (null-space method) so
the reduced system stays symmetric positive definite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import elements as el
from .cross_section import CrossSection, TorsionField
from .loads import Loads
from .material import IsotropicMaterial
from .regime import Branch, JunctionRule, recovery_proved


class GeometryError(ValueError):
    pass


class MeshError(ValueError):
    pass


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class Geometry:
    """Plate half-side L, thickness parameter T, stiffener section (W, H)."""

    L: float
    T: float
    W: float
    H: float

    def __post_init__(self):
        if min(self.L, self.T, self.W, self.H) <= 0:
            raise GeometryError(f"all dimensions must be positive: {self}")
        if not self.W < self.L:
            raise GeometryError(f"need W < L, got W={self.W}, L={self.L}")


@dataclass(frozen=True)
class PlateMesh:
    """Uniform structured rectangle mesh of the plate mid-plane.

    ``n2`` is forced even so the junction line x2 = 0 is a mesh line; beam
    stations coincide with the x1 node columns.
    """

    L: float
    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 2 or self.n2 < 2:
            raise MeshError("need at least 2 cells per direction")
        if self.n2 % 2:
            raise MeshError(f"n2 must be even so the line x2=0 is meshed, got {self.n2}")

    @property
    def x1(self) -> np.ndarray:
        return np.linspace(-self.L, self.L, self.n1 + 1)

    @property
    def x2(self) -> np.ndarray:
        # composed from two half meshes so the junction node is exactly zero
        half = self.n2 // 2
        return np.concatenate(
            [np.linspace(-self.L, 0.0, half + 1), np.linspace(0.0, self.L, half + 1)[1:]]
        )

    @property
    def junction_col(self) -> int:
        return self.n2 // 2


class DofLayout:
    """Global dof numbering: plate membrane, plate bending, then beam fields."""

    def __init__(self, mesh: PlateMesh):
        self.mesh = mesh
        nn = (mesh.n1 + 1) * (mesh.n2 + 1)
        ns = mesh.n1 + 1
        self.n_nodes = nn
        self.n_stations = ns
        self.off_bend = 2 * nn
        self.off_b1 = 6 * nn
        self.off_b2 = self.off_b1 + ns
        self.off_b3 = self.off_b2 + 2 * ns
        self.off_th = self.off_b3 + 2 * ns
        self.n_total = self.off_th + ns

    def node(self, i: int, j: int) -> int:
        return i * (self.mesh.n2 + 1) + j

    def m_dof(self, i, j, comp):
        return 2 * self.node(i, j) + comp

    def b_dof(self, i, j, comp):
        return self.off_bend + 4 * self.node(i, j) + comp

    def beam1(self, i):
        return self.off_b1 + i

    def beam2(self, i, comp):
        return self.off_b2 + 2 * i + comp

    def beam3(self, i, comp):
        return self.off_b3 + 2 * i + comp

    def twist(self, i):
        return self.off_th + i


def torsion_constant(xsec: CrossSection, branch: Branch, torsion: Optional[TorsionField]) -> float:
    """Torsional rigidity factor of the limit beam energy for the branch."""
    if branch is Branch.W_GT_H:
        return xsec.torsion_wide
    if branch is Branch.H_GT_W:
        return xsec.torsion_tall
    if torsion is None:
        raise SolverError("branch with equal exponents needs a solved TorsionField")
    return torsion.rigidity


def assemble_plate_energy(
    geom: Geometry, mat: IsotropicMaterial, mesh: PlateMesh, layout: Optional[DofLayout] = None
) -> sp.csr_matrix:
    """Plate stored-energy quadratic form over the global dof vector.

    Membrane, membrane-curvature coupling and bending blocks of the
    through-thickness integrated plane-stress energy; symmetric positive
    semidefinite (rigid in-plane motions and linear deflections are free).
    """
    layout = layout or DofLayout(mesh)
    if not np.any(np.isclose(mesh.x2, 0.0)):
        raise MeshError("plate mesh must contain the junction line x2=0")
    a = 2.0 * geom.L / mesh.n1
    b = 2.0 * geom.L / mesh.n2
    kmm, kmb, kbb = el.plate_element(mat.young, mat.poisson, geom.T, a, b)
    ke = np.zeros((24, 24))
    ke[:8, :8] = kmm
    ke[:8, 8:] = kmb
    ke[8:, :8] = kmb.T
    ke[8:, 8:] = kbb

    cells_i, cells_j = np.meshgrid(np.arange(mesh.n1), np.arange(mesh.n2), indexing="ij")
    ci = cells_i.ravel()
    cj = cells_j.ravel()
    corner_nodes = np.stack(
        [
            layout.node(ci, cj),
            layout.node(ci + 1, cj),
            layout.node(ci + 1, cj + 1),
            layout.node(ci, cj + 1),
        ],
        axis=1,
    )  # (ncells, 4)
    mem = (2 * corner_nodes[:, :, None] + np.array([0, 1])[None, None, :]).reshape(-1, 8)
    bend = layout.off_bend + (
        4 * corner_nodes[:, :, None] + np.arange(4)[None, None, :]
    ).reshape(-1, 16)
    edofs = np.concatenate([mem, bend], axis=1)  # (ncells, 24)

    rows = np.repeat(edofs, 24, axis=1).ravel()
    cols = np.tile(edofs, (1, 24)).ravel()
    vals = np.tile(ke.ravel(), edofs.shape[0])
    k = sp.coo_matrix((vals, (rows, cols)), shape=(layout.n_total, layout.n_total))
    return k.tocsr()


def assemble_beam_energy(
    geom: Geometry,
    mat: IsotropicMaterial,
    xsec: CrossSection,
    branch: Branch,
    mesh: PlateMesh,
    layout: Optional[DofLayout] = None,
    torsion: Optional[TorsionField] = None,
) -> sp.csr_matrix:
    """Stiffener stored-energy quadratic form over the global dof vector.

    Exact cross-sectional integration of the relaxed density with the beam
    displacement ansatz gives axial stiffness E*A, bending stiffnesses E*J
    about both section axes, the axial/vertical-bending coupling -E*S2, and a
    branch-dependent torsion coefficient mu*J.  The lateral-bending term is
    kept in every branch: the axial strain of any admissible beam field
    carries the -x2 * (second derivative of the lateral deflection) offset, so
    dropping it would make regimes with an unconstrained lateral deflection
    degenerate.
    """
    layout = layout or DofLayout(mesh)
    e = mat.young
    jt = torsion_constant(xsec, branch, torsion)
    length = 2.0 * geom.L / mesh.n1
    ka = e * xsec.area * el.p1_stiffness(length)
    kh = el.hermite_stiffness(length)
    k2 = e * xsec.inertia_x3 * kh  # lateral deflection bends about the x3 axis
    k3 = e * xsec.inertia_x2 * kh  # vertical deflection bends about the x2 axis
    kc = -e * xsec.static_moment * el.axial_bending_coupling(length)
    kt = mat.mu * jt * el.p1_stiffness(length)

    rows, cols, vals = [], [], []

    def scatter(kloc, rdofs, cdofs):
        for a, ra in enumerate(rdofs):
            for b, cb in enumerate(cdofs):
                rows.append(ra)
                cols.append(cb)
                vals.append(kloc[a, b])

    for i in range(mesh.n1):
        d1 = [layout.beam1(i), layout.beam1(i + 1)]
        d2 = [layout.beam2(i, 0), layout.beam2(i, 1), layout.beam2(i + 1, 0), layout.beam2(i + 1, 1)]
        d3 = [layout.beam3(i, 0), layout.beam3(i, 1), layout.beam3(i + 1, 0), layout.beam3(i + 1, 1)]
        dt = [layout.twist(i), layout.twist(i + 1)]
        scatter(ka, d1, d1)
        scatter(k2, d2, d2)
        scatter(k3, d3, d3)
        scatter(kc, d1, d3)
        scatter(kc.T, d3, d1)
        scatter(kt, dt, dt)

    k = sp.coo_matrix((vals, (rows, cols)), shape=(layout.n_total, layout.n_total))
    return k.tocsr()


def assemble_loads(loads: Loads, geom: Geometry, mesh: PlateMesh, layout: Optional[DofLayout] = None) -> np.ndarray:
    """Work functional of the loads as a vector over the global dofs.

    Plate densities are reduced to thickness moments against the plate
    displacement ansatz (in-plane work plus a curvature couple), beam
    densities to section resultants and first moments, the torque couples to
    the twist field only.
    """
    layout = layout or DofLayout(mesh)
    f = np.zeros(layout.n_total)
    t = geom.T
    a = 2.0 * geom.L / mesh.n1
    b = 2.0 * geom.L / mesh.n2

    p0 = [bf.moment_x3(0.0, t, 0) for bf in loads.plate]
    p1 = [bf.moment_x3(0.0, t, 1) for bf in loads.plate[:2]]

    if any(not q.is_zero() for q in p0) or any(not q.is_zero() for q in p1):
        xg, wx = el.gauss_on_interval(0.0, a)
        yg, wy = el.gauss_on_interval(0.0, b)
        X, Y = np.meshgrid(xg, yg, indexing="ij")
        wq = np.outer(wx, wy).ravel()
        xl, yl = X.ravel(), Y.ravel()
        nvals = el.membrane_values(a, b, xl, yl)  # (4, npts)
        bval, bd1, bd2, _ = el.bending_basis(a, b, xl, yl)
        x1g = mesh.x1[:, None, None] + xl[None, None, :]
        x2g = mesh.x2[None, :, None] + yl[None, None, :]
        # evaluate reduced loads on all cells at once: shape (n1, n2, npts)
        q01 = p0[0](x1g[:-1], x2g[:, :-1])
        q02 = p0[1](x1g[:-1], x2g[:, :-1])
        q03 = p0[2](x1g[:-1], x2g[:, :-1])
        q11 = p1[0](x1g[:-1], x2g[:, :-1])
        q12 = p1[1](x1g[:-1], x2g[:, :-1])
        for i in range(mesh.n1):
            for j in range(mesh.n2):
                nodes = [
                    layout.node(i, j),
                    layout.node(i + 1, j),
                    layout.node(i + 1, j + 1),
                    layout.node(i, j + 1),
                ]
                fm1 = nvals @ (wq * q01[i, j])
                fm2 = nvals @ (wq * q02[i, j])
                fb = bval @ (wq * q03[i, j]) - bd1 @ (wq * q11[i, j]) - bd2 @ (wq * q12[i, j])
                for ln, nd in enumerate(nodes):
                    f[2 * nd] += fm1[ln]
                    f[2 * nd + 1] += fm2[ln]
                    f[layout.off_bend + 4 * nd : layout.off_bend + 4 * nd + 4] += fb[
                        4 * ln : 4 * ln + 4
                    ]

    w, h = geom.W, geom.H
    q1 = loads.beam[0].section_moment(w, h, 0, 0)
    mq2 = loads.beam[0].section_moment(w, h, 1, 0)
    mq3 = loads.beam[0].section_moment(w, h, 0, 1)
    q2 = loads.beam[1].section_moment(w, h, 0, 0)
    q3 = loads.beam[2].section_moment(w, h, 0, 0)
    tq = loads.torque
    length = 2.0 * geom.L / mesh.n1

    if any(not q.is_zero() for q in (q1, mq2, mq3, q2, q3, tq)):
        xg, wg = el.gauss_on_interval(0.0, length)
        pvals, _ = el.linear1d(xg, length)
        hvals, hd1, _ = el.hermite1d(xg, length)
        for i in range(mesh.n1):
            x1g = mesh.x1[i] + xg
            fa = pvals @ (wg * q1(x1g))
            f2 = hvals @ (wg * q2(x1g)) - hd1 @ (wg * mq2(x1g))
            f3 = hvals @ (wg * q3(x1g)) - hd1 @ (wg * mq3(x1g))
            ft = pvals @ (wg * tq(x1g))
            f[layout.beam1(i)] += fa[0]
            f[layout.beam1(i + 1)] += fa[1]
            for c in range(2):
                f[layout.beam2(i, c)] += f2[c]
                f[layout.beam2(i + 1, c)] += f2[2 + c]
                f[layout.beam3(i, c)] += f3[c]
                f[layout.beam3(i + 1, c)] += f3[2 + c]
            f[layout.twist(i)] += ft[0]
            f[layout.twist(i + 1)] += ft[1]

    for strip in loads.beam_strips:
        _add_strip(f, strip, mesh, layout, length)

    return f


def _add_strip(f, strip, mesh, layout, length):
    x1 = mesh.x1
    for i in range(mesh.n1):
        lo = max(x1[i], strip.x_lo)
        hi = min(x1[i + 1], strip.x_hi)
        if hi <= lo:
            continue
        xg, wg = el.gauss_on_interval(lo - x1[i], hi - x1[i])
        if strip.component == 1:
            pvals, _ = el.linear1d(xg, length)
            vals = pvals @ (wg * strip.density)
            f[layout.beam1(i)] += vals[0]
            f[layout.beam1(i + 1)] += vals[1]
        else:
            hvals, _, _ = el.hermite1d(xg, length)
            vals = hvals @ (wg * strip.density)
            beam = layout.beam2 if strip.component == 2 else layout.beam3
            for c in range(2):
                f[beam(i, c)] += vals[c]
                f[beam(i + 1, c)] += vals[2 + c]


class ConstraintSet:
    """Homogeneous dof constraints eliminated by master-slave substitution."""

    def __init__(self, n_total: int):
        self.n_total = n_total
        self.zeros: set[int] = set()
        self.ties: dict[int, list[tuple[float, int]]] = {}

    def add_zero(self, dof: int):
        self.zeros.add(dof)

    def add_tie(self, slave: int, terms: list[tuple[float, int]]):
        if slave in self.ties or slave in self.zeros:
            raise SolverError(f"dof {slave} constrained twice")
        self.ties[slave] = list(terms)

    def _resolve(self):
        # substitute away masters that are themselves constrained; the chains
        # arising from junction conditions have depth at most two
        for _ in range(8):
            changed = False
            for slave, terms in list(self.ties.items()):
                new_terms: list[tuple[float, int]] = []
                for coef, master in terms:
                    if master in self.zeros:
                        changed = True
                    elif master in self.ties:
                        if master == slave:
                            raise SolverError("cyclic constraint")
                        for c2, m2 in self.ties[master]:
                            new_terms.append((coef * c2, m2))
                        changed = True
                    else:
                        new_terms.append((coef, master))
                self.ties[slave] = new_terms
            if not changed:
                return
        raise SolverError("constraint substitution did not terminate")

    def reduction(self) -> tuple[sp.csr_matrix, np.ndarray]:
        """Sparse map from reduced to full dofs and the retained dof indices."""
        self._resolve()
        constrained = self.zeros | set(self.ties)
        retained = np.array(sorted(set(range(self.n_total)) - constrained), dtype=int)
        col = {d: c for c, d in enumerate(retained)}
        rows = list(retained)
        cols = list(range(len(retained)))
        vals = [1.0] * len(retained)
        for slave, terms in self.ties.items():
            for coef, master in terms:
                rows.append(slave)
                cols.append(col[master])
                vals.append(coef)
        r = sp.coo_matrix((vals, (rows, cols)), shape=(self.n_total, len(retained)))
        return r.tocsr(), retained

    def residual(self, z: np.ndarray) -> float:
        res = 0.0
        for d in self.zeros:
            res = max(res, abs(z[d]))
        for slave, terms in self.ties.items():
            res = max(res, abs(z[slave] - sum(c * z[m] for c, m in terms)))
        return res


def apply_junction(
    rule: JunctionRule, geom: Geometry, mesh: PlateMesh, layout: DofLayout, cs: ConstraintSet
) -> None:
    """Add the regime's junction constraints at every junction-line node.

    The clamped station x1 = L is skipped: every dof entering a condition is
    already zero there.  Value/slope dof pairs are tied together where both
    sides carry them (vertical deflection), otherwise nodal values only.
    """
    j0 = mesh.junction_col
    half_t = 0.5 * geom.T
    for i in range(mesh.n1):  # stations except the clamped one
        pm1 = layout.m_dof(i, j0, 0)
        pm2 = layout.m_dof(i, j0, 1)
        pv = layout.b_dof(i, j0, 0)
        pvx = layout.b_dof(i, j0, 1)
        pvy = layout.b_dof(i, j0, 2)
        pvxy = layout.b_dof(i, j0, 3)

        pf, bf = rule.plate_flags, rule.beam_flags

        # axial condition, discriminant k
        if pf[0] and bf[0]:
            cs.add_tie(layout.beam1(i), [(1.0, pm1), (-half_t, pvx)])
        elif pf[0]:
            cs.add_tie(pm1, [(half_t, pvx)])
        else:
            cs.add_zero(layout.beam1(i))

        # lateral condition, discriminant k+w
        if pf[1] and bf[1]:
            cs.add_tie(layout.beam2(i, 0), [(1.0, pm2), (-half_t, pvy)])
        elif pf[1]:
            cs.add_tie(pm2, [(half_t, pvy)])
        else:
            cs.add_zero(layout.beam2(i, 0))
            cs.add_zero(layout.beam2(i, 1))

        # vertical condition, discriminant k+h-1
        if pf[2] and bf[2]:
            cs.add_tie(layout.beam3(i, 0), [(1.0, pv)])
            cs.add_tie(layout.beam3(i, 1), [(1.0, pvx)])
        elif pf[2]:
            cs.add_zero(pv)
            cs.add_zero(pvx)
        else:
            cs.add_zero(layout.beam3(i, 0))
            cs.add_zero(layout.beam3(i, 1))

        # twist condition, discriminant k+max_exp-1
        if pf[3] and bf[3]:
            cs.add_tie(layout.twist(i), [(1.0, pvy)])
        elif pf[3]:
            cs.add_zero(pvy)
            cs.add_zero(pvxy)
        else:
            cs.add_zero(layout.twist(i))


def clamp_constraints(mesh: PlateMesh, layout: DofLayout, cs: ConstraintSet) -> None:
    """Clamp every field (and the deflection gradients) on the edge x1 = L."""
    i = mesh.n1
    for j in range(mesh.n2 + 1):
        cs.add_zero(layout.m_dof(i, j, 0))
        cs.add_zero(layout.m_dof(i, j, 1))
        for c in range(4):
            cs.add_zero(layout.b_dof(i, j, c))
    cs.add_zero(layout.beam1(i))
    for c in range(2):
        cs.add_zero(layout.beam2(i, c))
        cs.add_zero(layout.beam3(i, c))
    cs.add_zero(layout.twist(i))


@dataclass
class LimitState:
    """Minimizer fields of the limit problem on the solver mesh."""

    geom: Geometry
    mesh: PlateMesh
    z: np.ndarray
    layout: DofLayout

    def _grids(self):
        m = self.mesh
        return m.x1, m.x2

    def membrane(self, comp: int) -> np.ndarray:
        """Nodal values of an in-plane plate field, shape (n1+1, n2+1)."""
        m = self.mesh
        out = np.empty((m.n1 + 1, m.n2 + 1))
        for i in range(m.n1 + 1):
            for j in range(m.n2 + 1):
                out[i, j] = self.z[self.layout.m_dof(i, j, comp)]
        return out

    def deflection_dofs(self) -> np.ndarray:
        """Bending dofs (value, d1, d2, d12) per node, shape (n1+1, n2+1, 4)."""
        m = self.mesh
        out = np.empty((m.n1 + 1, m.n2 + 1, 4))
        for i in range(m.n1 + 1):
            for j in range(m.n2 + 1):
                for c in range(4):
                    out[i, j, c] = self.z[self.layout.b_dof(i, j, c)]
        return out

    def beam_axial(self) -> np.ndarray:
        return self.z[self.layout.off_b1 : self.layout.off_b1 + self.layout.n_stations]

    def beam_lateral(self) -> np.ndarray:
        v = self.z[self.layout.off_b2 : self.layout.off_b2 + 2 * self.layout.n_stations]
        return v.reshape(-1, 2)

    def beam_vertical(self) -> np.ndarray:
        v = self.z[self.layout.off_b3 : self.layout.off_b3 + 2 * self.layout.n_stations]
        return v.reshape(-1, 2)

    def twist(self) -> np.ndarray:
        return self.z[self.layout.off_th : self.layout.off_th + self.layout.n_stations]

    def _locate(self, x1: float) -> tuple[int, float]:
        m = self.mesh
        dx = 2.0 * m.L / m.n1
        i = int(np.clip(np.floor((x1 + m.L) / dx), 0, m.n1 - 1))
        return i, x1 - m.x1[i]

    def eval_beam(self, name: str, x1: np.ndarray) -> np.ndarray:
        """Evaluate a beam field (axial, lateral, vertical, twist) at stations."""
        x1 = np.atleast_1d(np.asarray(x1, dtype=float))
        m = self.mesh
        length = 2.0 * m.L / m.n1
        out = np.empty_like(x1)
        if name in ("axial", "twist"):
            coeff = self.beam_axial() if name == "axial" else self.twist()
            for n, x in enumerate(x1):
                i, xloc = self._locate(x)
                vals, _ = el.linear1d(np.array([xloc]), length)
                out[n] = coeff[i] * vals[0, 0] + coeff[i + 1] * vals[1, 0]
        else:
            coeff = self.beam_lateral() if name == "lateral" else self.beam_vertical()
            for n, x in enumerate(x1):
                i, xloc = self._locate(x)
                vals, _, _ = el.hermite1d(np.array([xloc]), length)
                dofs = np.array([coeff[i, 0], coeff[i, 1], coeff[i + 1, 0], coeff[i + 1, 1]])
                out[n] = dofs @ vals[:, 0]
        return out

    def eval_deflection(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        """Evaluate the plate deflection at points (bicubic interpolation)."""
        x1 = np.atleast_1d(np.asarray(x1, dtype=float))
        x2 = np.atleast_1d(np.asarray(x2, dtype=float))
        m = self.mesh
        a = 2.0 * m.L / m.n1
        b = 2.0 * m.L / m.n2
        bd = self.deflection_dofs()
        out = np.empty(np.broadcast(x1, x2).shape)
        x1b, x2b = np.broadcast_arrays(x1, x2)
        for n in range(out.size):
            xi = float(x1b.flat[n])
            yj = float(x2b.flat[n])
            i = int(np.clip(np.floor((xi + m.L) / a), 0, m.n1 - 1))
            j = int(np.clip(np.floor((yj + m.L) / b), 0, m.n2 - 1))
            val, _, _, _ = el.bending_basis(
                a, b, np.array([xi - m.x1[i]]), np.array([yj - m.x2[j]])
            )
            dofs = np.concatenate(
                [bd[i, j], bd[i + 1, j], bd[i + 1, j + 1], bd[i, j + 1]]
            )
            out.flat[n] = dofs @ val[:, 0]
        return out

    def eval_membrane(self, comp: int, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        """Evaluate an in-plane plate field at points (bilinear interpolation)."""
        x1 = np.atleast_1d(np.asarray(x1, dtype=float))
        x2 = np.atleast_1d(np.asarray(x2, dtype=float))
        m = self.mesh
        a = 2.0 * m.L / m.n1
        b = 2.0 * m.L / m.n2
        vals = self.membrane(comp)
        out = np.empty(np.broadcast(x1, x2).shape)
        x1b, x2b = np.broadcast_arrays(x1, x2)
        for n in range(out.size):
            xi = float(x1b.flat[n])
            yj = float(x2b.flat[n])
            i = int(np.clip(np.floor((xi + m.L) / a), 0, m.n1 - 1))
            j = int(np.clip(np.floor((yj + m.L) / b), 0, m.n2 - 1))
            sx = (xi - m.x1[i]) / a
            sy = (yj - m.x2[j]) / b
            out.flat[n] = (
                vals[i, j] * (1 - sx) * (1 - sy)
                + vals[i + 1, j] * sx * (1 - sy)
                + vals[i + 1, j + 1] * sx * sy
                + vals[i, j + 1] * (1 - sx) * sy
            )
        return out


@dataclass
class SolveReport:
    """Minimizer plus energy bookkeeping and solver diagnostics."""

    state: LimitState
    rule: JunctionRule
    energy: float
    stored_plate: float
    stored_beam: float
    load_work: float
    constraint_residual: float
    solver_residual: float
    solver_iterations: int
    gamma_proved: bool
    n_dofs: int
    n_reduced: int

    def summary(self) -> dict:
        return {
            "energy": self.energy,
            "stored_plate": self.stored_plate,
            "stored_beam": self.stored_beam,
            "load_work": self.load_work,
            "constraint_residual": self.constraint_residual,
            "solver_residual": self.solver_residual,
            "solver_iterations": self.solver_iterations,
            "gamma_proved": self.gamma_proved,
            "branch": self.rule.branch.value,
            "sign_vector": list(self.rule.sign_vector),
            "case_letter": self.rule.case_letter,
            "n_dofs": self.n_dofs,
            "n_reduced": self.n_reduced,
        }


def solve(
    geom: Geometry,
    mat: IsotropicMaterial,
    rule: JunctionRule,
    xsec: CrossSection,
    loads: Loads,
    mesh: PlateMesh,
    torsion: Optional[TorsionField] = None,
) -> SolveReport:
    """Minimize the limit total energy for the given regime.

    Assembles the coupled quadratic form, eliminates clamp and junction
    constraints exactly, factorizes the reduced SPD system and returns the
    minimizer with its energy split and residual checks.
    """
    layout = DofLayout(mesh)
    k_plate = assemble_plate_energy(geom, mat, mesh, layout)
    k_beam = assemble_beam_energy(geom, mat, xsec, rule.branch, mesh, layout, torsion)
    k = (k_plate + k_beam).tocsr()
    f = assemble_loads(loads, geom, mesh, layout)

    cs = ConstraintSet(layout.n_total)
    clamp_constraints(mesh, layout, cs)
    apply_junction(rule, geom, mesh, layout, cs)
    r, _ = cs.reduction()

    k_red = (r.T @ k @ r).tocsc()
    f_red = r.T @ f
    refinements = 2  # iterative refinement: mixed dof scales in one system
    try:
        lu = spla.splu(k_red)
        y = lu.solve(f_red)
        for _ in range(refinements):
            y += lu.solve(f_red - k_red @ y)
    except RuntimeError as exc:
        raise SolverError(f"factorization failed: {exc}") from exc
    if not np.all(np.isfinite(y)):
        raise SolverError("solver produced non-finite values")
    z = r @ y

    fnorm = float(np.linalg.norm(f_red))
    res = float(np.linalg.norm(k_red @ y - f_red)) / (fnorm if fnorm > 0 else 1.0)
    stored_plate = 0.5 * float(z @ (k_plate @ z))
    stored_beam = 0.5 * float(z @ (k_beam @ z))
    load_work = float(f @ z)
    state = LimitState(geom=geom, mesh=mesh, z=z, layout=layout)
    return SolveReport(
        state=state,
        rule=rule,
        energy=stored_plate + stored_beam - load_work,
        stored_plate=stored_plate,
        stored_beam=stored_beam,
        load_work=load_work,
        constraint_residual=cs.residual(z),
        solver_residual=res,
        solver_iterations=1 + refinements,
        gamma_proved=recovery_proved(rule),
        n_dofs=layout.n_total,
        n_reduced=k_red.shape[0],
    )
