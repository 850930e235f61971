"""Polynomial load fields and their exact reductions to plate/beam resultants.

Loads are specified as constants or finite sums of monomials in the fixed-
domain coordinates ``(x1, x2, x3)``; all thickness/section moments needed by
the limit functionals are then computed in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

Term = tuple[float, tuple[int, int, int]]


@dataclass(frozen=True)
class PolyField:
    """Sum of monomials ``coef * x1**p1 * x2**p2 * x3**p3``."""

    terms: tuple[Term, ...] = ()

    @staticmethod
    def constant(value: float) -> "PolyField":
        if value == 0.0:
            return PolyField()
        return PolyField(((float(value), (0, 0, 0)),))

    @staticmethod
    def of(terms: Sequence[Term]) -> "PolyField":
        return PolyField(tuple((float(c), (int(p[0]), int(p[1]), int(p[2]))) for c, p in terms))

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, x1, x2=0.0, x3=0.0):
        out = np.zeros(np.broadcast(x1, x2, x3).shape)
        for c, (p1, p2, p3) in self.terms:
            out = out + c * np.asarray(x1) ** p1 * np.asarray(x2) ** p2 * np.asarray(x3) ** p3
        return out

    def moment_x3(self, lo: float, hi: float, order: int) -> "PolyField":
        """Exact ``int_lo^hi x3**order * field dx3`` as a field in (x1, x2)."""
        terms = []
        for c, (p1, p2, p3) in self.terms:
            n = p3 + order + 1
            terms.append((c * (hi**n - lo**n) / n, (p1, p2, 0)))
        return PolyField.of(terms)

    def section_moment(self, W: float, H: float, o2: int, o3: int) -> "PolyField":
        """Exact ``int over (-W,W)x(0,H) of x2**o2 * x3**o3 * field`` in x1."""
        terms = []
        for c, (p1, p2, p3) in self.terms:
            n2 = p2 + o2 + 1
            n3 = p3 + o3 + 1
            i2 = (W**n2 - (-W) ** n2) / n2
            i3 = H**n3 / n3
            terms.append((c * i2 * i3, (p1, 0, 0)))
        return PolyField.of(terms)


ZERO = PolyField()


@dataclass(frozen=True)
class StripLoad:
    """Uniform line density on a sub-interval of the beam axis.

    ``component`` is 1, 2 or 3; ``density`` is force per unit length, already
    integrated over the cross-section.  Used to approximate concentrated loads
    (square-integrable densities only).
    """

    component: int
    x_lo: float
    x_hi: float
    density: float


@dataclass(frozen=True)
class Loads:
    """Body-force densities of the limit problem.

    Plate densities live on the fixed plate domain (thickness coordinate in
    ``(0, T)``), beam densities on the fixed stiffener domain (section
    coordinates in ``(-W, W) x (0, H)``); ``torque`` is the distributed couple
    per unit length entering only the twist equation.
    """

    plate: tuple[PolyField, PolyField, PolyField] = (ZERO, ZERO, ZERO)
    beam: tuple[PolyField, PolyField, PolyField] = (ZERO, ZERO, ZERO)
    torque: PolyField = ZERO
    beam_strips: tuple[StripLoad, ...] = field(default=())

    def is_zero(self) -> bool:
        return (
            all(f.is_zero() for f in self.plate)
            and all(f.is_zero() for f in self.beam)
            and self.torque.is_zero()
            and not self.beam_strips
        )


def parse_field(spec, name: str = "load") -> PolyField:
    """Parse a JSON-style load spec: number, ``{"constant": c}`` or
    ``{"polynomial": [{"coef": c, "powers": [p1, p2, p3]}, ...]}``."""
    if spec is None:
        return ZERO
    if isinstance(spec, (int, float)):
        return PolyField.constant(float(spec))
    if isinstance(spec, dict):
        if "constant" in spec:
            return PolyField.constant(float(spec["constant"]))
        if "polynomial" in spec:
            terms = []
            for t in spec["polynomial"]:
                powers = list(t.get("powers", [0, 0, 0]))
                while len(powers) < 3:
                    powers.append(0)
                if any(int(p) < 0 for p in powers):
                    raise ValueError(f"{name}: negative power in {t}")
                terms.append((float(t["coef"]), tuple(int(p) for p in powers[:3])))
            return PolyField.of(terms)
    raise ValueError(f"{name}: cannot parse load spec {spec!r}")


def parse_loads(cfg: Optional[dict]) -> Loads:
    """Build a :class:`Loads` object from the ``loads`` config section."""
    cfg = cfg or {}
    plate = tuple(parse_field(cfg.get(f"plate_b{i}"), f"plate_b{i}") for i in (1, 2, 3))
    beam = tuple(parse_field(cfg.get(f"beam_b{i}"), f"beam_b{i}") for i in (1, 2, 3))
    torque = parse_field(cfg.get("torque"), "torque")
    strips = []
    for s in cfg.get("beam_strips", []):
        strips.append(
            StripLoad(
                component=int(s["component"]),
                x_lo=float(s["x_lo"]),
                x_hi=float(s["x_hi"]),
                density=float(s["density"]),
            )
        )
    return Loads(plate=plate, beam=beam, torque=torque, beam_strips=tuple(strips))
