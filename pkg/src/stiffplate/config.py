"""Problem configuration: JSON schema, validation, resolved-config echo."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .cross_section import constants
from .elasticity3d import Resolution3D
from .limit_solver import Geometry, PlateMesh
from .loads import Loads, parse_loads
from .material import IsotropicMaterial, from_lame, from_young
from .regime import ScalingExponents, derive_exponents, load_case_aliases

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Any validation failure of a problem configuration."""


def _parse_exponent(value, name: str) -> Union[float, Fraction]:
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"exponents.{name}: cannot parse rational {value!r}") from exc
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    raise ConfigError(f"exponents.{name}: expected number or rational string, got {value!r}")


@dataclass
class ProblemConfig:
    """Fully validated problem setup plus the resolved dictionary echo."""

    geometry: Geometry
    material: IsotropicMaterial
    exponents: ScalingExponents
    loads: Loads
    plate_mesh: PlateMesh
    torsion_n: int
    resolution3d: Resolution3D
    eps_list: Optional[list[float]]
    case_aliases: Optional[dict]
    output_dir: str
    resolved: dict


def _require(cond: bool, msg: str):
    if not cond:
        raise ConfigError(msg)


def parse_config(data: dict, base_dir: Optional[Path] = None) -> ProblemConfig:
    """Validate a config dictionary and precompute all derived objects.

    Checks every module precondition up front so commands can assume sane
    inputs: geometry positivity and W < L, admissible material, exponent
    domain, even plate mesh, torsion grid size, strictly decreasing eps list.
    """
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    if data.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"config must declare \"schema\": {SCHEMA_VERSION}")

    geo = data.get("geometry")
    _require(isinstance(geo, dict), "missing geometry section")
    try:
        geometry = Geometry(
            L=float(geo["L"]), T=float(geo["T"]), W=float(geo["W"]), H=float(geo["H"])
        )
    except KeyError as exc:
        raise ConfigError(f"geometry: missing key {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"geometry: {exc}") from exc

    m = data.get("material")
    _require(isinstance(m, dict), "missing material section")
    has_lame = "lambda" in m or "mu" in m
    has_eng = "E" in m or "nu" in m
    _require(has_lame != has_eng, "material: give exactly one of (lambda, mu) or (E, nu)")
    try:
        if has_lame:
            material = from_lame(float(m["lambda"]), float(m["mu"]))
        else:
            material = from_young(float(m["E"]), float(m["nu"]))
    except KeyError as exc:
        raise ConfigError(f"material: missing key {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"material: {exc}") from exc

    ex = data.get("exponents")
    _require(isinstance(ex, dict) and "w" in ex and "h" in ex, "missing exponents.w / exponents.h")
    try:
        exponents = derive_exponents(
            _parse_exponent(ex["w"], "w"), _parse_exponent(ex["h"], "h")
        )
    except ValueError as exc:
        raise ConfigError(f"exponents: {exc}") from exc

    try:
        loads = parse_loads(data.get("loads"))
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"loads: {exc}") from exc

    mesh_cfg = data.get("mesh", {})
    n1 = int(mesh_cfg.get("plate_n1", 48))
    n2 = int(mesh_cfg.get("plate_n2", 48))
    if n2 % 2:
        n2 += 1
    try:
        plate_mesh = PlateMesh(L=geometry.L, n1=n1, n2=n2)
    except ValueError as exc:
        raise ConfigError(f"mesh: {exc}") from exc
    torsion_n = int(mesh_cfg.get("torsion_n", 128))
    _require(torsion_n >= 8, f"mesh.torsion_n must be at least 8, got {torsion_n}")

    r = data.get("resolution3d", {})
    try:
        resolution3d = Resolution3D(
            nx=int(r.get("nx", 32)),
            n_width=int(r.get("n_width", 6)),
            n_outer=int(r.get("n_outer", 10)),
            n_thick=int(r.get("n_thick", 3)),
            n_height=int(r.get("n_height", 6)),
        )
    except ValueError as exc:
        raise ConfigError(f"resolution3d: {exc}") from exc

    eps_list = data.get("eps")
    if eps_list is not None:
        _require(
            isinstance(eps_list, list) and len(eps_list) >= 1,
            "eps must be a non-empty list",
        )
        eps_list = [float(e) for e in eps_list]
        _require(all(e > 0 for e in eps_list), "eps values must be positive")
        _require(
            all(b < a for a, b in zip(eps_list, eps_list[1:])),
            "eps list must be strictly decreasing",
        )

    aliases = None
    alias_path = data.get("case_aliases")
    if alias_path:
        p = Path(alias_path)
        if base_dir is not None and not p.is_absolute():
            p = base_dir / p
        _require(p.exists(), f"case_aliases file not found: {p}")
        try:
            aliases = load_case_aliases(p)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    # validate the section constants eagerly (positivity of W, H)
    constants(geometry.W, geometry.H)

    resolved = {
        "schema": SCHEMA_VERSION,
        "geometry": {"L": geometry.L, "T": geometry.T, "W": geometry.W, "H": geometry.H},
        "material": {"lambda": material.lam, "mu": material.mu},
        "exponents": {"w": str(exponents.w), "h": str(exponents.h)},
        "loads": data.get("loads", {}),
        "mesh": {"plate_n1": n1, "plate_n2": n2, "torsion_n": torsion_n},
        "resolution3d": {
            "nx": resolution3d.nx,
            "n_width": resolution3d.n_width,
            "n_outer": resolution3d.n_outer,
            "n_thick": resolution3d.n_thick,
            "n_height": resolution3d.n_height,
        },
        "eps": eps_list,
        "case_aliases": str(alias_path) if alias_path else None,
        "output_dir": data.get("output_dir", "out"),
    }
    return ProblemConfig(
        geometry=geometry,
        material=material,
        exponents=exponents,
        loads=loads,
        plate_mesh=plate_mesh,
        torsion_n=torsion_n,
        resolution3d=resolution3d,
        eps_list=eps_list,
        case_aliases=aliases,
        output_dir=resolved["output_dir"],
        resolved=resolved,
    )


def load_config(path: Union[str, Path]) -> ProblemConfig:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON: {exc}") from exc
    return parse_config(data, base_dir=p.parent)
