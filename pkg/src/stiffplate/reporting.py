"""Deterministic CSV/JSON writers and the report figures.

Floats are serialized with shortest round-trip repr and files end with a
single LF, so identical runs produce byte-identical outputs.  Figures are
rendered with the Agg backend and fixed metadata.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

PNG_METADATA = {"Software": "stiffplate"}
FIG_DPI = 110


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_json(path: Path, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def savefig(fig, path: Path) -> None:
    fig.savefig(path, dpi=FIG_DPI, metadata=PNG_METADATA)
    plt.close(fig)


def torsion_figure(field, path: Path) -> None:
    """Filled contour of the warping function over the section."""
    x2, x3 = field.grid()
    fig, ax = plt.subplots(figsize=(5, 4))
    pc = ax.pcolormesh(x2, x3, field.phi.T, shading="gouraud", cmap="RdBu_r")
    fig.colorbar(pc, ax=ax, label="warping")
    ax.set_xlabel("x2")
    ax.set_ylabel("x3")
    ax.set_aspect("equal")
    ax.set_title(f"torsion function, rigidity {field.rigidity:.6g}")
    fig.tight_layout()
    savefig(fig, path)


def limit_figure(report, path: Path) -> None:
    """Deflection map plus the beam generalized displacements."""
    state = report.state
    mesh = state.mesh
    fig, axes = plt.subplots(2, 2, figsize=(9, 7))
    defl = state.deflection_dofs()[:, :, 0]
    pc = axes[0, 0].pcolormesh(mesh.x1, mesh.x2, defl.T, shading="gouraud", cmap="viridis")
    fig.colorbar(pc, ax=axes[0, 0])
    axes[0, 0].set_title("plate deflection")
    axes[0, 0].set_xlabel("x1")
    axes[0, 0].set_ylabel("x2")

    x1 = mesh.x1
    axes[0, 1].plot(x1, state.beam_vertical()[:, 0], label="vertical")
    axes[0, 1].plot(x1, state.beam_lateral()[:, 0], label="lateral")
    axes[0, 1].set_title("beam deflections")
    axes[0, 1].set_xlabel("x1")
    axes[0, 1].legend()

    axes[1, 0].plot(x1, state.beam_axial())
    axes[1, 0].set_title("beam axial displacement")
    axes[1, 0].set_xlabel("x1")

    axes[1, 1].plot(x1, state.twist())
    axes[1, 1].set_title("twist angle")
    axes[1, 1].set_xlabel("x1")
    fig.suptitle(f"limit solution, energy {report.energy:.6g}")
    fig.tight_layout()
    savefig(fig, path)


def sweep_figure(report, path: Path) -> None:
    """Energy gap and junction mismatch against the thickness parameter."""
    eps = [e.eps for e in report.entries]
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    axes[0].plot(eps, [e.energy_gap for e in report.entries], "o-")
    axes[0].set_xlabel("eps")
    axes[0].set_ylabel("|scaled energy - limit|")
    axes[0].set_title("energy gap")
    axes[1].plot(eps, [e.junction_mismatch for e in report.entries], "s-", color="tab:red")
    axes[1].set_xlabel("eps")
    axes[1].set_ylabel("junction trace mismatch")
    axes[1].set_title("junction diagnostic")
    for ax in axes:
        ax.invert_xaxis()
        ax.grid(alpha=0.3)
    fig.tight_layout()
    savefig(fig, path)
