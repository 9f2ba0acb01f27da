"""Figures for a verification report (matplotlib, Agg backend)."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from ..commuting import principal_component_dim  # noqa: E402
from ..ideals import colength  # noqa: E402
from ..raydeg import lower_ray_fiber, ray_decompose, upper_ray_fiber  # noqa: E402
from .runner import Fixture, Subject, VerificationReport  # noqa: E402

STATUS_COLORS = {"PASS": "#4c9a5b", "DISCREPANCY": "#d9a13b", "FAIL": "#c8553d", "ERROR": "#7a3b8f"}


def table1_grid(report: VerificationReport, path: Path) -> Path:
    """One coloured tile per fixture, placed in its (n, d) cell."""
    cells: dict = {}
    for f in report.fixtures:
        t = f.fixture.table1
        if t:
            cells.setdefault((min(t["n"], 6), t["d"]), []).append(f)
    fig, ax = plt.subplots(figsize=(9, 6))
    for (n, d), fs in cells.items():
        x0, y0 = d - 8, 6 - n
        fs = sorted(fs, key=lambda f: f.fixture.id)
        h = 0.9 / len(fs)
        for k, f in enumerate(fs):
            ax.add_patch(plt.Rectangle((x0 + 0.05, y0 + 0.05 + k * h), 0.9, h * 0.92,
                                       color=STATUS_COLORS.get(f.status, "grey")))
            ax.text(x0 + 0.5, y0 + 0.05 + (k + 0.5) * h, f.fixture.table1["component"],
                    ha="center", va="center", fontsize=7)
    ax.set_xlim(0, 3)
    ax.set_ylim(0, 3)
    ax.set_xticks([0.5, 1.5, 2.5], ["d = 8", "d = 9", "d = 10"])
    ax.set_yticks([2.5, 1.5, 0.5], ["n = 4", "n = 5", "n >= 6"])
    handles = [plt.Rectangle((0, 0), 1, 1, color=c) for c in STATUS_COLORS.values()]
    ax.legend(handles, list(STATUS_COLORS), loc="upper center", bbox_to_anchor=(0.5, -0.06), ncol=4)
    ax.set_title("Components by embedding dimension and degree")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def tangent_bars(report: VerificationReport, path: Path) -> Path:
    """Tangent dimension at each matrix-tuple fixture next to the principal component dimension."""
    names, tangent, principal = [], [], []
    for f in report.fixtures:
        got = {r.check: r.computed for r in f.results}
        if "tangent_dim" in got and f.fixture.kind == "matrix_tuple":
            t = Subject(f.fixture).tuple
            names.append(f.fixture.id)
            tangent.append(got["tangent_dim"])
            principal.append(principal_component_dim(t.d, t.n))
    fig, ax = plt.subplots(figsize=(8, 4))
    xs = range(len(names))
    ax.bar([x - 0.2 for x in xs], tangent, width=0.4, label="tangent space")
    ax.bar([x + 0.2 for x in xs], principal, width=0.4, label="principal component")
    ax.set_xticks(list(xs), names, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("dimension")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def hilbert_profiles(report: VerificationReport, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(8, 4))
    seen = set()
    for f in report.fixtures:
        for r in f.results:
            if r.check in ("hilbert_function", "local_hilbert_function") and isinstance(r.computed, list):
                key = tuple(r.computed)
                if key in seen:
                    continue
                seen.add(key)
                ax.plot(range(len(key)), key, marker="o", label=",".join(map(str, key)))
    ax.set_xlabel("degree")
    ax.set_ylabel("value")
    ax.legend(fontsize=7, ncol=2)
    ax.set_title("Hilbert functions in the catalogue")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def ray_colengths(fx: Fixture, path: Path, lambdas=("-2", "-1", "0", "1/2", "1", "2", "3")) -> Path:
    """Colength of the upper and lower ray fibres as lambda varies."""
    rd = ray_decompose(Subject(fx).main_ideal, 0)
    xs = [Fraction(x) for x in lambdas]
    up = [colength(upper_ray_fiber(rd, x)) for x in xs]
    low = [colength(lower_ray_fiber(rd, x)) for x in xs]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([float(x) for x in xs], up, marker="o", label="upper family")
    ax.plot([float(x) for x in xs], low, marker="s", linestyle="--", label="lower family")
    ax.set_xlabel("lambda")
    ax.set_ylabel("colength")
    ax.yaxis.set_major_locator(MaxNLocator(integer=True))
    ax.set_title(f"Ray fibres of {fx.id}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_all(report: VerificationReport, outdir: Path) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    out = [table1_grid(report, outdir / "table1_status.png"),
           tangent_bars(report, outdir / "tangent_dimensions.png"),
           hilbert_profiles(report, outdir / "hilbert_functions.png")]
    for f in report.fixtures:
        if f.fixture.kind == "standard_form":
            out.append(ray_colengths(f.fixture, outdir / f"ray_{f.fixture.id}.png"))
    return out
