"""Parameter grids behind the alpha-sweep figures, rendered as CSV tables.

Each figure is a set of panels (scaled rate, shifted rate, recovery
probability), and each panel holds one series per value of the swept
parameter. Rows are ``alpha,series_label,value`` ordered by series, then
alpha.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .model import FixedSize, Probabilistic, ScaledExponential, ShiftedExponential
from .optimizer import sweep_alpha

__all__ = ["FigureSpec", "FIGURES", "figure_panels", "render_csv", "write_figure", "fmt"]

MU = 1.0
DELTA = 3.0


def fmt(x: float) -> str:
    return format(x, ".12g")


@dataclass(frozen=True)
class FigureSpec:
    """One figure: fixed parameters, the swept parameter, and its panels.

    ``panels`` maps a panel name to a service model, or to None for the
    recovery-probability panel (which does not depend on service).
    """

    figure_id: str
    access: str  # "fixed" or "prob"
    N: int
    swept: str  # "m", "r" or "p"
    values: tuple
    fixed: dict
    panels: dict
    alpha_cap: int | None = None
    notes: tuple = field(default=())

    def series(self):
        """Yield (label, m, access) per swept value."""
        for v in self.values:
            params = dict(self.fixed, **{self.swept: v})
            access = FixedSize(params["r"]) if self.access == "fixed" else Probabilistic(params["p"])
            yield f"{self.swept}={v}", params["m"], access


_SCALED = ScaledExponential(MU)
_SHIFTED = ShiftedExponential(MU, DELTA)
_THREE = {"scaled": _SCALED, "shifted": _SHIFTED, "recovery": None}

FIGURES = {
    "fig2": FigureSpec("fig2", "fixed", 30, "m", (3, 4, 5, 6), {"r": 5}, _THREE),
    "fig3": FigureSpec("fig3", "fixed", 30, "r", (6, 7, 8, 9), {"m": 3}, _THREE),
    "fig4": FigureSpec(
        "fig4", "prob", 40, "m", (1, 2, 3, 4), {"p": 0.3}, _THREE, alpha_cap=10,
        notes=("N=40 so that alpha reaches 10 for every m; N does not affect probabilistic access",),
    ),
    "fig5": FigureSpec(
        "fig5", "prob", 20, "p", (0.51, 0.61, 0.71), {"m": 2},
        {"scaled": _SCALED, "recovery": None}, alpha_cap=10,
        notes=("intermediate p value 0.61 chosen evenly between the endpoints 0.51 and 0.71",),
    ),
    "fig6": FigureSpec(
        "fig6", "prob", 20, "p", (0.3, 0.5, 0.7), {"m": 2},
        {"shifted": _SHIFTED, "recovery": None}, alpha_cap=10,
        notes=("caption names the scaled model with a shift; computed with shifted service mu=1 delta=3",),
    ),
}


def figure_panels(figure_id: str) -> dict:
    """Panel name -> list of (alpha, series_label, value) rows."""
    spec = FIGURES[figure_id]
    out = {name: [] for name in spec.panels}
    for label, m, access in spec.series():
        sweeps = {}
        for name, service in spec.panels.items():
            key = service if service is not None else _SCALED
            if key not in sweeps:
                sweeps[key] = sweep_alpha(spec.N, m, access, key, alpha_max=spec.alpha_cap)
            table = sweeps[key]
            for row in table.rows:
                value = row.p_s if service is None else row.mu_s
                out[name].append((row.alpha, label, value))
    return out


def render_csv(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _describe(spec, panel):
    service = spec.panels[panel]
    fixed = " ".join(f"{k}={v}" for k, v in spec.fixed.items())
    lines = [
        f"alloc-rate {__version__}",
        f"figure {spec.figure_id} panel {panel}",
        f"access={spec.access} N={spec.N} {fixed} swept={spec.swept}",
    ]
    if isinstance(service, ScaledExponential):
        lines.append(f"service=scaled mu={fmt(service.mu)}")
    elif isinstance(service, ShiftedExponential):
        lines.append(f"service=shifted mu={fmt(service.mu)} delta={fmt(service.delta)}")
    else:
        lines.append("value=recovery probability")
    if spec.alpha_cap is not None:
        lines.append(f"alpha capped at {spec.alpha_cap}")
    lines.extend(spec.notes)
    return lines


def write_figure(figure_id: str, output_dir) -> list[Path]:
    """Write ``<figure_id>_<panel>.csv`` for every panel; return the paths."""
    if figure_id not in FIGURES:
        raise KeyError(f"unknown figure {figure_id!r}; known: {', '.join(FIGURES)}")
    spec = FIGURES[figure_id]
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for panel, rows in figure_panels(figure_id).items():
        path = output_dir / f"{figure_id}_{panel}.csv"
        text = render_csv(("alpha", "series_label", "value"), rows, _describe(spec, panel))
        path.write_text(text, encoding="utf-8")
        paths.append(path)
    return paths
