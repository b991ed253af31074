"""Figure rendering for the dune-lab CSV outputs.

Four figure kinds, one per documented CSV contract:

* ``kernel``    -- K_t(x) curves from a kernel table (``x,K_t...``), one per time
* ``symbol``    -- Re phi_I against xi from a symbol sweep
                   (``xi,re_psi,im_psi,re_phi,im_phi``)
* ``evolution`` -- bottom profiles u(x) from snapshot files (``x,u``), one per time
* ``log_l2``    -- log-norm growth from ``l2.csv`` (``t,l2,log_l2``) with the
                   rate envelope log|v0| + alpha*t overlaid, alpha read from a
                   run report's ``alpha=`` line

Rendering is a pure function of the CSV content: fixed style, no timestamps,
and no recomputation of any model quantity -- alpha comes out of the report
file the solver wrote, never out of a formula here.
"""

import os
import re
from dataclasses import dataclass

import numpy as np
import matplotlib

matplotlib.use("Agg")  # render without a display; also keeps output bytes stable
import matplotlib.pyplot as plt

KINDS = ("kernel", "symbol", "evolution", "log_l2")

# one fixed style for every figure, so identical inputs give identical bytes
STYLE = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
}

_DEFAULT_LABELS = {
    "kernel": ("x", "K_t(x)"),
    "symbol": ("xi", "Re phi_I"),
    "evolution": ("x", "u(x, t)"),
    "log_l2": ("t", "log l2 norm"),
}


class InputContractError(ValueError):
    """an input file violates the documented CSV/report contract"""


class MissingInput(InputContractError):
    pass


class BadHeader(InputContractError):
    pass


class EmptyCsv(InputContractError):
    pass


class MissingAlpha(InputContractError):
    pass


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    csv_paths: tuple
    out: str
    xlabel: str = None
    ylabel: str = None
    report: str = None  # alpha source for log_l2

    def __post_init__(self):
        assert self.kind in KINDS, f"kind must be one of {KINDS}, got {self.kind!r}"
        assert len(self.csv_paths) >= 1, "need at least one input csv"

    def labels(self):
        dx, dy = _DEFAULT_LABELS[self.kind]
        return (self.xlabel or dx, self.ylabel or dy)


# ---------------------------------------------------------------------------
# input loading


def load_csv(path, header_rule):
    """Read one CSV against its documented header.

    header_rule is either the exact header tuple or a callable on the name
    list; violations raise BadHeader, header-only files raise EmptyCsv.
    """
    if not os.path.exists(path):
        raise MissingInput(f"no such input: {path}")
    with open(path) as fh:
        first = fh.readline().strip()
        body = [ln for ln in fh if ln.strip()]
    names = tuple(s.strip() for s in first.split(","))
    ok = header_rule(names) if callable(header_rule) else names == tuple(header_rule)
    if not ok:
        raise BadHeader(f"{path}: header {first!r} does not match the documented contract")
    if not body:
        raise EmptyCsv(f"{path} has a header but no data rows; nothing to plot")
    try:
        data = np.loadtxt(body, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise InputContractError(f"{path}: unreadable data rows ({exc})") from None
    if data.shape[1] != len(names):
        raise BadHeader(f"{path}: {data.shape[1]} columns of data under {len(names)} header names")
    return names, data


def _kernel_header(names):
    return len(names) >= 2 and names[0] == "x" and all(s.startswith("K_t") for s in names[1:])


def parse_alpha(report_path):
    """Pull alpha out of a run report's ``alpha=<value>`` line."""
    if report_path is None:
        raise MissingAlpha("log_l2 needs a report file with an alpha= line "
                           "(pass --report, or include the .txt among the inputs)")
    if not os.path.exists(report_path):
        raise MissingInput(f"no such report: {report_path}")
    with open(report_path) as fh:
        text = fh.read()
    m = re.search(r"^alpha=([-+0-9.eE]+)", text, re.MULTILINE)
    if m is None:
        raise MissingAlpha(f"{report_path} has no alpha= line")
    return float(m.group(1))


def _snapshot_time(path):
    # snapshot_<t>.csv -> t, for curve labels and ordering
    m = re.search(r"snapshot_([-+0-9.eE]+)\.csv$", os.path.basename(path))
    return float(m.group(1)) if m else None


# ---------------------------------------------------------------------------
# the four figure builders


def _build_kernel(spec, ax):
    assert len(spec.csv_paths) == 1, "kernel takes exactly one csv"
    names, data = load_csv(spec.csv_paths[0], _kernel_header)
    x = data[:, 0]
    for j, name in enumerate(names[1:], start=1):
        ax.plot(x, data[:, j], label=f"t={name[3:]}")
    ax.axhline(0.0, color="0.45", lw=0.8)
    ax.legend()


def _build_symbol(spec, ax):
    assert len(spec.csv_paths) == 1, "symbol takes exactly one csv"
    _, data = load_csv(spec.csv_paths[0], ("xi", "re_psi", "im_psi", "re_phi", "im_phi"))
    ax.plot(data[:, 0], data[:, 3], label="Re phi_I")
    ax.axhline(0.0, color="0.45", lw=0.8)
    ax.legend()


def _build_evolution(spec, ax):
    curves = []
    for path in spec.csv_paths:
        _, data = load_csv(path, ("x", "u"))
        curves.append((_snapshot_time(path), path, data))
    if all(t is not None for t, _, _ in curves):
        curves.sort(key=lambda c: c[0])
    for t, path, data in curves:
        label = f"t={t:g}" if t is not None else os.path.basename(path)
        ax.plot(data[:, 0], data[:, 1], label=label)
    ax.legend()


def _build_log_l2(spec, ax):
    assert len(spec.csv_paths) == 1, "log_l2 takes exactly one csv"
    _, data = load_csv(spec.csv_paths[0], ("t", "l2", "log_l2"))
    alpha = parse_alpha(spec.report)
    t, l2, log_l2 = data[:, 0], data[:, 1], data[:, 2]
    assert l2[0] > 0, "initial norm must be positive for the envelope line"
    ax.plot(t, log_l2, label="log l2")
    ax.plot(t, np.log(l2[0]) + alpha * t, ls="--", color="0.25",
            label=f"envelope log|v0| + {alpha:g} t")
    ax.legend()


_BUILDERS = {
    "kernel": _build_kernel,
    "symbol": _build_symbol,
    "evolution": _build_evolution,
    "log_l2": _build_log_l2,
}


def build_figure(spec):
    """Assemble the matplotlib Figure for a spec (tests introspect this)."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        _BUILDERS[spec.kind](spec, ax)
        xl, yl = spec.labels()
        ax.set_xlabel(xl)
        ax.set_ylabel(yl)
        fig.tight_layout()
    return fig


def render(spec):
    """Render a spec to its output image and return the path."""
    fig = build_figure(spec)
    try:
        meta = {"Software": "plotview"} if spec.out.endswith(".png") else None
        fig.savefig(spec.out, dpi=STYLE["savefig.dpi"], metadata=meta)
    finally:
        plt.close(fig)
    return spec.out
