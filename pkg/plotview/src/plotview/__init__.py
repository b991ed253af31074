"""Figure rendering for the dune-lab CSV outputs (see figures.FigureSpec)."""

from .figures import (
    KINDS,
    BadHeader,
    EmptyCsv,
    FigureSpec,
    InputContractError,
    MissingAlpha,
    MissingInput,
    build_figure,
    load_csv,
    parse_alpha,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "BadHeader",
    "EmptyCsv",
    "FigureSpec",
    "InputContractError",
    "MissingAlpha",
    "MissingInput",
    "build_figure",
    "load_csv",
    "parse_alpha",
    "render",
    "__version__",
]
