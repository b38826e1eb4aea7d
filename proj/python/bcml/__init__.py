"""Python front end to the bcml core.

Curve arguments accept a path, a JSON string, or a dict with the keys of a
curve file (p, genus, f_coeffs, optional precision and label).
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from . import _bcml
from ._bcml import (
    BcmlError,
    buium_mm_bound,
    coleman_chabauty_bound,
    cp,
    delta,
    ghost,
    mordell_lang_point_bound,
    mordell_lang_reduction_bound,
    witt_add,
    witt_mul,
)

__version__ = _bcml.__version__

__all__ = [
    "BcmlError",
    "bound",
    "buium_mm_bound",
    "coleman",
    "coleman_chabauty_bound",
    "cp",
    "delta",
    "error_kind",
    "exit_code",
    "frobenius",
    "ghost",
    "mordell_lang_point_bound",
    "mordell_lang_reduction_bound",
    "stoll",
    "witt_add",
    "witt_mul",
]


def error_kind(err: BcmlError) -> str:
    return err.args[0]


def exit_code(err: BcmlError) -> int:
    return err.args[2]


def _curve_text(curve: str | os.PathLike | Mapping[str, Any]) -> str:
    if isinstance(curve, Mapping):
        return json.dumps(dict(curve))
    if isinstance(curve, os.PathLike) or (isinstance(curve, str) and not curve.lstrip().startswith("{")):
        return Path(curve).read_text()
    return curve


def _precision(text: str) -> int | None:
    """BCML_PRECISION applies only when the curve file does not set a precision."""
    env = os.environ.get("BCML_PRECISION")
    if not env:
        return None
    try:
        if "precision" in json.loads(text):
            return None
    except (ValueError, TypeError):
        return None
    return int(env)


def bound(kind: str, g: int, r: int = 0, p: int = 0, residue_points: int = 0) -> dict:
    """BoundReport for kind in {"mm", "ml-red", "ml-points", "chabauty"}."""
    report = json.loads(_bcml.bound_report(kind, g, r, p, residue_points))
    report["value"] = int(report["value"])
    return report


def frobenius(curve, precision: int | None = None, jobs: int = 1) -> dict:
    """Frobenius matrix in base-p digit strings plus the zeta consistency check."""
    text = _curve_text(curve)
    if precision is None:
        precision = _precision(text)
    return json.loads(_bcml.frobenius(text, precision, jobs))


def coleman(
    curve,
    omega: Sequence[int] = (),
    point: tuple[int, int] | str | None = None,
    length: int = 5,
    lam: str | None = None,
    precision: int | None = None,
) -> dict:
    """Coleman (n, k) sequence at a residue disc, with the unramified test when lam is given."""
    text = _curve_text(curve)
    if precision is None:
        precision = _precision(text)
    at_infinity = point in ("inf", "infinity")
    xy = None if point is None or at_infinity else tuple(point)
    return json.loads(_bcml.coleman(text, precision, list(omega), xy, at_infinity, length, lam))


def stoll(curve, basis: Iterable[Sequence[int]], precision: int | None = None) -> dict:
    """Vanishing-order table for differentials h(x) dx/y mod p, h given low to high."""
    text = _curve_text(curve)
    if precision is None:
        precision = _precision(text)
    return json.loads(_bcml.stoll(text, precision, basis=[list(h) for h in basis]))
