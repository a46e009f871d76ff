"""Scan configurations, scan reports and their CSV/JSON forms."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError

CSV_COLUMNS = ("z", "theta", "re", "im", "abs", "err", "method")


@dataclass(frozen=True)
class ScanConfig:
    """Grid and bound family of a kernel scan."""

    a: float
    m: int
    z_min: float = 0.0
    z_max: float = 6.0
    z_count: int = 20
    z_log: bool = False
    theta_count: int = 20
    theta_min: float = 0.0
    theta_max: float = math.pi
    methods: tuple = ("auto",)
    family: str = "CONST"
    exponent: float = 0.0
    tol: float = 1e-10
    growth_rtol: float = 0.1

    def __post_init__(self):
        if self.z_count < 1 or self.theta_count < 1:
            raise DomainError("grid counts must be positive")
        if not self.z_max >= self.z_min >= 0:
            raise DomainError("need 0 <= z_min <= z_max")
        if self.z_log and self.z_min <= 0:
            raise DomainError("log z grid needs z_min > 0")
        if self.family not in ("CONST", "POLY"):
            raise DomainError(f"unknown bound family {self.family!r}")
        if self.exponent < 0:
            raise DomainError("exponent must be nonnegative")

    @property
    def bound_exponent(self):
        return 0.0 if self.family == "CONST" else float(self.exponent)

    def z_grid(self):
        if self.z_count == 1:
            return np.array([self.z_min])
        if self.z_log:
            return np.geomspace(self.z_min, self.z_max, self.z_count)
        return np.linspace(self.z_min, self.z_max, self.z_count)

    def theta_grid(self):
        if self.theta_count == 1:
            return np.array([self.theta_min])
        return np.linspace(self.theta_min, self.theta_max, self.theta_count)


@dataclass
class Cell:
    """One evaluated grid point."""

    z: float
    theta: float
    value: complex
    err: float
    method: str

    @property
    def abs(self):
        return abs(self.value)


@dataclass
class ScanReport:
    """Per-cell values with the summary statistics of a scan or audit."""

    config: dict
    cells: list = field(default_factory=list)
    sup: float = float("nan")
    exponent_fit: dict | None = None
    violations: list = field(default_factory=list)
    growth_flag: bool = False
    failures: list = field(default_factory=list)
    runtime: float = 0.0

    def to_csv(self):
        return cells_to_csv(self.cells)

    def to_dict(self):
        return {
            "config": self.config,
            "cells": [
                {"z": c.z, "theta": c.theta, "re": c.value.real, "im": c.value.imag,
                 "abs": c.abs, "err": c.err, "method": c.method}
                for c in self.cells
            ],
            "sup": self.sup,
            "exponent_fit": self.exponent_fit,
            "violations": self.violations,
            "growth_flag": self.growth_flag,
            "failures": self.failures,
            "runtime": self.runtime,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1, default=_json_default)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    if hasattr(obj, "__dataclass_fields__"):
        return asdict(obj)
    raise TypeError(f"cannot serialize {type(obj)}")


def _fmt(x):
    return repr(float(x))


def cells_to_csv(cells):
    """CSV text with the fixed column order z,theta,re,im,abs,err,method."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for c in cells:
        w.writerow([_fmt(c.z), _fmt(c.theta), _fmt(c.value.real), _fmt(c.value.imag),
                    _fmt(c.abs), _fmt(c.err), c.method])
    return buf.getvalue()


def cells_from_csv(text):
    """Parse CSV emitted by cells_to_csv."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise DomainError("unexpected CSV header")
    out = []
    for r in rows[1:]:
        z, th, re, im, _, err, method = r
        out.append(Cell(float(z), float(th), complex(float(re), float(im)), float(err), method))
    return out


def growth_flag(zs, mags, rtol=0.1):
    """True when the sup over the last z-decade exceeds the sup elsewhere by more than rtol.

    Parameters
    ----------
    zs, mags : array_like
        Radii and (normalized) magnitudes of finite cells.
    """
    zs = np.asarray(zs, dtype=float)
    mags = np.asarray(mags, dtype=float)
    if zs.size == 0:
        return False
    top = zs.max()
    last = zs >= top / 10.0
    if last.all() or not np.any(np.isfinite(mags[~last])):
        return False
    return bool(np.nanmax(mags[last]) > (1.0 + rtol) * np.nanmax(mags[~last]))


def fit_slope(zs, values):
    """Least-squares slope of log(values) against log(zs) with its standard error."""
    zs = np.asarray(zs, dtype=float)
    values = np.asarray(values, dtype=float)
    ok = (zs > 0) & (values > 0) & np.isfinite(values)
    if ok.sum() < 3:
        raise DomainError("need at least three positive points for a slope fit")
    x, y = np.log(zs[ok]), np.log(values[ok])
    A = np.vstack([x, np.ones_like(x)]).T
    coef, res, *_ = np.linalg.lstsq(A, y, rcond=None)
    n = len(x)
    resid = y - A @ coef
    s2 = float(resid @ resid) / max(n - 2, 1)
    stderr = math.sqrt(s2 / float(((x - x.mean()) ** 2).sum()))
    return {"slope": float(coef[0]), "stderr": stderr}
