"""CheckReport: the JSON record every verification produces."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np


def _jsonable(x):
    if isinstance(x, complex) or isinstance(x, np.complexfloating):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, (int, bool)):
        return f"{x.numerator}/{x.denominator}"
    return x


@dataclass
class CheckReport:
    check_name: str
    params: dict
    grid: list
    lhs: list
    rhs: list
    tolerance: float
    paper_anchor: str
    criterion: str = "normalized"
    runtime_ms: float = 0.0
    extra: dict = field(default_factory=dict)
    status: str = ""

    def __post_init__(self):
        if self.criterion not in ("normalized", "relative", "absolute"):
            raise ValueError(f"unknown criterion {self.criterion}")
        if not self.status:
            self.status = "pass" if self.passed else "fail"

    @property
    def abs_residuals(self):
        return [abs(complex(a) - complex(b)) for a, b in zip(self.lhs, self.rhs)]

    @property
    def rel_residuals(self):
        out = []
        for a, b in zip(self.lhs, self.rhs):
            d = abs(complex(a) - complex(b))
            scale = max(abs(complex(a)), abs(complex(b)))
            out.append(0.0 if d == 0 else d / scale)
        return out

    @property
    def normalized_residuals(self):
        return [abs(complex(a) - complex(b)) / (1 + abs(complex(b))) for a, b in zip(self.lhs, self.rhs)]

    def _criterion_values(self):
        return {
            "normalized": self.normalized_residuals,
            "relative": self.rel_residuals,
            "absolute": self.abs_residuals,
        }[self.criterion]

    @property
    def max_residual(self):
        vals = self._criterion_values()
        return max(vals) if vals else 0.0

    @property
    def max_abs_residual(self):
        return max(self.abs_residuals, default=0.0)

    @property
    def max_rel_residual(self):
        return max(self.rel_residuals, default=0.0)

    @property
    def passed(self):
        if self.status and self.status not in ("pass", "fail"):
            return False
        return bool(self.max_residual <= self.tolerance)

    def to_json(self):
        return _jsonable({
            "check_name": self.check_name,
            "params": self.params,
            "grid": self.grid,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "max_abs_residual": self.max_abs_residual,
            "max_rel_residual": self.max_rel_residual,
            "max_normalized_residual": max(self.normalized_residuals, default=0.0),
            "criterion": self.criterion,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "status": self.status,
            "runtime_ms": self.runtime_ms,
            "paper_anchor": self.paper_anchor,
            "extra": self.extra,
        })

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def residual_rows(self):
        """Rows for the optional CSV: point, lhs, rhs, residual."""
        rows = []
        for g, a, b, r in zip(self.grid, self.lhs, self.rhs, self._criterion_values()):
            a, b = complex(a), complex(b)
            rows.append([json.dumps(_jsonable(g)), a.real, a.imag, b.real, b.imag, r])
        return rows


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.start) * 1000.0


def merge(reports):
    """Combine report dicts into one summary record."""
    reports = list(reports)
    return {
        "check_name": "merged",
        "count": len(reports),
        "pass": all(r.get("pass", False) for r in reports),
        "failed": [r.get("check_name") for r in reports if not r.get("pass", False)],
        "reports": reports,
    }
