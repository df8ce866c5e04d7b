"""Pointwise checks of delta(p) <= c(p) H^2 and of the equality H^2 = max delta/c."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from ..delta_opt import OptimizerOptions, delta_invariant, max_normalized_delta
from ..partitions import Partition, c_coefficient, enumerate_tuples
from .core import induced_curvature

VIOLATION_TOL = 1e-6
IDEAL_TOL = 1e-6


@dataclass(frozen=True)
class InequalityRecord:
    point: int
    u: tuple
    partition: Partition
    delta: float
    cH2: float
    converged: bool

    @property
    def slack(self) -> float:
        return self.cH2 - self.delta


@dataclass(frozen=True, eq=False)
class InequalityReport:
    records: list
    tol: float = VIOLATION_TOL

    @property
    def min_slack(self) -> float:
        return min(r.slack for r in self.records)

    @property
    def violated(self) -> bool:
        return self.min_slack < -self.tol

    @property
    def nonconverged(self) -> int:
        return sum(not r.converged for r in self.records)

    def for_partition(self, p: Partition) -> list:
        return [r for r in self.records if r.partition == p]

    def max_abs_slack(self, p: Partition) -> float:
        """Largest ``|c H^2 - delta|`` over the points, for one tuple."""
        return max(abs(r.slack) for r in self.for_partition(p))

    def summary(self) -> dict:
        parts = sorted({r.partition for r in self.records}, key=lambda p: (p.k, p.parts))
        return {
            "points": len({r.point for r in self.records}),
            "min_slack": self.min_slack,
            "violated": self.violated,
            "nonconverged": self.nonconverged,
            "partitions": [
                {
                    "partition": p.to_json(),
                    "min_slack": min(r.slack for r in self.for_partition(p)),
                    "max_abs_slack": self.max_abs_slack(p),
                }
                for p in parts
            ],
        }

    def to_json(self, records: bool = False) -> dict:
        out = self.summary()
        if records:
            out["records"] = [
                {
                    "point": r.point, "u": list(r.u), "partition": r.partition.to_json(),
                    "delta": r.delta, "cH2": r.cH2, "slack": r.slack, "converged": r.converged,
                }
                for r in self.records
            ]
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["point", "u", "partition", "delta", "cH2", "slack", "converged"])
        for r in self.records:
            w.writerow([
                r.point, " ".join(repr(float(x)) for x in r.u), str(r.partition),
                repr(r.delta), repr(r.cH2), repr(r.slack), r.converged,
            ])
        return buf.getvalue()


def _samples(im, points):
    if points is None:
        if not hasattr(im, "default_points"):
            raise ValueError("parameter points are required for parametric immersions")
        points = im.default_points()
    return [im.sample(u) for u in points]


def verify_inequality(im, points=None, opts: OptimizerOptions | None = None,
                      tol: float = VIOLATION_TOL) -> InequalityReport:
    """Evaluate ``delta(p)`` and ``c(p) H^2`` at every point for every admissible tuple.

    ``delta`` comes from the optimizer on the Gauss-equation curvature
    tensor of each sample. ``points`` may be omitted for sampled-grid
    immersions, which then use their interior nodes.
    """
    opts = opts or OptimizerOptions()
    tuples = enumerate_tuples(im.n)
    records = []
    for idx, s in enumerate(_samples(im, points)):
        R = induced_curvature(s)
        for p in tuples:
            res = delta_invariant(R, p, opts)
            records.append(InequalityRecord(
                idx, tuple(map(float, s.u)), p, res.value, c_coefficient(p) * s.H2, res.converged
            ))
    return InequalityReport(records, tol)


def ideality_residual(im, points=None, opts: OptimizerOptions | None = None) -> np.ndarray:
    """``H^2 - max_p delta(p)/c(p)`` at every point; zero everywhere for an ideal immersion."""
    opts = opts or OptimizerOptions()
    out = []
    for s in _samples(im, points):
        out.append(s.H2 - max_normalized_delta(induced_curvature(s), opts).value)
    return np.array(out)


def is_ideal(residuals, tol: float = IDEAL_TOL) -> bool:
    return bool(np.max(np.abs(residuals)) < tol)
