"""Registered compact homogeneous spaces with closed-form first eigenvalues.

The shipped registry (``registry.json``) holds the round spheres
``sphere:n`` and the real projective spaces ``rp:n`` of constant sectional
curvature one for ``2 <= n <= 16``, plus flat square tori of side ``2 pi``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..errors import UnknownSpectrum
from ..tensor_core import CurvatureTensor, constant_curvature_tensor, validate_curvature_tensor


@dataclass(frozen=True)
class SpaceDescriptor:
    name: str
    n: int
    curvature: dict
    lambda1: float | None = None
    irreducible: bool = False
    covers: tuple = ()
    lambda1_error: float = 0.0
    source: str = ""

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"{self.name}: dimension must be >= 2")
        if self.lambda1 is not None and not self.lambda1 > 0:
            raise ValueError(f"{self.name}: lambda1 must be positive")
        object.__setattr__(self, "covers", tuple((str(b), int(s)) for b, s in self.covers))

    def require_lambda1(self) -> float:
        if self.lambda1 is None:
            raise UnknownSpectrum(f"{self.name}: lambda1 is unknown")
        return float(self.lambda1)

    def curvature_tensor(self) -> CurvatureTensor:
        model = self.curvature.get("model")
        if model == "constant":
            return constant_curvature_tensor(self.n, float(self.curvature["c0"]))
        if "components" in self.curvature:
            return validate_curvature_tensor(self.curvature["components"])
        raise ValueError(f"{self.name}: unsupported curvature model {model!r}")

    @classmethod
    def from_json(cls, rec: dict) -> "SpaceDescriptor":
        lam = rec.get("lambda1")
        return cls(
            name=rec["name"],
            n=int(rec["n"]),
            curvature=rec["curvature"],
            lambda1=None if lam in (None, "unknown") else float(lam),
            irreducible=bool(rec.get("irreducible", False)),
            covers=tuple((c["space"], c["sheets"]) for c in rec.get("covers", [])),
            lambda1_error=float(rec.get("lambda1_error", 0.0)),
            source=rec.get("source", ""),
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "curvature": self.curvature,
            "lambda1": "unknown" if self.lambda1 is None else self.lambda1,
            "irreducible": self.irreducible,
            "covers": [{"space": b, "sheets": s} for b, s in self.covers],
            "source": self.source,
        }


def covering_sheets(cover: SpaceDescriptor, base: SpaceDescriptor):
    """Sheet count if ``cover`` is registered as covering ``base``, else None."""
    for name, sheets in cover.covers:
        if name == base.name:
            return sheets
    return None


def lambda1_closed_form(s: SpaceDescriptor) -> float:
    return s.require_lambda1()


def load_registry(path=None) -> dict:
    """Read a registry file; the packaged one when ``path`` is None."""
    if path is None:
        text = resources.files(__package__).joinpath("registry.json").read_text()
    else:
        text = Path(path).read_text()
    return {rec["name"]: SpaceDescriptor.from_json(rec) for rec in json.loads(text)}


@lru_cache(maxsize=1)
def _default_registry():
    return load_registry()


def get_space(name: str) -> SpaceDescriptor:
    try:
        return _default_registry()[name]
    except KeyError:
        raise KeyError(f"no registered space named {name!r}") from None


def build_default_records(max_n: int = 16) -> list:
    """Records of the shipped registry; ``registry.json`` is generated from this."""
    recs = []
    for n in range(2, max_n + 1):
        recs.append({
            "name": f"sphere:{n}",
            "n": n,
            "curvature": {"model": "constant", "c0": 1.0},
            "lambda1": float(n),
            "irreducible": True,
            "covers": [{"space": f"rp:{n}", "sheets": 2}],
            "source": "round sphere S^n(1) = SO(n+1)/SO(n); lambda1 = n (Berger-Gauduchon-Mazet)",
        })
        recs.append({
            "name": f"rp:{n}",
            "n": n,
            "curvature": {"model": "constant", "c0": 1.0},
            "lambda1": float(2 * (n + 1)),
            "irreducible": True,
            "covers": [],
            "source": "RP^n(1) = SO(n+1)/(SO(n) x {+-1}); lambda1 = 2(n+1), even spherical harmonics of degree 2",
        })
    for n in (2, 3):
        recs.append({
            "name": f"flat-torus:{n}",
            "n": n,
            "curvature": {"model": "constant", "c0": 0.0},
            "lambda1": 1.0,
            "irreducible": False,
            "covers": [],
            "source": "square torus R^n / (2 pi Z)^n; Fourier modes, smallest nonzero |k|^2 = 1",
        })
    return recs
