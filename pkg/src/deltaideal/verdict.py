"""Ideal-embedding decisions for registered compact homogeneous spaces.

Two routes are implemented. The criterion route compares ``lambda1`` with
``n * max delta/c`` directly: an irreducible compact homogeneous space
admits an ideal immersion exactly when they are equal, and always has
``lambda1 >= n * max delta/c``. The covering route takes an isometric
covering ``M -> N`` of irreducible spaces: pulled-back eigenfunctions give
``lambda1(N) >= lambda1(M)``, so a mismatch forces ``lambda1(N) > lambda1(M)
>= n * max delta/c(M) = n * max delta/c(N)`` and ``N`` has no ideal
embedding in any Euclidean space.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .delta_opt import OptimizerOptions, max_normalized_delta
from .errors import InconsistentSpectrum, MismatchedPair, NotIrreducible, PullbackViolation
from .spectral.registry import SpaceDescriptor, covering_sheets

EQUALITY_RTOL = 1e-9
DELTA0_TOL = 1e-9

# Named steps of the covering argument, in the order they are applied.
STEP_PULLBACK = "pullback: lambda1(base) >= lambda1(cover)"
STEP_STRICT = "strict: lambda1(base) > lambda1(cover)"
STEP_GAP = "gap: lambda1(base) > n * delta0(base)"
STEP_CRITERION = "criterion: ideal iff lambda1 = n * delta0"
STEP_LOWER_BOUND = "lower bound: lambda1 >= n * delta0"


class Outcome(enum.Enum):
    IDEAL_CAPABLE = "IDEAL_CAPABLE"
    NO_IDEAL_EMBEDDING = "NO_IDEAL_EMBEDDING"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Verdict:
    subject: SpaceDescriptor
    outcome: Outcome
    lambda1: float | None = None
    n_delta0: float | None = None
    partner: str | None = None
    chain: tuple = ()
    reason: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        evidence = {"lambda1": self.lambda1, "n_delta0": self.n_delta0, "chain": list(self.chain)}
        if self.partner is not None:
            evidence["covering_partner"] = self.partner
        evidence.update(self.extra)
        out = {"subject": self.subject.name, "outcome": self.outcome.value, "evidence": evidence}
        if self.reason:
            out["reason"] = self.reason
        return out


def delta0_of(s: SpaceDescriptor, opts: OptimizerOptions | None = None) -> float:
    """``max delta/c`` of the space's curvature model, recomputed on every call.

    Homogeneity makes the value the same at every point, so a single
    tangent space suffices.
    """
    return max_normalized_delta(s.curvature_tensor(), opts).value


def ideality_criterion(s: SpaceDescriptor, delta0: float | None = None,
                       opts: OptimizerOptions | None = None) -> Verdict:
    """Decide ideality of an irreducible space from ``lambda1`` and ``n * delta0``.

    Reducible spaces get ``INCONCLUSIVE`` with a :class:`NotIrreducible`
    reason. When ``s.lambda1_error`` is positive (a mesh estimate) an
    equality inside the error bar is also ``INCONCLUSIVE``.
    """
    if not s.irreducible:
        return Verdict(s, Outcome.INCONCLUSIVE, s.lambda1, None,
                       reason=str(NotIrreducible(f"{s.name} is not registered as irreducible")))
    lam = s.require_lambda1()
    if delta0 is None:
        delta0 = delta0_of(s, opts)
    nd = s.n * delta0
    if lam < nd - EQUALITY_RTOL * max(1.0, lam) - s.lambda1_error:
        raise InconsistentSpectrum(f"{s.name}: lambda1={lam} is below n*delta0={nd}")
    gap = abs(lam - nd)
    if s.lambda1_error > 0 and gap <= s.lambda1_error:
        return Verdict(s, Outcome.INCONCLUSIVE, lam, nd, chain=(STEP_CRITERION,),
                       reason="equality holds within the lambda1 error bar")
    if gap < EQUALITY_RTOL * max(1.0, lam):
        outcome = Outcome.IDEAL_CAPABLE
    else:
        outcome = Outcome.NO_IDEAL_EMBEDDING
    return Verdict(s, outcome, lam, nd, chain=(STEP_LOWER_BOUND, STEP_CRITERION))


def covering_obstruction(cover: SpaceDescriptor, base: SpaceDescriptor,
                         opts: OptimizerOptions | None = None) -> Verdict:
    """Apply the covering obstruction to ``base``; never returns IDEAL_CAPABLE.

    Raises
    ------
    MismatchedPair
        If ``cover`` is not registered as covering ``base``.
    PullbackViolation
        If ``lambda1(base) < lambda1(cover)``, which no isometric covering allows.
    """
    sheets = covering_sheets(cover, base)
    if sheets is None:
        raise MismatchedPair(f"{cover.name} is not registered as covering {base.name}")
    if cover.n != base.n:
        raise MismatchedPair("a covering preserves dimension")
    for s in (cover, base):
        if not s.irreducible:
            return Verdict(base, Outcome.INCONCLUSIVE, base.lambda1, partner=cover.name,
                           reason=str(NotIrreducible(f"{s.name} is not registered as irreducible")))
    lam_m, lam_n = cover.require_lambda1(), base.require_lambda1()
    if lam_n < lam_m - EQUALITY_RTOL * max(1.0, lam_m):
        raise PullbackViolation(
            f"lambda1({base.name})={lam_n} < lambda1({cover.name})={lam_m}"
        )
    d0_m, d0_n = delta0_of(cover, opts), delta0_of(base, opts)
    if abs(d0_m - d0_n) > DELTA0_TOL * max(1.0, abs(d0_m)):
        raise MismatchedPair(
            f"delta0 differs across the covering ({d0_m} vs {d0_n}); not a local isometry"
        )
    nd = base.n * d0_n
    extra = {"lambda1_cover": lam_m, "sheets": sheets, "n_delta0_cover": cover.n * d0_m}
    if abs(lam_n - lam_m) <= EQUALITY_RTOL * max(1.0, lam_m):
        return Verdict(base, Outcome.INCONCLUSIVE, lam_n, nd, cover.name, (STEP_PULLBACK,),
                       reason="lambda1 agrees across the covering", extra=extra)
    if lam_m < cover.n * d0_m - EQUALITY_RTOL * max(1.0, lam_m):
        raise InconsistentSpectrum(f"{cover.name}: lambda1={lam_m} is below n*delta0")
    return Verdict(base, Outcome.NO_IDEAL_EMBEDDING, lam_n, nd, cover.name,
                   (STEP_PULLBACK, STEP_STRICT, STEP_GAP), extra=extra)

