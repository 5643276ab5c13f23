"""Decomposition of POVMs into relabeled mixtures of extremal rank-1 POVMs.

``decompose`` realizes the package's central claim: every finite-outcome
POVM equals a convex combination of extremal rank-1 POVMs, each pushed
through a relabeling map.  The algorithm rewrites the
input as a relabeling of a rank-1 POVM, then repeatedly splits any
linearly dependent rank-1 POVM into a proper mixture of two POVMs with
strictly fewer nonzero effects until every branch reaches a POVM with
independent (hence extremal) effects.  The result is a verifiable
certificate; verification and measurement-statistics checks live here
too.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    InternalContradictionError,
    NonConvergenceError,
    NotExtremalError,
    NotRank1Error,
)
from .extremality import find_effect_dependence, is_extremal, is_extremal_rank1, split_mixture
from .linalg import DEFAULT_TOL, ToleranceConfig
from .povm import Povm, RelabelMap, prune_zero_effects, relabel, spectral_relabel, validate

__all__ = [
    "CertificateComponent",
    "DecompositionCertificate",
    "VerificationReport",
    "StatisticsReport",
    "decompose",
    "extremal_to_rank1",
    "verify_certificate",
    "outcome_probabilities",
    "statistics_equivalence",
    "random_density_matrix",
]

# Branch weights below this are numerical debris from repeated splits.
_WEIGHT_FLOOR = 1e-12


def _prune_split_debris(p: Povm, tol: ToleranceConfig) -> tuple[Povm, RelabelMap]:
    """Prune for the split recursion, aligned with the rank cutoff.

    Repeated splits can leave effects whose every eigenvalue sits below
    the rank cutoff ("rank 0" debris); such effects would derail the
    dependence search and can never appear in an extremal rank-1 leaf,
    so they are dropped here.  Each drop perturbs the reconstruction by
    at most its own norm, well under the certificate budget.
    """
    floor = max(tol.zero_effect_tol, np.sqrt(p.dim) * tol.rank_tol)
    keep = np.flatnonzero(p.effect_norms() > floor)
    return Povm(p.effects[keep]), RelabelMap(keep.size, p.n_outcomes, keep)


@dataclass(frozen=True)
class CertificateComponent:
    """One decomposition term: weight, extremal rank-1 POVM, relabeling map."""

    weight: float
    extremal: Povm
    relabel: RelabelMap


@dataclass(frozen=True)
class DecompositionCertificate:
    """Convex decomposition of ``target`` into relabeled extremal rank-1 POVMs.

    Invariant: sum_i weight_i * relabel(extremal_i, relabel_i)
    reconstructs ``target`` effect by effect, with weights summing to 1.
    ``dropped_weight`` records total branch weight discarded as
    numerical debris before renormalization (not serialized).
    """

    target: Povm
    components: tuple[CertificateComponent, ...]
    dropped_weight: float = 0.0

    def reconstruction(self) -> np.ndarray:
        """Effect stack of the weighted relabeled mixture."""
        out = np.zeros_like(self.target.effects)
        for comp in self.components:
            out = out + comp.weight * relabel(comp.extremal, comp.relabel).effects
        return out

    def to_jsonable(self) -> dict:
        return {
            "target": self.target.to_jsonable(),
            "components": [
                {
                    "weight": comp.weight,
                    "extremal": comp.extremal.to_jsonable(),
                    "relabel": comp.relabel.to_jsonable(),
                }
                for comp in self.components
            ],
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "DecompositionCertificate":
        try:
            target = Povm.from_jsonable(obj["target"])
            comps = []
            for entry in obj["components"]:
                extremal = Povm.from_jsonable(entry["extremal"])
                entries = entry["relabel"]
                if len(entries) != extremal.n_outcomes:
                    raise ValueError(
                        f"relabel map has {len(entries)} entries for a "
                        f"{extremal.n_outcomes}-outcome component"
                    )
                comps.append(
                    CertificateComponent(
                        weight=float(entry["weight"]),
                        extremal=extremal,
                        relabel=RelabelMap.from_jsonable(entries, target.n_outcomes),
                    )
                )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed certificate document: {exc}") from exc
        return cls(target=target, components=tuple(comps))


def _merge_leaves(
    leaves: list[tuple[float, Povm, RelabelMap]]
) -> list[tuple[float, Povm, RelabelMap]]:
    """Sum weights of leaves with identical POVMs and identical maps."""
    merged: list[tuple[float, Povm, RelabelMap]] = []
    for weight, povm, rmap in leaves:
        for i, (w0, p0, m0) in enumerate(merged):
            if (
                p0.n_outcomes == povm.n_outcomes
                and np.array_equal(m0.targets, rmap.targets)
                and np.allclose(p0.effects, povm.effects, rtol=0.0, atol=1e-12)
            ):
                merged[i] = (w0 + weight, p0, m0)
                break
        else:
            merged.append((weight, povm, rmap))
    return merged


def decompose(p: Povm, tol: ToleranceConfig = DEFAULT_TOL) -> DecompositionCertificate:
    """Decompose a valid POVM into relabeled extremal rank-1 components.

    Steps: (1) rewrite ``p`` as a relabeling of a rank-1 POVM via
    spectral expansion; (2) while a branch POVM has linearly dependent
    effects, split it into a proper mixture and recurse on both halves,
    multiplying branch weights; (3) emit every independent branch as a
    component, its map composed from the spectral projection map and all
    pruning steps along its path.  The recursion depth is bounded by the
    nonzero-effect count minus d; exceeding that bound raises
    ``NonConvergenceError`` (it signals inconsistent tolerances).
    """
    p = validate(p, tol)
    pruned, prune_map = prune_zero_effects(p, tol)
    root, spectral_map = spectral_relabel(pruned, tol)
    root, debris_map = _prune_split_debris(root, tol)
    root_map = debris_map.then(spectral_map.then(prune_map))
    max_depth = root.n_outcomes - p.dim + 1
    leaves: list[tuple[float, Povm, RelabelMap]] = []

    def recurse(q: Povm, qmap: RelabelMap, weight: float, depth: int) -> None:
        if depth > max_depth:
            raise NonConvergenceError(
                f"split recursion exceeded depth {max_depth}; "
                "tolerances are inconsistent for this input"
            )
        lam = find_effect_dependence(q, tol)
        if lam is None:
            leaves.append((weight, q, qmap))
            return
        split = split_mixture(q, lam, tol)
        left, left_prune = _prune_split_debris(split.left, tol)
        right, right_prune = _prune_split_debris(split.right, tol)
        recurse(left, left_prune.then(qmap), weight * split.weight, depth + 1)
        recurse(right, right_prune.then(qmap), weight * (1.0 - split.weight), depth + 1)

    recurse(root, root_map, 1.0, 0)

    merged = _merge_leaves(leaves)
    kept = [(w, q, m) for w, q, m in merged if w >= _WEIGHT_FLOOR]
    dropped = sum(w for w, _, _ in merged) - sum(w for w, _, _ in kept)
    total = sum(w for w, _, _ in kept)
    components = tuple(
        CertificateComponent(weight=w / total, extremal=q, relabel=m) for w, q, m in kept
    )
    return DecompositionCertificate(
        target=p, components=components, dropped_weight=float(dropped)
    )


def extremal_to_rank1(
    p: Povm, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[Povm, RelabelMap]:
    """Write an extremal POVM as a relabeling of an extremal rank-1 POVM.

    For extremal input the spectral expansion is itself extremal; this
    is asserted on the output, and a failure (possible only through
    tolerance inconsistency) raises ``InternalContradictionError``.
    """
    if not is_extremal(p, tol):
        raise NotExtremalError("input POVM is not extremal")
    rank1, rmap = spectral_relabel(p, tol)
    if not is_extremal_rank1(rank1, tol):
        raise InternalContradictionError(
            "spectral expansion of an extremal POVM failed the rank-1 "
            "extremality test (tolerance inconsistency)"
        )
    return rank1, rmap


@dataclass(frozen=True)
class VerificationReport:
    """Certificate check results; ``passed`` aggregates all lines.

    Residuals are Frobenius norms; ``component_extremal`` holds one
    verdict per component (False also covers components that are not
    rank-1 at all).
    """

    weight_sum_residual: float
    effect_residuals: np.ndarray
    component_extremal: tuple[bool, ...]
    passed: bool
    failures: tuple[str, ...] = field(default=())


def verify_certificate(
    cert: DecompositionCertificate, tol: ToleranceConfig = DEFAULT_TOL
) -> VerificationReport:
    """Check a certificate standalone: weights, extremality, reconstruction."""
    failures: list[str] = []
    weight_residual = abs(sum(c.weight for c in cert.components) - 1.0)
    if weight_residual > tol.recon_tol:
        failures.append(f"weights sum to 1 with residual {weight_residual:.3e}")
    if any(c.weight <= 0.0 for c in cert.components):
        failures.append("certificate contains a non-positive weight")

    verdicts = []
    for i, comp in enumerate(cert.components):
        try:
            ok = is_extremal_rank1(comp.extremal, tol)
        except NotRank1Error:
            ok = False
        verdicts.append(ok)
        if not ok:
            failures.append(f"component {i} is not an extremal rank-1 POVM")

    residuals = np.linalg.norm(
        cert.reconstruction() - cert.target.effects, axis=(1, 2)
    )
    worst = float(residuals.max()) if residuals.size else 0.0
    if worst > tol.recon_tol:
        failures.append(f"reconstruction residual {worst:.3e} exceeds recon_tol")

    return VerificationReport(
        weight_sum_residual=float(weight_residual),
        effect_residuals=residuals,
        component_extremal=tuple(verdicts),
        passed=not failures,
        failures=tuple(failures),
    )


def outcome_probabilities(p: Povm, rho: np.ndarray) -> np.ndarray:
    """Outcome distribution q_j = tr(rho A(j)) for a state rho."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (p.dim, p.dim):
        raise DimensionMismatchError(
            f"state must be {p.dim}x{p.dim}, got shape {rho.shape}"
        )
    return np.einsum("ab,jba->j", rho, p.effects).real


def random_density_matrix(d: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random state: normalized G G* with complex standard normal G."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    w = g @ g.conj().T
    return w / np.trace(w).real


@dataclass(frozen=True)
class StatisticsReport:
    """Per-trial deviations between direct and mixed-relabeled statistics."""

    trials: int
    deviations: np.ndarray
    max_deviation: float
    passed: bool


def statistics_equivalence(
    cert: DecompositionCertificate,
    trials: int,
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> StatisticsReport:
    """Compare target statistics against the mixed-relabeled implementation.

    For seeded random states rho, the direct distribution of the target
    is compared with sum_i weight_i * (pushforward through relabel_i of
    the distribution of extremal_i).  Passes iff the max absolute
    deviation over all trials is <= recon_tol (vacuously for trials=0).
    """
    rng = np.random.default_rng(seed)
    deviations = np.empty(trials)
    for trial in range(trials):
        rho = random_density_matrix(cert.target.dim, rng)
        direct = outcome_probabilities(cert.target, rho)
        mixed = np.zeros_like(direct)
        for comp in cert.components:
            q = outcome_probabilities(comp.extremal, rho)
            np.add.at(mixed, comp.relabel.targets, comp.weight * q)
        deviations[trial] = float(np.max(np.abs(direct - mixed)))
    max_dev = float(deviations.max()) if trials else 0.0
    return StatisticsReport(
        trials=trials,
        deviations=deviations,
        max_deviation=max_dev,
        passed=max_dev <= tol.recon_tol,
    )
