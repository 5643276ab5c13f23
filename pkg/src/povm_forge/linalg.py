"""Complex Hermitian linear-algebra kernel.

Everything downstream (POVM validation, extremality tests, the
decomposition engine) reduces to a handful of primitives implemented
here: eigendecomposition with a deterministic ordering and phase
convention, PSD and rank decisions with explicit tolerances, inverse
square roots, and linear-independence testing of operator sets via
vectorization and a singular-value rank cut.

All functions are pure; numerical decisions are governed by a
:class:`ToleranceConfig` passed explicitly (defaulting to
:data:`DEFAULT_TOL`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    NotHermitianError,
    NotPositiveDefiniteError,
)

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "SpectralDecomposition",
    "IndependenceResult",
    "eig_herm",
    "is_psd",
    "rank_of",
    "inv_sqrt",
    "vectorize",
    "linearly_independent",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds used by every tolerance-sensitive decision.

    herm_tol
        Max entrywise deviation from conjugate symmetry.
    psd_tol
        Allowed magnitude of negative eigenvalues in PSD tests; also the
        slack on the upper effect bound.
    rank_tol
        Relative eigenvalue cutoff in rank decisions, applied as
        ``rank_tol * max(1, |lambda|_max)``.
    indep_tol
        Relative singular-value cutoff in linear-independence tests.
    recon_tol
        Frobenius-norm budget for reconstruction identities
        (normalization, spectral round trips, certificate residuals).
    zero_effect_tol
        Frobenius norm below which an effect counts as the zero operator.
    """

    herm_tol: float = 1e-10
    psd_tol: float = 1e-10
    rank_tol: float = 1e-9
    indep_tol: float = 1e-9
    recon_tol: float = 1e-8
    zero_effect_tol: float = 1e-10

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{f.name} must be finite and non-negative, got {value!r}")

    def scaled(self, factor: float) -> "ToleranceConfig":
        """Return a copy with every threshold multiplied by ``factor``."""
        if not (math.isfinite(factor) and factor > 0.0):
            raise ValueError(f"scale factor must be finite and positive, got {factor!r}")
        return replace(self, **{f.name: getattr(self, f.name) * factor for f in fields(self)})


DEFAULT_TOL = ToleranceConfig()


def _as_square_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def require_hermitian(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Return ``m`` as a complex array, raising if it is not Hermitian."""
    a = _as_square_matrix(m)
    deviation = float(np.max(np.abs(a - a.conj().T)))
    if deviation > tol.herm_tol:
        raise NotHermitianError(
            f"matrix deviates from Hermitian symmetry by {deviation:.3e} "
            f"(herm_tol = {tol.herm_tol:.3e})"
        )
    return a


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first nonzero component is real positive."""
    out = vectors.copy()
    d = out.shape[1]
    for k in range(d):
        col = out[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        pivot = col[nz[0]] if nz.size else None
        if pivot is not None:
            out[:, k] = col * (pivot.conjugate() / abs(pivot))
    return out


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigensystem of a Hermitian matrix, eigenvalues sorted descending.

    ``eigenvectors`` holds orthonormal eigenvectors as columns, aligned
    with ``eigenvalues`` and phase-fixed for reproducibility.  Degenerate
    eigenvalues come with an arbitrary orthonormal basis of their
    eigenspace; consumers must rely on reconstruction, not on the basis
    choice.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def projection(self, k: int) -> np.ndarray:
        """Rank-1 projection onto the k-th eigenvector."""
        v = self.eigenvectors[:, k]
        return np.outer(v, v.conj())

    @property
    def projections(self) -> np.ndarray:
        """All d rank-1 eigenprojections, shape (d, d, d)."""
        return np.stack([self.projection(k) for k in range(self.dim)])

    def reconstruct(self) -> np.ndarray:
        """Sum of eigenvalue-weighted eigenprojections."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_herm(m, tol: ToleranceConfig = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigendecompose a Hermitian matrix with deterministic ordering.

    Eigenvalues are returned in descending order; each eigenvector's
    first nonzero component is made real positive.
    """
    a = require_hermitian(m, tol)
    w, v = np.linalg.eigh((a + a.conj().T) / 2.0)
    order = np.argsort(-w, kind="stable")  # eigh is ascending; keep tie order
    w = np.ascontiguousarray(w[order])
    v = _fix_phases(v[:, order])
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=v)


def is_psd(m, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff the smallest eigenvalue is >= -psd_tol."""
    a = require_hermitian(m, tol)
    w = np.linalg.eigvalsh(a)
    return bool(w[0] >= -tol.psd_tol)


def rank_of(m, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Eigenvalue count above the relative cutoff rank_tol * max(1, |lambda|_max)."""
    a = require_hermitian(m, tol)
    w = np.abs(np.linalg.eigvalsh(a))
    cutoff = tol.rank_tol * max(1.0, float(w.max()))
    return int(np.count_nonzero(w > cutoff))


def inv_sqrt(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Inverse square root of a positive definite Hermitian matrix.

    The result R is Hermitian positive definite and satisfies
    ``R @ m @ R ~ identity`` within recon_tol.
    """
    dec = eig_herm(m, tol)
    smallest = float(dec.eigenvalues[-1])
    if smallest <= tol.psd_tol:
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite: smallest eigenvalue {smallest:.3e} "
            f"<= psd_tol = {tol.psd_tol:.3e}"
        )
    v = dec.eigenvectors
    r = (v / np.sqrt(dec.eigenvalues)) @ v.conj().T
    return (r + r.conj().T) / 2.0


def vectorize(m) -> np.ndarray:
    """Row-major flattening of a square matrix into a length-d^2 vector."""
    return _as_square_matrix(m).reshape(-1)


@dataclass(frozen=True)
class IndependenceResult:
    """Outcome of a linear-independence test over complex scalars.

    ``margin`` is the smallest-to-largest singular-value ratio of the
    stacked vectorized operators (0.0 when there are more operators than
    the ambient dimension d^2 allows).  ``null_vector`` is a unit-norm
    dependence vector, populated only when the set is dependent; it has
    real entries whenever all input operators are Hermitian.
    """

    independent: bool
    null_vector: np.ndarray | None
    margin: float

    def __bool__(self) -> bool:
        return self.independent


def _canonical_sign(vec: np.ndarray) -> np.ndarray:
    """Scale a vector so its largest-magnitude entry is real positive."""
    pivot = vec[np.argmax(np.abs(vec))]
    if abs(pivot) == 0.0:
        return vec
    return vec * (pivot.conjugate() / abs(pivot))


def linearly_independent(ops, tol: ToleranceConfig = DEFAULT_TOL) -> IndependenceResult:
    """Test a list of same-dimension matrices for linear independence.

    The matrices are vectorized into the columns of a d^2 x K matrix and
    declared independent iff its numerical rank (relative singular-value
    cutoff ``indep_tol``) equals K.  When dependent, the right-singular
    direction of the smallest singular value is returned as a unit-norm
    dependence vector; for all-Hermitian inputs it is projected onto real
    coefficients (a real dependence exists whenever a complex one does).
    """
    mats = [np.asarray(op, dtype=np.complex128) for op in ops]
    if not mats:
        raise EmptyInputError("independence test requires at least one operator")
    d = mats[0].shape[0] if mats[0].ndim == 2 else -1
    for a in mats:
        if a.ndim != 2 or a.shape != (d, d):
            raise DimensionMismatchError(
                f"all operators must be {d}x{d}, got shape {a.shape}"
            )
    stacked = np.stack([vectorize(a) for a in mats], axis=1)
    k = stacked.shape[1]
    _, s, vh = np.linalg.svd(stacked, full_matrices=True)
    s_max = float(s[0]) if s.size else 0.0
    if s_max == 0.0:
        # All operators are exactly zero; any unit vector is a dependence.
        null = np.zeros(k)
        null[0] = 1.0
        return IndependenceResult(independent=False, null_vector=null, margin=0.0)
    smallest = float(s[k - 1]) if k <= s.size else 0.0
    margin = smallest / s_max
    rank = int(np.count_nonzero(s > tol.indep_tol * s_max))
    if rank == k:
        return IndependenceResult(independent=True, null_vector=None, margin=margin)

    null = vh[-1, :].conj()
    if all(float(np.max(np.abs(a - a.conj().T))) <= tol.herm_tol for a in mats):
        real_part, imag_part = null.real, null.imag
        null = real_part if np.linalg.norm(real_part) >= np.linalg.norm(imag_part) else imag_part
        null = null / np.linalg.norm(null)
    null = _canonical_sign(null)
    null.setflags(write=False)
    return IndependenceResult(independent=False, null_vector=null, margin=margin)
