"""Correlated noise-mode bookkeeping for the noisy gate models.

Gate outputs are linear combinations of scalar quadrature variables z:
signal quadratures first, then intracavity initials, loss vacua,
auxiliary temporal modes of the mediator field, and thermal-force
modes.  Distinct temporal modes of the same traveling field are in
general *not* orthogonal; their vacuum-normalized overlaps form a Gram
matrix Σ₀ with unit diagonal.  This module turns the stated pairwise
overlaps into an explicit lower-triangular transform C with Σ₀ = C Cᵀ:
each auxiliary mode is decomposed sequentially into its component along
the flat-top mode (coefficient = the stated overlap) plus an
orthogonal remainder, so downstream covariances can be assembled over
independent unit-variance latent modes and non-vacuum states (thermal
terms, squeezed mediator input) can be injected on the flat-top slot
consistently.

Broadband mediator squeezing rescales the variances — and, by the same
factor, the co-quadrature cross-correlations — of the mediator-derived
temporal modes only.  Loss vacua, intracavity initial quadratures and
thermal-force modes always stay at vacuum variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

_OVERLAP_TOL = 1e-12     # |overlap| may exceed 1 by at most this
_PSD_TOL = 1e-8          # pivot below -this: genuinely impossible overlaps
_DEGENERACY_TOL = 1e-10  # pivot below +this: mode treated as exactly dependent


class OverlapConsistencyError(ValueError):
    """The stated pairwise overlaps do not form a valid Gram matrix."""


def build_gram(labels: Sequence[str], overlaps: Mapping[tuple[str, str], float]) -> np.ndarray:
    """Unit-diagonal Gram matrix from pairwise overlaps (either key order)."""
    index = {lab: i for i, lab in enumerate(labels)}
    if len(index) != len(labels):
        raise ValueError("duplicate mode labels")
    gram = np.eye(len(labels))
    for (a, b), value in overlaps.items():
        if a not in index or b not in index:
            raise OverlapConsistencyError(f"overlap references unknown mode ({a!r}, {b!r})")
        if a == b:
            raise OverlapConsistencyError(f"self-overlap stated for {a!r}; diagonal is fixed at 1")
        if abs(value) > 1.0 + _OVERLAP_TOL:
            raise OverlapConsistencyError(
                f"overlap between {a!r} and {b!r} is {value:.6g}, outside [-1, 1]"
            )
        gram[index[a], index[b]] = value
        gram[index[b], index[a]] = value
    return gram


def gram_cholesky(gram: np.ndarray, labels: Sequence[str]) -> np.ndarray:
    """Lower-triangular C with gram = C Cᵀ (sequential orthogonalization).

    Exactly dependent chains are legitimate — long pulses drive some
    temporal modes collinear — so pivots within roundoff of zero are
    clamped to an exact dependence.  Genuinely impossible overlaps
    produce order-one negative pivots and raise
    :class:`OverlapConsistencyError` naming the offending mode pair.
    """
    n = len(labels)
    gram = np.asarray(gram, dtype=float)
    if gram.shape != (n, n):
        raise ValueError("Gram matrix shape does not match the label list")
    if not np.allclose(gram, gram.T, atol=1e-12):
        raise OverlapConsistencyError("overlap matrix is not symmetric")
    L = np.zeros((n, n))
    for k in range(n):
        d = gram[k, k] - float(L[k, :k] @ L[k, :k])
        if d < -_PSD_TOL:
            j = int(np.argmax(np.abs(L[k, :k]))) if k else 0
            raise OverlapConsistencyError(
                f"stated overlaps are numerically impossible: mode {labels[k]!r} "
                f"has residual variance {d:.3e} after removing its correlated "
                f"components; strongest conflict is the "
                f"({labels[j]!r}, {labels[k]!r}) pair"
            )
        L[k, k] = math.sqrt(d) if d > _DEGENERACY_TOL else 0.0
        for i in range(k + 1, n):
            off = gram[i, k] - float(L[i, :k] @ L[k, :k])
            if L[k, k] > 0.0:
                L[i, k] = off / L[k, k]
            elif abs(off) > _PSD_TOL:
                raise OverlapConsistencyError(
                    f"mode {labels[k]!r} is fully determined by earlier modes, "
                    f"yet a further overlap with {labels[i]!r} is stated; the "
                    f"({labels[k]!r}, {labels[i]!r}) pair is inconsistent"
                )
    return L


@dataclass(frozen=True)
class NoiseModeBasis:
    """Ordered quadrature variables z with their correlation structure.

    ``transform`` is the lower-triangular C with sigma0 = C Cᵀ, mapping
    independent unit-variance latents to the physical (correlated)
    modes: a coefficient row A over z becomes à = A·C over latents.
    ``mediator_x`` / ``mediator_p`` mark the mediator-derived temporal
    modes eligible for broadband squeezing, by quadrature family.
    """

    labels: tuple[str, ...]
    sigma0: np.ndarray
    transform: np.ndarray
    mediator_x: tuple[str, ...] = ()
    mediator_p: tuple[str, ...] = ()
    squeezing_db: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        for name in ("mediator_x", "mediator_p"):
            group = tuple(getattr(self, name))
            unknown = set(group) - set(self.labels)
            if unknown:
                raise ValueError(f"{name} references unknown labels {sorted(unknown)}")
            object.__setattr__(self, name, group)
        sig = np.asarray(self.sigma0, dtype=float)
        n = len(self.labels)
        if sig.shape != (n, n):
            raise ValueError("sigma0 shape does not match labels")
        object.__setattr__(self, "sigma0", sig)
        object.__setattr__(self, "transform", np.asarray(self.transform, dtype=float))

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def correlation(self, a: str, b: str) -> float:
        return float(self.sigma0[self.index(a), self.index(b)])

    def correlation_matrix(self) -> np.ndarray:
        """Reconstruction C Cᵀ — must match sigma0 (pinned in tests)."""
        return self.transform @ self.transform.T


def orthogonalize_noise_modes(
    labels: Sequence[str],
    overlaps: Mapping[tuple[str, str], float],
    mediator_x: Iterable[str] = (),
    mediator_p: Iterable[str] = (),
) -> NoiseModeBasis:
    """Build a NoiseModeBasis from stated pairwise overlaps.

    Every appendix-style cross-correlation is reproduced exactly by the
    returned transform (C Cᵀ = Σ₀); impossible overlap sets raise
    :class:`OverlapConsistencyError` naming the offending pair.
    """
    gram = build_gram(labels, overlaps)
    C = gram_cholesky(gram, labels)
    return NoiseModeBasis(
        labels=tuple(labels),
        sigma0=gram,
        transform=C,
        mediator_x=tuple(mediator_x),
        mediator_p=tuple(mediator_p),
    )


def squeezing_factor(squeezing_db: float) -> float:
    """Variance factor e^{-2r} on the squeezed quadrature family."""
    r = squeezing_db * math.log(10.0) / 20.0
    return math.exp(-2.0 * r)


def apply_squeezing(
    basis: NoiseModeBasis,
    squeezing_db: float,
    convention: str = "squeeze_p",
) -> NoiseModeBasis:
    """Broadband squeezing of the mediator input pulse.

    Scales the variance of every mediator-derived temporal mode by
    e^{-2r} on the squeezed quadrature family and e^{+2r} on its
    conjugate, r = squeezing_db·ln(10)/20; co-quadrature
    cross-correlations scale by the same factor (frequency-flat
    squeezing over the pulse band).  The default convention squeezes
    the P family — the assignment under which mediator squeezing
    actually improves the bunching element (the alternate assignment
    only degrades it; both are exposed for comparison).  Loss vacua,
    intracavity initials and thermal-force modes are never squeezed.
    """
    if squeezing_db < 0.0:
        raise ValueError("squeezing_db must be non-negative")
    if convention not in ("squeeze_p", "squeeze_x"):
        raise ValueError("convention must be 'squeeze_p' or 'squeeze_x'")
    if squeezing_db == 0.0:
        return basis
    f_minus = squeezing_factor(squeezing_db)          # e^{-2r}
    f_plus = 1.0 / f_minus                            # e^{+2r}
    fx, fp = (f_plus, f_minus) if convention == "squeeze_p" else (f_minus, f_plus)
    scale = np.ones(basis.n_modes)
    for lab in basis.mediator_x:
        scale[basis.index(lab)] = math.sqrt(fx)
    for lab in basis.mediator_p:
        scale[basis.index(lab)] = math.sqrt(fp)
    sigma = scale[:, None] * basis.sigma0 * scale[None, :]
    C = gram_cholesky(sigma, basis.labels)
    return replace(basis, sigma0=sigma, transform=C, squeezing_db=float(squeezing_db))
