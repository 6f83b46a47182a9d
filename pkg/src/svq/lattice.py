"""Closed subspaces as propositions and the three-valued membership predicate.

A proposition about the system is identified with a closed linear subspace,
represented here by its orthogonal projector. A state either lies in the
subspace (the proposition is true), is orthogonal to it (false), or merely
overlaps it, in which case the proposition carries no truth value at all.
That third outcome is the truth-value gap that the rest of the package is
built around.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import resolve_tol
from .errors import DimensionMismatch, EmptySpan
from .hilbert import StateVector


class TruthValue(Enum):
    """Three-valued truth: determinate 1, determinate 0, or the gap 0/0."""

    TRUE = "1"
    FALSE = "0"
    GAP = "0/0"

    def __str__(self) -> str:
        return self.value

    @property
    def is_determinate(self) -> bool:
        return self is not TruthValue.GAP

    @classmethod
    def from_bool(cls, b: bool) -> "TruthValue":
        return cls.TRUE if b else cls.FALSE

    def to_bool(self) -> bool:
        if self is TruthValue.GAP:
            raise ValueError("a gap has no Boolean value")
        return self is TruthValue.TRUE


@dataclass(frozen=True, eq=False)
class Subspace:
    """A closed linear subspace, stored as its orthogonal projector.

    Construction validates the projector invariants: Hermitian, idempotent,
    and integer trace (the rank). Instances are immutable.
    """

    projector: np.ndarray
    rank: int = field(init=False)

    def __post_init__(self):
        arr = np.array(self.projector, dtype=np.complex128)
        arr.setflags(write=False)
        tol = resolve_tol(None)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"projector must be square, got shape {arr.shape}")
        if np.max(np.abs(arr - arr.conj().T), initial=0.0) > tol:
            raise ValueError("projector is not Hermitian within tolerance")
        if np.max(np.abs(arr @ arr - arr), initial=0.0) > tol:
            raise ValueError("projector is not idempotent within tolerance")
        trace = float(np.trace(arr).real)
        rank = round(trace)
        if abs(trace - rank) > tol:
            raise ValueError(f"projector trace {trace!r} is not close to an integer")
        object.__setattr__(self, "projector", arr)
        object.__setattr__(self, "rank", rank)

    @property
    def dim(self) -> int:
        return self.projector.shape[0]

    def contains(self, other: "Subspace", tol: float | None = None) -> bool:
        """Projector-order test: other is a subspace of self."""
        if self.dim != other.dim:
            raise DimensionMismatch("subspace order needs equal dims")
        residual = self.projector @ other.projector - other.projector
        return float(np.max(np.abs(residual), initial=0.0)) <= resolve_tol(tol)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, rank={self.rank})"


@dataclass(frozen=True, eq=False)
class Proposition:
    """A named experimental proposition backed by a subspace."""

    id: str
    label: str
    subspace: Subspace


def zero_subspace(dim: int) -> Subspace:
    """The trivial subspace {0}; false of every state."""
    return Subspace(np.zeros((dim, dim), dtype=np.complex128))


def full_space(dim: int) -> Subspace:
    """The whole space; true of every state."""
    return Subspace(np.eye(dim, dtype=np.complex128))


def span_subspace(vectors, dim: int, tol: float | None = None) -> Subspace:
    """Projector onto the closed span of the given vectors.

    The spanning set is orthonormalized through an SVD, so any two spanning
    sets of the same space produce the same projector up to numerical noise.
    Directions whose relative singular weight falls below tol are treated as
    noise rather than as extra dimensions.
    """
    tol = resolve_tol(tol)
    cols = []
    for v in vectors:
        arr = np.asarray(v, dtype=np.complex128).reshape(-1)
        if arr.shape[0] != dim:
            raise DimensionMismatch(f"spanning vector has length {arr.shape[0]}, expected {dim}")
        cols.append(arr)
    if not cols:
        raise EmptySpan("no spanning vectors given")
    basis_matrix = np.column_stack(cols)
    if float(np.max(np.abs(basis_matrix))) <= tol:
        raise EmptySpan("every spanning vector is numerically zero")
    u, s, _ = np.linalg.svd(basis_matrix)
    rank = int(np.sum(s > tol * s[0]))
    q = u[:, :rank]
    return Subspace(q @ q.conj().T)


def membership(state: StateVector, prop: Subspace, tol: float | None = None) -> TruthValue:
    """Three-valued membership of a state in a subspace.

    Let p be the projection of the state onto the subspace, r the norm of
    the rejected part and s the norm of p. The state is a member (TRUE)
    when r < tol, a non-member (FALSE) when s < tol, and otherwise only a
    component of a member, which leaves the proposition without a truth
    value (GAP). The verdict is invariant under global phase and, because
    states are normalized, under rescaling.
    """
    if state.dim != prop.dim:
        raise DimensionMismatch(f"state dim {state.dim} does not match subspace dim {prop.dim}")
    tol = resolve_tol(tol)
    projected = prop.projector @ state.amplitudes
    r = float(np.linalg.norm(projected - state.amplitudes))
    s = float(np.linalg.norm(projected))
    if r < tol:
        return TruthValue.TRUE
    if s < tol:
        return TruthValue.FALSE
    return TruthValue.GAP


def orthocomplement(prop: Subspace) -> Subspace:
    """The orthogonal complement, I minus the projector."""
    return Subspace(np.eye(prop.dim, dtype=np.complex128) - prop.projector)


def meet(a: Subspace, b: Subspace, tol: float | None = None) -> Subspace:
    """Projector onto the intersection of two subspaces.

    Computed from the kernel of (I - Pa) + (I - Pb): that sum is Hermitian
    positive semidefinite and annihilates exactly the vectors lying in both
    subspaces, so its near-zero eigenvectors are an orthonormal basis of
    the intersection. Exact at small dimensions, no iteration involved.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"meet needs equal dims, got {a.dim} and {b.dim}")
    tol = resolve_tol(tol)
    eye = np.eye(a.dim, dtype=np.complex128)
    gram = (eye - a.projector) + (eye - b.projector)
    eigenvalues, eigenvectors = np.linalg.eigh(gram)
    kernel = eigenvectors[:, eigenvalues < tol]
    if kernel.shape[1] == 0:
        return zero_subspace(a.dim)
    return Subspace(kernel @ kernel.conj().T)


def join(a: Subspace, b: Subspace, tol: float | None = None) -> Subspace:
    """Projector onto the closed span of the union of two subspaces."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"join needs equal dims, got {a.dim} and {b.dim}")
    tol = resolve_tol(tol)
    stacked = np.hstack([a.projector, b.projector])
    u, s, _ = np.linalg.svd(stacked)
    if s.size == 0 or s[0] <= tol:
        return zero_subspace(a.dim)
    rank = int(np.sum(s > tol * s[0]))
    q = u[:, :rank]
    return Subspace(q @ q.conj().T)
