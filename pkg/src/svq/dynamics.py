"""Copying maps, cloning feasibility, truth transitions and history erasure.

The idealized copy map duplicates an arbitrary state onto a blank register.
No single unitary can do that for two states with partial overlap: unitarity
preserves inner products, so a machine cloning both a and b would force
<a,b> to equal its own square, which only orthogonal or identical rays
satisfy. The copy map is therefore kept symbolic, acting on tensor factors;
it is never materialized as a matrix.

Randomness is always passed in as an explicit seed, so concurrent runs with
distinct seeds are reproducible and independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import resolve_tol
from .errors import BadProbability, DimensionMismatch, NotCloneShape, NotProductState
from .hilbert import StateVector, haar_state, inner, tensor
from .lattice import Subspace, TruthValue, membership


@dataclass(frozen=True, eq=False)
class ProductState:
    """A two-register state, with explicit factors when it is a pure tensor."""

    joint: StateVector
    factor_dims: tuple[int, int]
    factors: tuple[StateVector, StateVector] | None = None

    def __post_init__(self):
        d1, d2 = self.factor_dims
        if self.joint.dim != d1 * d2:
            raise DimensionMismatch(
                f"joint dim {self.joint.dim} is not the product of factor dims {d1}x{d2}"
            )
        if self.factors is not None:
            a, b = self.factors
            if (a.dim, b.dim) != (d1, d2):
                raise DimensionMismatch("factor dims do not match the declared factor_dims")
            if not tensor(a, b).same_ray(self.joint):
                raise NotProductState("declared factors do not reproduce the joint state")

    @classmethod
    def from_factors(cls, a: StateVector, b: StateVector) -> "ProductState":
        return cls(tensor(a, b), (a.dim, b.dim), (a, b))


@dataclass(frozen=True)
class FeasibilityReport:
    """Verdict on whether one unitary could clone both members of a pair."""

    feasible: bool
    witness_overlap: float
    witness_overlap_squared: float
    detail: str


@dataclass(frozen=True)
class ReconstructionOutcome:
    """A seeded Bernoulli draw standing in for an erased past truth value."""

    value: int
    p_one: float
    p_zero: float
    seed: int


def check_cloner_feasibility(a: StateVector, b: StateVector, tol: float | None = None) -> FeasibilityReport:
    """Decide whether a single unitary could copy both a and b.

    Unitarity preserves inner products, which forces the overlap of the pair
    to equal its own square. That holds only for orthogonal pairs and
    identical rays; any partial overlap is a witness of infeasibility.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"feasibility check needs equal dims, got {a.dim} and {b.dim}")
    tol = resolve_tol(tol)
    overlap = abs(inner(a, b))
    squared = overlap * overlap
    if overlap < tol:
        return FeasibilityReport(True, overlap, squared, "orthogonal pair: a basis-copy unitary exists")
    if 1.0 - overlap < tol:
        return FeasibilityReport(True, overlap, squared, "identical ray: rotating the blank onto the known state suffices")
    return FeasibilityReport(
        False,
        overlap,
        squared,
        f"unitarity would force overlap {overlap:.8f} to equal its square {squared:.8f}",
    )


def ideal_clone(state: ProductState) -> ProductState:
    """The hypothetical copy map on tensor factors: (a, b) becomes (a, a).

    Acts symbolically on the factors; the caller is responsible for labeling
    the result non-physical in any report, since no unitary implements this
    map for arbitrary inputs.
    """
    if state.factors is None:
        raise NotProductState("cloning needs explicit tensor factors")
    a, _ = state.factors
    return ProductState.from_factors(a, a)


def ideal_unclone(cloned: ProductState, blank: StateVector, tol: float | None = None) -> ProductState:
    """Reverse of the copy map: (v, v) with a chosen blank becomes (v, blank)."""
    if cloned.factors is None:
        raise NotCloneShape("uncloning needs explicit tensor factors")
    first, second = cloned.factors
    if not first.same_ray(second, tol):
        raise NotCloneShape("factors differ beyond tolerance; not the output of a clone")
    if blank.dim != second.dim:
        raise DimensionMismatch(f"blank dim {blank.dim} does not match factor dim {second.dim}")
    return ProductState.from_factors(first, blank)


def truth_transition(
    before: StateVector,
    after: StateVector,
    prop: Subspace,
    tol: float | None = None,
) -> tuple[TruthValue, TruthValue]:
    """Membership verdicts for one proposition before and after an evolution."""
    return membership(before, prop, tol), membership(after, prop, tol)


def sample_past_reconstruction(p_one: float = 0.5, seed: int = 0) -> ReconstructionOutcome:
    """Draw the random bit that replaces an erased past truth value.

    The draw is deterministic given the seed. The default of one half
    reflects indifference between the two symmetric components of the
    state the record was erased into; pass p_one to override.
    """
    p = float(p_one)
    if not 0.0 <= p <= 1.0:
        raise BadProbability(f"p_one must lie in [0, 1], got {p_one!r}")
    rng = np.random.default_rng(seed)
    value = 1 if rng.random() < p else 0
    return ReconstructionOutcome(value, p, 1.0 - p, seed)


def blackhole_evaporate(state: StateVector, seed: int) -> StateVector:
    """Toy evaporation: the input is swallowed and a uniformly random pure
    state of the same dimension is emitted, deterministically from the seed.

    The output carries no information about the input beyond its dimension,
    which is exactly what makes recorded truth values unrecoverable."""
    rng = np.random.default_rng(seed)
    return haar_state(state.dim, rng)
