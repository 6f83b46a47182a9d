"""Three-valued quantum propositions over Hilbert subspaces.

Propositions about a quantum system are closed subspaces; a state makes a
proposition true, false, or leaves it with no truth value at all. On top of
that membership predicate the package provides the subspace lattice,
supervaluational formula evaluation, idealized cloning and evaporation
dynamics, an append-only tensed truth ledger with a past-fixity audit, and
a small scenario language with a CLI (``svq``).
"""

from .config import Config, config
from .errors import (
    BadProbability,
    DimensionMismatch,
    DimensionTooSmall,
    DuplicateIdentifier,
    EmptySpan,
    NonMonotoneAssertion,
    NormLost,
    NotCloneShape,
    NotProductState,
    PrecisificationBlowup,
    ScenarioSyntaxError,
    StepError,
    SvqError,
    UnknownAtom,
    UnknownIdentifier,
    ZeroVector,
)
from .hilbert import (
    Operator,
    StateVector,
    apply_operator,
    haar_state,
    haar_unitary,
    identity,
    inner,
    is_unitary,
    make_operator,
    make_state,
    tensor,
)
from .lattice import (
    Proposition,
    Subspace,
    TruthValue,
    full_space,
    join,
    meet,
    membership,
    orthocomplement,
    span_subspace,
    zero_subspace,
)
from .formulas import (
    And,
    Atom,
    Formula,
    Implies,
    Not,
    Or,
    evaluate_classical,
    evaluate_super,
    formula_atoms,
)
from .dynamics import (
    FeasibilityReport,
    ProductState,
    ReconstructionOutcome,
    blackhole_evaporate,
    check_cloner_feasibility,
    ideal_clone,
    ideal_unclone,
    sample_past_reconstruction,
    truth_transition,
)
from .ledger import (
    Ledger,
    TensedRecord,
    Violation,
    check_past_unalterability,
    derive_tense,
    ledger_lines,
    record_valuation,
    tense_view,
)
from .scenario import Scenario, ScenarioConfig, format_formula, format_scenario, parse_scenario
from .runner import Report, emit_report, run_scenario

__version__ = "0.1.0"
