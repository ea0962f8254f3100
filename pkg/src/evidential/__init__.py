"""Evidential probability, threshold acceptance, and the rival formalisms it is measured against."""

__version__ = "0.1.0"

from .acceptance import (  # noqa: E402
    AcceptanceLevel,
    Corpus,
    CorpusReport,
    UpdateDiff,
    accepted_set,
    corpus_report,
    is_accepted,
    serious_possibility,
    update_diff,
)
from .ep import (  # noqa: E402
    Candidate,
    EvaluationTrace,
    candidates_for,
    evidential_probability,
    interval_hull,
    prune_specificity,
)
from .errors import (  # noqa: E402
    AtomBudgetExceeded,
    BoundExceeded,
    ConsistentTheory,
    EvidentialError,
    InconsistentEvidence,
    MissingItem,
    ParseError,
    ReasoningError,
    SignatureError,
    StepBoundExceeded,
)
from .evidence import (  # noqa: E402
    EvidenceBase,
    assert_evidence,
    class_applies,
    class_subsumes,
    retract_evidence,
)
from .formula import And, Atom, Formula, Implies, Not, Or  # noqa: E402
from .language import (  # noqa: E402
    Default,
    ProbabilityInterval,
    Program,
    Signature,
    StatisticalStatement,
    UniversalRule,
)
from .logic import consistent, entails, minimal_inconsistent_subsets  # noqa: E402
from .parser import parse_formula, parse_program  # noqa: E402
from .scenarios import build_scenario, check_manifest, expected_utility_comparison  # noqa: E402
