"""Exact colored HOMFLY evaluation for 2-bridge links.

The engine (`eval_reduced`) walks a continued-fraction twist word over a
rank-(j+1) state module and closes off, producing the reduced one-column
colored invariant as an exact scalar in a, q (and s for two-component
links).  Classical oracles (`oracle`), a brute-force nested-sum evaluator
(`nestedsum`), and a q-recurrence guesser (`holonomy`) cross-check and
post-process the results; `cli` wires everything to the command line.
"""

from .holonomy import (
    RecurrenceOperator,
    SequenceWindow,
    ValidationReport,
    apply_operator,
    guess_recurrence,
    validate,
)
from .kernel import BACKEND
from .qcomb import abinom, qbinom, quantum_int, unknot_colored
from .scalar import LaurentPoly, QScalar
from .skein import (
    ENGINE_VERSION,
    UnclosableFamilyError,
    eval_reduced,
    row_colored,
    specialize_two_component,
)
from .twobridge import (
    ContinuedFraction,
    TwoBridgeLink,
    cf,
    enumerate_corpus,
    fraction_to_cf,
    link_from_cf,
    parse_cf,
    parse_fraction,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ContinuedFraction",
    "ENGINE_VERSION",
    "LaurentPoly",
    "QScalar",
    "RecurrenceOperator",
    "SequenceWindow",
    "TwoBridgeLink",
    "UnclosableFamilyError",
    "ValidationReport",
    "abinom",
    "apply_operator",
    "cf",
    "enumerate_corpus",
    "eval_reduced",
    "fraction_to_cf",
    "guess_recurrence",
    "link_from_cf",
    "parse_cf",
    "parse_fraction",
    "qbinom",
    "quantum_int",
    "row_colored",
    "specialize_two_component",
    "unknot_colored",
    "validate",
    "__version__",
]
