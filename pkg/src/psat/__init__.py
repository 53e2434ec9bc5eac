"""Exact coherence and probabilistic-satisfiability toolkit.

Decide whether probability assessments on boolean events extend to a
probability state (with a Dutch book otherwise), compute tight probability
intervals, and work with exchangeable states, all in exact rationals.
"""

from .algebra import (
    AlgebraMismatch,
    EmptyAlgebra,
    Event,
    EventAlgebra,
    StateVector,
    build_algebra,
    complement,
    event_of,
    join,
    meet,
    state_value,
)
from .coherence import (
    Book,
    Consistent,
    Inconsistent,
    PayoffMatrix,
    ProbInterval,
    ambient_invariance_check,
    assess,
    fundamental_interval,
    logical_consistency,
    payoff_matrix,
)
from .exchange import (
    ExchangeableState,
    MixtureWeights,
    decompose,
    mixture_approximation,
    product_state,
    product_state_value,
    restrict,
    xi_state,
)
from .formula import (
    World,
    enumerate_worlds,
    equivalent,
    evaluate,
    miniterm_counts,
    parse,
)

__version__ = "0.1.0"
