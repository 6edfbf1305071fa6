"""Commutativity of first-order discrete-time linear time-varying systems.

Build difference-equation systems from coefficient formulas in ``k``,
simulate them, form cascades in both orders, decide and synthesize
commutative pairs, and compare how the two orderings react to noise
injected between the stages.
"""
from .coeffexpr import ClosedForm, Tabulated, evaluate, parse, pretty, tabulate
from .commute import (
    CommutativityReport, CommutativityWarning, FeedbackGains, SynthesisConstants,
    check_conditions, constants_from_gains, feedback_pair, gains_from_constants,
    required_c0, synthesize_pair, zero_order_commutes,
)
from .compose import CascadeSystem, cascade_chain, cascade_first_order, cascade_with_zero_order
from .equivalence import (
    EquivalenceReport, equivalent, simulated_equivalent, zero_input_scalar_multiple,
    zero_state_equivalent,
)
from .robustness import (
    RobustnessReport, analytic_hA_example1, analytic_hB_example1, impulse_ratio,
    inject_and_compare, modulation_index, pulse_train,
)
from .system import (
    LtvSystem, convolve, impulse_response, impulse_response_matrix, simulate,
    unit_sample, validate,
)

__version__ = "0.1.0"
