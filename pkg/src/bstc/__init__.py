"""Boolean set theory with a choice symbol: satisfiability and choice lifting."""

from .choice import (
    Axiom, AxiomCheck, ChoiceError, EulerDiagram, PartialChoice, Rationalization, ResourceLimit,
    check_axiom, envelope, euler_diagram, is_rationalizable, is_subset_closed, rejection,
    relativized_domain, warp_equals_alpha_and_beta,
)
from .decider import (
    FiniteModel, Reduction, Semantics, Status, Verdict, build_model, decide, decide_bstc_minus,
    decide_warp, extend_choice, reduce_alpha, reduce_beta, reduce_unrestricted, verify_model,
)
from .lifting import (
    ClosedFamily, LayeredPreorder, LiftReport, LiftingError, MenuPair, NoPreorder, alpha_lift,
    alpha_liftable, beta_lift, beta_liftable, lift, warp_lift, warp_liftable,
)
from .normalizer import Skeleton, complete, flatten, normalize, promising_sets, skeleton
from .parser import ParseError, parse_formula, parse_term
from .places import AmpleCandidate, Place, enumerate_filtered_places, evaluate_place, is_ample
from .syntax import build_index, formula_to_text, is_choice_free, term_to_text

__version__ = "0.1.0"
