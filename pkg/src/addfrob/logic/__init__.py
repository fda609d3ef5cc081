"""Formulas of L_p, L_p(z) and L_p(z)^e, their semantics and transformations."""

from .ast import (
    And, Eq, Exists, Forall, Formula, Fresh, Implies, InF, Lin, Not, Or, Pred, TRUE, FALSE,
    free_vars, lin, nnf, size,
)
from .syntax import format_formula, format_sigma, parse_formula, parse_sigma, parse_term
from .semantics import eval_bounded_over_R, eval_sigma_naive, eval_sigma_over_F, r_elements
from .transform import (
    BoundedExistential, ENFDisjunct, as_bounded_existential, bounded_height_formula, eliminate_negations,
    logic1_transform, logic2_transform, model_complete_transform, prenex_formula, sentence_to_sigma,
    to_existential_normal_form, universalize_bounded,
)
