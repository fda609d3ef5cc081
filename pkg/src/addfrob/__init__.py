"""Exact algebra over F(z) for additive polynomials, Hasse derivatives and the
formula transformations built on them.

Submodules:

- ``gf``: finite fields F_{p^m} with table arithmetic
- ``poly``, ``ratfun``: F[z], F(z) and the localized ring R
- ``hasse``: Hasse derivatives
- ``additive``: additive polynomials and proper transformations
- ``independence``: Wronskian certificates and the rank oracle
- ``normalize``: the normalization pipeline
- ``bounds``: E_ord, reductions modulo the image, pole and height bounds
- ``logic``: formulas, evaluators and the transformation pipeline
- ``suites``: the property suites behind ``selftest``
"""

from .gf import FieldElem, FieldSpec, enumerate_field, field_arith, frobenius, parse_field_spec, remains_irreducible
from .poly import Poly
from .ratfun import (
    INFINITY, Localization, Place, RatFunc, divide_with_remainder, expand_base_c, height, in_ring, ord_at,
    parse_poly, parse_ratfunc, partial_fractions, q_power_decomposition, rat_arith,
)
from .hasse import check_p3, derivative_in_basis, hasse_derivative
from .additive import (
    AdditivePoly, BoundedTerm, ProperTransformation, Var, apply_proper, classify, compose_additive,
    eval_additive, fvar, parse_additive, preimage, rvar,
)
from .independence import independence_lift_check, rank_oracle, wronskian_certificate
from .normalize import (
    NormalizationResult, eliminate_dependence, equalize_degrees, normalize_full, p_basic_completion,
    strongly_normalize,
)
from .bounds import (
    ResourceLimitError, change_of_basis, e_ord, height_bound, image_decomposition, inverse_image,
    pole_order_bound, reduce_mod_image, splitting_exponents,
)

__version__ = "0.1.0"
