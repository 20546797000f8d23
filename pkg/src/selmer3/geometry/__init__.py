"""Plane-cubic geometry for the descent: flex data, line algebras, Jacobian."""

from .flex import (FlexData, PlaneCubic, flex_data, form_coeffs,
                   form_from_coeffs, hessian, pencil_quartic, form_eval,
                   form_add, form_mul, form_scal, form_deriv, form_substitute,
                   form_q_to_ring, MONOMIALS3)
from .lines import LineData, line_data, del2_element, del2_linear_form
from .jacobian import jacobian_c4c6, division_poly3
from .badprimes import BadPrimeSet, bad_primes
