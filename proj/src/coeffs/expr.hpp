#ifndef CORNERFEM_COEFFS_EXPR_HPP
#define CORNERFEM_COEFFS_EXPR_HPP

#include <memory>
#include <string>

#include "coeffs/field.hpp"

namespace cornerfem {

/// Parses an expression over x, y, r, theta with operators + - * / ^, the
/// functions sin, cos, exp, log, and the constants pi and i, into a field on
/// `domain`. Within the expression, r is the domain weight r_Omega and theta
/// is the chart angle at the nearest vertex.
///
/// Throws ValidationError on syntax errors.
FieldPtr parse_expression(const std::string& text, std::shared_ptr<const Domain> domain,
                          int singular_exponent = 0);

}  // namespace cornerfem

#endif
