#pragma once

// Method dispatch over FunctionSpec: influence profiles, best shifted
// L-statistic approximations and normalized indices.

#include <optional>

#include "osinf/closed_forms.hpp"
#include "osinf/function_spec.hpp"
#include "osinf/montecarlo.hpp"
#include "osinf/projection.hpp"

namespace osinf {

struct AnalysisOptions {
  Method method = Method::Auto;
  SamplingOptions sampling;
  QuadratureOptions quadrature;
};

// Exact data for classes reducible to order-statistic polynomials: Sym(f) and <f,f>.
struct ExactForm {
  OrderStatPolynomial symmetrized;
  Rational norm_sq;
};

std::optional<ExactForm> exact_form(const FunctionSpec& f);

bool supports_method(const FunctionSpec& f, Method method);
// Resolves Auto (exact, then closed-form, then monte-carlo); throws
// ConfigurationError when an explicit method does not apply.
Method resolve_method(const FunctionSpec& f, Method requested);

InfluenceProfile influence_profile(const FunctionSpec& f, const AnalysisOptions& options = {});

// Throws DegenerateVarianceError for constant f unless allow_degenerate is set,
// in which case the result carries degenerate_variance = true.
ApproximationResult best_approximation(const FunctionSpec& f, const AnalysisOptions& options = {},
                                       bool allow_degenerate = false);

// r(f,k) = I(f,k) / (sigma(f) sqrt(2(n+1)(n+2))), k in [n].
Quantity normalized_index(const FunctionSpec& f, unsigned k, const AnalysisOptions& options = {});

}  // namespace osinf
