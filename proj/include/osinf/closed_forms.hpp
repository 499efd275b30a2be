#pragma once

// Closed-form influence indices: multiplicative functions prod_i phi_i(x_i),
// the symmetric (beta-density) form, the power product (prod x_i)^c, the sample
// variance, and the subset-box integral formulas that avoid order statistics.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osinf/exact_kernel.hpp"
#include "osinf/rational.hpp"

namespace osinf {

class FunctionSpec;

struct QuadratureOptions {
  double abs_tolerance = 1e-10;
  std::size_t max_intervals = 4000;
  // Gauss-Legendre nodes per axis for black-box box integrals (n <= 4).
  unsigned tensor_nodes = 12;
};

// Globally adaptive Gauss-Kronrod (15 points) on [a, b]; throws NumericalError when the error
// estimate stays above the tolerance.
double integrate_adaptive(const std::function<double(double)>& g, double a, double b, const QuadratureOptions& options);

// Univariate polynomial with rational coefficients, ascending powers.
using UnivariatePolynomial = std::vector<Rational>;

// phi on [0,1] with its antiderivative Phi(x) = int_0^x phi.
class UnaryFactor {
 public:
  enum class Kind { Power, Polynomial, Callable };

  // scale * x^exponent, exponent > -1/2.
  static UnaryFactor power(double scale, double exponent);
  static UnaryFactor polynomial(UnivariatePolynomial coefficients);
  // Phi is obtained by adaptive quadrature. `total_is_zero` declares Phi(1) = 0 symbolically.
  static UnaryFactor callable(std::function<double(double)> phi, std::string label,
                              std::function<double(double)> derivative = {}, bool total_is_zero = false);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  double scale() const { return scale_; }
  double exponent() const { return exponent_; }
  const UnivariatePolynomial& coefficients() const { return coefficients_; }

  double value(double x) const;
  std::optional<double> derivative(double x) const;
  double antiderivative(double x, const QuadratureOptions& options = {}) const;
  double total(const QuadratureOptions& options = {}) const { return antiderivative(1.0, options); }
  // Exact Phi(1) when the factor is symbolic.
  std::optional<Rational> exact_total() const;
  // True only when Phi(1) = 0 is known symbolically.
  bool total_is_symbolic_zero() const;
  // int_0^1 phi^2.
  double square_integral(const QuadratureOptions& options = {}) const;
  // Antiderivative as an exact polynomial (Polynomial kind only).
  UnivariatePolynomial antiderivative_polynomial() const;

 private:
  Kind kind_ = Kind::Power;
  std::string label_;
  double scale_ = 1.0;
  double exponent_ = 0.0;
  UnivariatePolynomial coefficients_;
  std::function<double(double)> phi_;
  std::function<double(double)> phi_derivative_;
  bool declared_zero_total_ = false;
};

struct MultiplicativeSpec {
  unsigned arity = 0;
  std::vector<UnaryFactor> factors;  // one per coordinate
  bool symmetric = false;            // all factors identical

  static MultiplicativeSpec symmetric_of(const UnaryFactor& phi, unsigned n);
  double evaluate(std::span<const double> x) const;
  // True when every factor is a polynomial, so the function is a plain polynomial.
  bool is_polynomial() const;
  PlainPolynomial to_plain_polynomial() const;
};

inline constexpr unsigned kMaxSubsetEnumerationArity = 20;

double influence_multiplicative(const MultiplicativeSpec& spec, unsigned k, const QuadratureOptions& options = {});
double influence_symmetric_multiplicative(const UnaryFactor& phi, unsigned n, unsigned k,
                                          const QuadratureOptions& options = {});

struct PowerProductInfluence {
  double value;           // I(f,k)
  double first;           // I(f,1)
  double ratio_to_first;  // I(f,k) / I(f,1), from the ratio form
};

PowerProductInfluence influence_power_product(double c, unsigned n, unsigned k);

// Beta density h(z; a, b).
double beta_density(double z, double a, double b);

struct VarianceProfile {
  unsigned arity;
  std::vector<Rational> indices;  // I(sigma^2, k)
  Rational intercept;             // constant of the best shifted L-statistic
  bool gini_identity_holds;       // coefficient match with the Gini mean difference form
};

VarianceProfile variance_profile(unsigned n);
// (1/n) sum x_i^2 - ((1/n) sum x_i)^2.
PlainPolynomial variance_polynomial(unsigned n);

enum class BoxForm { Lower, Upper, Split };

// int_0^1 int over the box [0,y]^S x [0,1]^rest (Lower), [y,1]^S x [0,1]^rest
// (Upper) or [0,y]^S x [y,1]^rest (Split) of f, dx dy.
double subset_box_integral(const FunctionSpec& f, std::uint64_t subset, BoxForm form,
                           const QuadratureOptions& options = {});

enum class AlternativeFormula { LowerBoxSum, UpperBoxSum, SplitBoxDifference };

double influence_via_alternative(const FunctionSpec& f, unsigned k, AlternativeFormula formula,
                                 const QuadratureOptions& options = {});

}  // namespace osinf
