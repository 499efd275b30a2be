#pragma once

// Least-squares projection onto shifted L-statistics: the Gram matrix of
// {os_1, ..., os_n, os_{n+1} = 1}, its inverse, the dual basis g_k, and the
// exact influence index I(f,k) = <f, g_k> for order-statistic polynomials.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osinf/exact_kernel.hpp"
#include "osinf/rational.hpp"

namespace osinf {

// Dense square rational matrix, 0-based storage.
class RationalMatrix {
 public:
  explicit RationalMatrix(std::size_t order) : order_(order), data_(order * order, Rational(0)) {}

  std::size_t order() const { return order_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * order_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * order_ + j]; }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;
  bool is_identity() const;

 private:
  std::size_t order_;
  std::vector<Rational> data_;
};

// M_ij = <os_i, os_j> for i, j in [n+1], and its inverse (closed form).
struct GramSystem {
  unsigned arity;
  RationalMatrix gram;
  RationalMatrix inverse;

  // 1-based accessors matching the basis index.
  const Rational& m(unsigned i, unsigned j) const { return gram(i - 1, j - 1); }
  const Rational& m_inv(unsigned i, unsigned j) const { return inverse(i - 1, j - 1); }
};

GramSystem gram_system(unsigned n);

// g_k = -(n+1)(n+2)(os_{k+1} - 2 os_k + os_{k-1}).
OrderStatPolynomial g_basis(unsigned n, unsigned k);
double g_basis_value(std::span<const double> sorted, unsigned k);

// h_k = (n+1)(n+2)(os_{k+1} - os_k)(os_k - os_{k-1}); a probability density.
OrderStatPolynomial h_density(unsigned n, unsigned k);
double h_density_value(std::span<const double> sorted, unsigned k);

// I(f,k) = <f, g_k>, exact.
Rational influence_exact(const OrderStatPolynomial& f, unsigned k);

// b_i = <f, os_i> for i = 1..n+1.
std::vector<Rational> order_stat_moments(const OrderStatPolynomial& f);

// a = M^{-1} b.
std::vector<Rational> solve_coefficients(const GramSystem& system, std::span<const Rational> b);

// a_{n+1} = (n+1)^2 <f,1> - (n+1)(n+2) <f, os_n>.
Rational formal_tail(unsigned n, const Rational& mean, const Rational& moment_n);

// sigma^2(f_L) = a^T (M - c c^T) a, c the last column of M.
Rational approximation_variance(const GramSystem& system, std::span<const Rational> a);
double approximation_variance(const GramSystem& system, std::span<const double> a);

// The shifted L-statistic sum_j a_j os_j (os_{n+1} = 1).
OrderStatPolynomial shifted_l_statistic(unsigned n, std::span<const Rational> a);

enum class Method { Auto, Exact, ClosedForm, MonteCarlo };

std::string method_name(Method m);
std::optional<Method> parse_method(std::string_view text);

// A scalar result: decimal value, exact rational when the path is exact, and a
// standard error when it was estimated by sampling.
struct Quantity {
  double value = 0.0;
  std::optional<Rational> exact;
  std::optional<double> std_error;

  static Quantity from_exact(const Rational& q) { return Quantity{q.get_d(), q, std::nullopt}; }
  static Quantity from_double(double v, std::optional<double> se = std::nullopt) { return Quantity{v, std::nullopt, se}; }
};

struct SamplingProvenance {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// I(f,1..n), the formal a_{n+1}, and <f,1>.
struct InfluenceProfile {
  unsigned arity = 0;
  std::vector<Quantity> indices;
  Quantity formal_tail;
  Quantity mean;
  Method method = Method::Exact;
  std::optional<SamplingProvenance> sampling;
};

struct ApproximationResult {
  unsigned arity = 0;
  Method method = Method::Exact;
  std::vector<Quantity> coefficients;  // a_1..a_{n+1}
  Quantity mean;                       // recentered constant <f,1>
  std::vector<Quantity> slopes;        // I(f,1..n)
  Quantity norm_sq;                    // <f,f>
  Quantity r_squared;
  Quantity residual_norm_sq;
  std::vector<Quantity> normalized;  // r(f,1..n)
  std::optional<SamplingProvenance> sampling;
  // Set when sigma^2(f) = 0; r_squared and normalized are then left empty/NaN.
  bool degenerate_variance = false;

  // sum_j a_j x_(j) + a_{n+1}
  double evaluate_basis_form(std::span<const double> x) const;
  // <f,1> + sum_k I(f,k) (x_(k) - k/(n+1))
  double evaluate_recentered_form(std::span<const double> x) const;
};

}  // namespace osinf
