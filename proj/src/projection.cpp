#include "osinf/projection.hpp"

#include "osinf/errors.hpp"

namespace osinf {

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.order_ != b.order_) throw DomainError("matrix order mismatch");
  RationalMatrix out(a.order_);
  for (std::size_t i = 0; i < a.order_; ++i)
    for (std::size_t k = 0; k < a.order_; ++k) {
      const Rational& lhs = a(i, k);
      if (lhs == 0) continue;
      for (std::size_t j = 0; j < a.order_; ++j) out(i, j) += lhs * b(k, j);
    }
  return out;
}

bool RationalMatrix::is_identity() const {
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = 0; j < order_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

GramSystem gram_system(unsigned n) {
  if (n < 1) throw DomainError("gram_system requires n >= 1");
  const unsigned order = n + 1;
  GramSystem sys{n, RationalMatrix(order), RationalMatrix(order)};
  const Integer scale = Integer(n + 1) * Integer(n + 2);
  for (unsigned i = 1; i <= order; ++i)
    for (unsigned j = 1; j <= order; ++j) {
      const unsigned lo = std::min(i, j);
      const unsigned hi = std::max(i, j);
      Rational v(Integer(lo) * Integer(hi + 1), scale);
      v.canonicalize();
      sys.gram(i - 1, j - 1) = v;
    }
  // Tridiagonal inverse: (n+1)(n+2) * {2 on the diagonal, (n+1)/(n+2) in the
  // corner, -1 next to the diagonal}.
  for (unsigned i = 1; i <= order; ++i) {
    sys.inverse(i - 1, i - 1) = (i < order) ? Rational(2 * scale) : Rational(scale * (n + 1), Integer(n + 2));
    sys.inverse(i - 1, i - 1).canonicalize();
    if (i < order) {
      sys.inverse(i - 1, i) = -Rational(scale);
      sys.inverse(i, i - 1) = -Rational(scale);
    }
  }
  return sys;
}

OrderStatPolynomial g_basis(unsigned n, unsigned k) {
  if (k < 1 || k > n) throw DomainError("g_basis rank " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  OrderStatPolynomial second_diff = OrderStatPolynomial::order_statistic(n, k + 1);
  second_diff -= OrderStatPolynomial::order_statistic(n, k) * Rational(2);
  second_diff += OrderStatPolynomial::order_statistic(n, k - 1);
  return second_diff * Rational(-static_cast<long>((n + 1) * (n + 2)));
}

namespace {

// os_k on an ascending point with the 0 / 1 boundary convention.
double slot(std::span<const double> sorted, unsigned k) {
  if (k == 0) return 0.0;
  if (k > sorted.size()) return 1.0;
  return sorted[k - 1];
}

}  // namespace

double g_basis_value(std::span<const double> sorted, unsigned k) {
  const double n = static_cast<double>(sorted.size());
  return -(n + 1) * (n + 2) * (slot(sorted, k + 1) - 2 * slot(sorted, k) + slot(sorted, k - 1));
}

OrderStatPolynomial h_density(unsigned n, unsigned k) {
  if (k < 1 || k > n) throw DomainError("h_density rank " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  const auto upper = OrderStatPolynomial::order_statistic(n, k + 1) - OrderStatPolynomial::order_statistic(n, k);
  const auto lower = OrderStatPolynomial::order_statistic(n, k) - OrderStatPolynomial::order_statistic(n, k - 1);
  return (upper * lower) * Rational(static_cast<long>((n + 1) * (n + 2)));
}

double h_density_value(std::span<const double> sorted, unsigned k) {
  const double n = static_cast<double>(sorted.size());
  return (n + 1) * (n + 2) * (slot(sorted, k + 1) - slot(sorted, k)) * (slot(sorted, k) - slot(sorted, k - 1));
}

Rational influence_exact(const OrderStatPolynomial& f, unsigned k) {
  if (k < 1 || k > f.arity())
    throw DomainError("influence rank " + std::to_string(k) + " outside [1, " + std::to_string(f.arity()) + "]");
  return inner_product_exact(f, g_basis(f.arity(), k));
}

std::vector<Rational> order_stat_moments(const OrderStatPolynomial& f) {
  const unsigned n = f.arity();
  std::vector<Rational> b;
  b.reserve(n + 1);
  for (unsigned i = 1; i <= n + 1; ++i) b.push_back(inner_product_exact(f, OrderStatPolynomial::order_statistic(n, i)));
  return b;
}

std::vector<Rational> solve_coefficients(const GramSystem& system, std::span<const Rational> b) {
  const std::size_t order = system.inverse.order();
  if (b.size() != order) throw DomainError("moment vector length does not match the Gram system");
  std::vector<Rational> a(order, Rational(0));
  for (std::size_t i = 0; i < order; ++i) {
    for (std::size_t j = 0; j < order; ++j) a[i] += system.inverse(i, j) * b[j];
    a[i].canonicalize();
  }
  return a;
}

Rational formal_tail(unsigned n, const Rational& mean, const Rational& moment_n) {
  Rational tail = Rational(Integer(n + 1) * Integer(n + 1)) * mean - Rational(Integer(n + 1) * Integer(n + 2)) * moment_n;
  tail.canonicalize();
  return tail;
}

Rational approximation_variance(const GramSystem& system, std::span<const Rational> a) {
  const std::size_t order = system.gram.order();
  if (a.size() != order) throw DomainError("coefficient vector length does not match the Gram system");
  Rational quad = 0;
  Rational mean = 0;
  for (std::size_t i = 0; i < order; ++i) {
    mean += system.gram(i, order - 1) * a[i];
    for (std::size_t j = 0; j < order; ++j) quad += a[i] * system.gram(i, j) * a[j];
  }
  Rational var = quad - mean * mean;
  var.canonicalize();
  return var;
}

double approximation_variance(const GramSystem& system, std::span<const double> a) {
  const std::size_t order = system.gram.order();
  if (a.size() != order) throw DomainError("coefficient vector length does not match the Gram system");
  double quad = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < order; ++i) {
    mean += system.gram(i, order - 1).get_d() * a[i];
    for (std::size_t j = 0; j < order; ++j) quad += a[i] * system.gram(i, j).get_d() * a[j];
  }
  return quad - mean * mean;
}

OrderStatPolynomial shifted_l_statistic(unsigned n, std::span<const Rational> a) {
  if (a.size() != n + 1) throw DomainError("shifted L-statistic needs n+1 coefficients");
  OrderStatPolynomial p(n, a[n]);
  for (unsigned k = 1; k <= n; ++k) p.add_term({{k, 1}}, a[k - 1]);
  return p;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Exact: return "exact";
    case Method::ClosedForm: return "closed-form";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view text) {
  if (text == "auto") return Method::Auto;
  if (text == "exact") return Method::Exact;
  if (text == "closed-form") return Method::ClosedForm;
  if (text == "mc" || text == "monte-carlo") return Method::MonteCarlo;
  return std::nullopt;
}

double ApproximationResult::evaluate_basis_form(std::span<const double> x) const {
  const auto sorted = sorted_copy(x);
  double v = coefficients.back().value;
  for (unsigned k = 1; k <= arity; ++k) v += coefficients[k - 1].value * sorted[k - 1];
  return v;
}

double ApproximationResult::evaluate_recentered_form(std::span<const double> x) const {
  const auto sorted = sorted_copy(x);
  double v = mean.value;
  for (unsigned k = 1; k <= arity; ++k)
    v += slopes[k - 1].value * (sorted[k - 1] - static_cast<double>(k) / static_cast<double>(arity + 1));
  return v;
}

}  // namespace osinf
