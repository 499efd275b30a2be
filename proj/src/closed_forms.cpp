#include "osinf/closed_forms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <queue>
#include <limits>
#include <map>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "osinf/errors.hpp"
#include "osinf/function_spec.hpp"
#include "osinf/montecarlo.hpp"

namespace osinf {

double integrate_adaptive(const std::function<double(double)>& g, double a, double b, const QuadratureOptions& options) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Panel {
    double lo, hi, value, error, l1;
    bool operator<(const Panel& other) const { return error < other.error; }
  };
  const auto panel = [&](double lo, double hi) {
    Panel p{lo, hi, 0.0, 0.0, 0.0};
    p.value = Rule::integrate(g, lo, hi, 0, 0.0, &p.error, &p.l1);
    return p;
  };
  // Global bisection of the panel with the largest error estimate.
  std::priority_queue<Panel> panels;
  panels.push(panel(a, b));
  double value = panels.top().value;
  double error = panels.top().error;
  double l1 = panels.top().l1;
  const auto accepted = [&] {
    return std::max(options.abs_tolerance, 64 * std::numeric_limits<double>::epsilon() * l1);
  };
  std::size_t count = 1;
  while (error > accepted() && count < options.max_intervals) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;
    const Panel left = panel(worst.lo, mid), right = panel(mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // re-sum to shed the drift of the running updates
  value = error = l1 = 0.0;
  for (; !panels.empty(); panels.pop()) {
    value += panels.top().value;
    error += panels.top().error;
    l1 += panels.top().l1;
  }
  if (!std::isfinite(value) || !(error <= accepted())) {
    char message[160];
    std::snprintf(message, sizeof message, "adaptive quadrature did not converge (error estimate %.3g, tolerance %.3g)",
                  error, accepted());
    throw NumericalError(message, error);
  }
  return value;
}

namespace {

double eval_poly(const UnivariatePolynomial& p, double x) {
  double v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + it->get_d();
  return v;
}

Rational eval_poly_exact(const UnivariatePolynomial& p, const Rational& x) {
  Rational v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
  v.canonicalize();
  return v;
}

UnivariatePolynomial poly_mul(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
  if (a.empty() || b.empty()) return {};
  UnivariatePolynomial out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

UnivariatePolynomial poly_integral_fn(const UnivariatePolynomial& p) {
  UnivariatePolynomial out(p.size() + 1, Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i + 1] = p[i] / Rational(static_cast<long>(i + 1));
    out[i + 1].canonicalize();
  }
  return out;
}

Rational poly_integral_unit(const UnivariatePolynomial& p) {
  Rational total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) total += p[i] / Rational(static_cast<long>(i + 1));
  total.canonicalize();
  return total;
}

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

// Polynomial form of a factor when it has one (polynomials, and powers with a
// nonnegative integer exponent).
std::optional<UnivariatePolynomial> as_polynomial(const UnaryFactor& phi) {
  if (phi.kind() == UnaryFactor::Kind::Polynomial) return phi.coefficients();
  if (phi.kind() == UnaryFactor::Kind::Power && is_integral(phi.exponent()) && phi.exponent() >= 0 &&
      phi.exponent() <= 64) {
    UnivariatePolynomial p(static_cast<std::size_t>(phi.exponent()) + 1, Rational(0));
    p.back() = rational_from_double(phi.scale());
    return p;
  }
  return std::nullopt;
}

void check_rank(unsigned n, unsigned k) {
  if (k < 1 || k > n) throw DomainError("rank " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
}

}  // namespace

UnaryFactor UnaryFactor::power(double scale, double exponent) {
  if (!(exponent > -0.5)) throw DomainError("power factor needs exponent > -1/2 for square integrability");
  UnaryFactor f;
  f.kind_ = Kind::Power;
  f.scale_ = scale;
  f.exponent_ = exponent;
  f.label_ = (scale == 1.0 ? std::string() : std::to_string(scale) + "*") + "x^" + std::to_string(exponent);
  return f;
}

UnaryFactor UnaryFactor::polynomial(UnivariatePolynomial coefficients) {
  UnaryFactor f;
  f.kind_ = Kind::Polynomial;
  for (auto& c : coefficients) c.canonicalize();
  while (!coefficients.empty() && coefficients.back() == 0) coefficients.pop_back();
  f.coefficients_ = std::move(coefficients);
  f.label_ = "polynomial";
  return f;
}

UnaryFactor UnaryFactor::callable(std::function<double(double)> phi, std::string label,
                                  std::function<double(double)> derivative, bool total_is_zero) {
  if (!phi) throw ConfigurationError("callable factor needs an evaluator");
  UnaryFactor f;
  f.kind_ = Kind::Callable;
  f.phi_ = std::move(phi);
  f.phi_derivative_ = std::move(derivative);
  f.label_ = std::move(label);
  f.declared_zero_total_ = total_is_zero;
  return f;
}

double UnaryFactor::value(double x) const {
  switch (kind_) {
    case Kind::Power: return exponent_ == 0.0 ? scale_ : scale_ * std::pow(x, exponent_);
    case Kind::Polynomial: return eval_poly(coefficients_, x);
    case Kind::Callable: return phi_(x);
  }
  return 0.0;
}

std::optional<double> UnaryFactor::derivative(double x) const {
  switch (kind_) {
    case Kind::Power: return exponent_ == 0.0 ? 0.0 : scale_ * exponent_ * std::pow(x, exponent_ - 1.0);
    case Kind::Polynomial: {
      double v = 0.0;
      for (std::size_t i = coefficients_.size(); i-- > 1;) v = v * x + coefficients_[i].get_d() * static_cast<double>(i);
      return v;
    }
    case Kind::Callable:
      if (phi_derivative_) return phi_derivative_(x);
      return std::nullopt;
  }
  return std::nullopt;
}

double UnaryFactor::antiderivative(double x, const QuadratureOptions& options) const {
  switch (kind_) {
    case Kind::Power: return scale_ * std::pow(x, exponent_ + 1.0) / (exponent_ + 1.0);
    case Kind::Polynomial: return eval_poly(poly_integral_fn(coefficients_), x);
    case Kind::Callable: return x <= 0.0 ? 0.0 : integrate_adaptive(phi_, 0.0, x, options);
  }
  return 0.0;
}

std::optional<Rational> UnaryFactor::exact_total() const {
  switch (kind_) {
    case Kind::Power: {
      Rational q = rational_from_double(scale_) / rational_from_double(exponent_ + 1.0);
      q.canonicalize();
      return q;
    }
    case Kind::Polynomial: return poly_integral_unit(coefficients_);
    case Kind::Callable:
      if (declared_zero_total_) return Rational(0);
      return std::nullopt;
  }
  return std::nullopt;
}

bool UnaryFactor::total_is_symbolic_zero() const {
  const auto t = exact_total();
  return t && *t == 0;
}

double UnaryFactor::square_integral(const QuadratureOptions& options) const {
  switch (kind_) {
    case Kind::Power: return scale_ * scale_ / (2.0 * exponent_ + 1.0);
    case Kind::Polynomial: return poly_integral_unit(poly_mul(coefficients_, coefficients_)).get_d();
    case Kind::Callable:
      return integrate_adaptive([this](double t) { const double v = phi_(t); return v * v; }, 0.0, 1.0, options);
  }
  return 0.0;
}

UnivariatePolynomial UnaryFactor::antiderivative_polynomial() const {
  const auto p = as_polynomial(*this);
  if (!p) throw ConfigurationError("factor has no polynomial antiderivative");
  return poly_integral_fn(*p);
}

MultiplicativeSpec MultiplicativeSpec::symmetric_of(const UnaryFactor& phi, unsigned n) {
  if (n < 1) throw DomainError("arity must be positive");
  return MultiplicativeSpec{n, std::vector<UnaryFactor>(n, phi), true};
}

double MultiplicativeSpec::evaluate(std::span<const double> x) const {
  if (x.size() != arity) throw DomainError("point dimension does not match arity");
  double v = 1.0;
  for (unsigned i = 0; i < arity; ++i) v *= factors[i].value(x[i]);
  return v;
}

bool MultiplicativeSpec::is_polynomial() const {
  return std::all_of(factors.begin(), factors.end(), [](const UnaryFactor& f) { return as_polynomial(f).has_value(); });
}

PlainPolynomial MultiplicativeSpec::to_plain_polynomial() const {
  PlainPolynomial result(arity);
  result.add_term(std::vector<unsigned>(arity, 0), 1);
  for (unsigned i = 0; i < arity; ++i) {
    const auto p = as_polynomial(factors[i]);
    if (!p) throw ConfigurationError("factor " + std::to_string(i + 1) + " is not a polynomial");
    PlainPolynomial factor(arity);
    for (std::size_t d = 0; d < p->size(); ++d) {
      std::vector<unsigned> e(arity, 0);
      e[i] = static_cast<unsigned>(d);
      factor.add_term(std::move(e), (*p)[d]);
    }
    result = result * factor;
  }
  return result;
}

namespace {

void check_multiplicative(const MultiplicativeSpec& spec) {
  if (spec.arity < 1 || spec.factors.size() != spec.arity)
    throw DomainError("multiplicative spec needs exactly one factor per coordinate");
  if (spec.arity > kMaxSubsetEnumerationArity)
    throw DomainError("subset enumeration limited to n <= " + std::to_string(kMaxSubsetEnumerationArity));
}

// Box integrals of prod_i phi_i(x_i): each reduces to a 1-D integral in y of
// prod_{i in S} Phi_i(y) (or Phi_i(1) - Phi_i(y)) times the remaining factors.
class MultiplicativeBoxes {
 public:
  MultiplicativeBoxes(const MultiplicativeSpec& spec, const QuadratureOptions& options)
      : spec_(spec), options_(options) {
    check_multiplicative(spec);
    exact_ = spec.is_polynomial();
    for (const auto& f : spec.factors) {
      if (exact_) {
        const auto anti = f.antiderivative_polynomial();
        const Rational total = eval_poly_exact(anti, Rational(1));
        UnivariatePolynomial upper(anti.size(), Rational(0));
        for (std::size_t i = 0; i < anti.size(); ++i) upper[i] = -anti[i];
        upper[0] += total;
        lower_poly_.push_back(anti);
        upper_poly_.push_back(std::move(upper));
        totals_exact_.push_back(total);
        totals_.push_back(total.get_d());
      } else {
        totals_.push_back(f.total(options));
      }
    }
  }

  double integral(std::uint64_t subset, BoxForm form) const {
    const unsigned n = spec_.arity;
    if (exact_) {
      UnivariatePolynomial integrand{Rational(1)};
      Rational outside = 1;
      for (unsigned i = 0; i < n; ++i) {
        const bool in = subset & (std::uint64_t{1} << i);
        switch (form) {
          case BoxForm::Lower:
            if (in) integrand = poly_mul(integrand, lower_poly_[i]); else outside *= totals_exact_[i];
            break;
          case BoxForm::Upper:
            if (in) integrand = poly_mul(integrand, upper_poly_[i]); else outside *= totals_exact_[i];
            break;
          case BoxForm::Split:
            integrand = poly_mul(integrand, in ? lower_poly_[i] : upper_poly_[i]);
            break;
        }
      }
      return Rational(outside * poly_integral_unit(integrand)).get_d();
    }
    // All-power lower boxes have a closed form.
    if (form == BoxForm::Lower && std::all_of(spec_.factors.begin(), spec_.factors.end(),
                                              [](const UnaryFactor& f) { return f.kind() == UnaryFactor::Kind::Power; })) {
      double outside = 1.0;
      double scale = 1.0;
      double degree = 0.0;
      for (unsigned i = 0; i < n; ++i) {
        const auto& f = spec_.factors[i];
        if (subset & (std::uint64_t{1} << i)) {
          scale *= f.scale() / (f.exponent() + 1.0);
          degree += f.exponent() + 1.0;
        } else {
          outside *= totals_[i];
        }
      }
      return outside * scale / (degree + 1.0);
    }
    double outside = 1.0;
    if (form != BoxForm::Split)
      for (unsigned i = 0; i < n; ++i)
        if (!(subset & (std::uint64_t{1} << i))) outside *= totals_[i];
    if (outside == 0.0) return 0.0;
    const auto integrand = [&](double y) {
      double v = 1.0;
      for (unsigned i = 0; i < n; ++i) {
        const bool in = subset & (std::uint64_t{1} << i);
        if (!in && form != BoxForm::Split) continue;
        const double below = spec_.factors[i].antiderivative(y, options_);
        const bool use_lower = (form == BoxForm::Lower) || (form == BoxForm::Split && in);
        v *= use_lower ? below : totals_[i] - below;
      }
      return v;
    };
    return outside * integrate_adaptive(integrand, 0.0, 1.0, options_);
  }

 private:
  const MultiplicativeSpec& spec_;
  QuadratureOptions options_;
  bool exact_ = false;
  std::vector<UnivariatePolynomial> lower_poly_;
  std::vector<UnivariatePolynomial> upper_poly_;
  std::vector<Rational> totals_exact_;
  std::vector<double> totals_;
};

unsigned popcount(std::uint64_t m) { return static_cast<unsigned>(std::popcount(m)); }

// Sums box integrals with the coefficients of the chosen alternative formula.
template <class BoxFn>
double assemble_alternative(unsigned n, unsigned k, AlternativeFormula formula, const BoxFn& box) {
  const std::uint64_t full = (std::uint64_t{1} << n);
  double total = 0.0;
  for (std::uint64_t s = 0; s < full; ++s) {
    const long size = popcount(s);
    switch (formula) {
      case AlternativeFormula::LowerBoxSum: {
        if (size < static_cast<long>(k) - 1) break;
        double c = binomial(size + 1, k).get_d();
        if ((size + 1 - static_cast<long>(k)) % 2 != 0) c = -c;
        if (c != 0.0) total += c * box(s, BoxForm::Lower);
        break;
      }
      case AlternativeFormula::UpperBoxSum: {
        if (size < static_cast<long>(n - k)) break;
        double c = binomial(size + 1, n - k + 1).get_d();
        if (((size + n + k + 1) % 2) != 0) c = -c;
        if (c != 0.0) total += c * box(s, BoxForm::Upper);
        break;
      }
      case AlternativeFormula::SplitBoxDifference: {
        if (size == static_cast<long>(k) - 1) total += box(s, BoxForm::Split);
        if (size == static_cast<long>(k)) total -= box(s, BoxForm::Split);
        break;
      }
    }
  }
  return static_cast<double>(n + 1) * static_cast<double>(n + 2) * total;
}

}  // namespace

double influence_multiplicative(const MultiplicativeSpec& spec, unsigned k, const QuadratureOptions& options) {
  check_multiplicative(spec);
  check_rank(spec.arity, k);
  const MultiplicativeBoxes boxes(spec, options);
  return assemble_alternative(spec.arity, k, AlternativeFormula::LowerBoxSum,
                              [&](std::uint64_t s, BoxForm form) { return boxes.integral(s, form); });
}

double beta_density(double z, double a, double b) {
  if (z < 0.0 || z > 1.0) return 0.0;
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp((a - 1.0) * std::log(z) + (b - 1.0) * std::log1p(-z) - log_beta);
}

double influence_symmetric_multiplicative(const UnaryFactor& phi, unsigned n, unsigned k,
                                          const QuadratureOptions& options) {
  if (n < 1) throw DomainError("arity must be positive");
  check_rank(n, k);
  const double scale = static_cast<double>(n + 1) * static_cast<double>(n + 2);
  const bool symbolic_zero = phi.total_is_symbolic_zero();
  const double total = symbolic_zero ? 0.0 : phi.total(options);
  if (!symbolic_zero && std::abs(total) < 1e-12)
    throw NumericalError("Phi(1) is numerically zero without a symbolic declaration; branch is ambiguous",
                         std::abs(total));
  const auto dn = static_cast<int>(n);
  const auto dk = static_cast<int>(k);
  if (symbolic_zero) {
    const double sign = ((n - k + 1) % 2 == 0) ? 1.0 : -1.0;
    const double coeff = sign * (n + 1.0) * std::tgamma(n + 3.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 2.0));
    const double integral =
        integrate_adaptive([&](double y) { return std::pow(phi.antiderivative(y, options), dn); }, 0.0, 1.0, options);
    return coeff * integral;
  }
  // Phi(1)^n times the binomial difference
  //   C(n,k-1) z^{k-1} (1-z)^{n-k+1} - C(n,k) z^k (1-z)^{n-k}, z = Phi(y)/Phi(1),
  // which is the z-derivative of the beta density h(z; k+1, n-k+2) divided by (n+1)(n+2).
  const double c_lo = binomial(n, k - 1).get_d();
  const double c_hi = binomial(n, k).get_d();
  const auto integrand = [&](double y) {
    const double z = phi.antiderivative(y, options) / total;
    return c_lo * std::pow(z, dk - 1) * std::pow(1.0 - z, dn - dk + 1) - c_hi * std::pow(z, dk) * std::pow(1.0 - z, dn - dk);
  };
  return scale * std::pow(total, dn) * integrate_adaptive(integrand, 0.0, 1.0, options);
}

PowerProductInfluence influence_power_product(double c, unsigned n, unsigned k) {
  if (!(c > -0.5)) throw DomainError("power product needs c > -1/2");
  if (n < 1) throw DomainError("arity must be positive");
  check_rank(n, k);
  const double alpha = 1.0 / (c + 1.0);
  const double dn = n;
  const double dk = k;
  // c alpha^{n+2} Gamma(n+3) Gamma(k-1+alpha) / (Gamma(k+1) Gamma(n+1+alpha)), in logs.
  const double log_common = (dn + 2.0) * std::log(alpha) + std::lgamma(dn + 3.0) - std::lgamma(dn + 1.0 + alpha);
  const double value = c * std::exp(log_common + std::lgamma(dk - 1.0 + alpha) - std::lgamma(dk + 1.0));
  const double first = c * std::exp(log_common + std::lgamma(alpha));
  const double ratio = std::exp(std::lgamma(dk - 1.0 + alpha) - std::lgamma(dk + 1.0) - std::lgamma(alpha));
  return {value, first, ratio};
}

VarianceProfile variance_profile(unsigned n) {
  if (n < 2) throw DomainError("variance profile needs n >= 2");
  const Integer nn(n);
  VarianceProfile p{n, {}, Rational(Integer(1) - nn * nn, Integer(12) * nn * (nn + 3)), true};
  p.intercept.canonicalize();
  for (unsigned k = 1; k <= n; ++k) {
    Rational v((nn + 2) * (Integer(2 * k) - nn - 1), nn * nn * (nn + 3));
    v.canonicalize();
    p.indices.push_back(v);
  }
  // sigma^2_L = (n-1)/(12n(n+3)) (6(n+2) G - (n+1)), G = 2/(n(n-1)) sum (2k-n-1) X_(k).
  const Rational outer(nn - 1, Integer(12) * nn * (nn + 3));
  for (unsigned k = 1; k <= n; ++k) {
    Rational g_coeff(Integer(2) * (Integer(2 * k) - nn - 1), nn * (nn - 1));
    Rational coeff = outer * Rational(6 * (nn + 2)) * g_coeff;
    coeff.canonicalize();
    if (coeff != p.indices[k - 1]) p.gini_identity_holds = false;
  }
  Rational constant = -outer * Rational(nn + 1);
  constant.canonicalize();
  if (constant != p.intercept) p.gini_identity_holds = false;
  return p;
}

PlainPolynomial variance_polynomial(unsigned n) {
  if (n < 1) throw DomainError("arity must be positive");
  PlainPolynomial p(n);
  const Rational square_coeff = Rational(1, n) - Rational(1, n * n);
  const Rational cross_coeff = Rational(-2, n * n);
  for (unsigned i = 0; i < n; ++i) {
    std::vector<unsigned> e(n, 0);
    e[i] = 2;
    p.add_term(e, square_coeff);
    for (unsigned j = i + 1; j < n; ++j) {
      std::vector<unsigned> c(n, 0);
      c[i] = 1;
      c[j] = 1;
      p.add_term(c, cross_coeff);
    }
  }
  return p;
}

namespace {

// Box integral of a black-box evaluator: substitute x_i = y t_i on the lower
// coordinates and x_i = y + (1-y) t_i on the upper ones, then tensor Gauss-Legendre
// over (y, t).
double tensor_box_integral(const Evaluator& f, std::uint64_t subset, BoxForm form, unsigned nodes) {
  const unsigned n = f.arity;
  if (n > kMaxTensorArity)
    throw ConfigurationError("black-box box integrals need n <= " + std::to_string(kMaxTensorArity));
  const auto rule = gauss_legendre_unit(nodes);
  std::vector<double> x(n);
  std::vector<unsigned> idx(n, 0);
  double total = 0.0;
  for (std::size_t iy = 0; iy < rule.nodes.size(); ++iy) {
    const double y = rule.nodes[iy];
    double jac = 1.0;
    for (unsigned i = 0; i < n; ++i) {
      const bool in = subset & (std::uint64_t{1} << i);
      if (in && form != BoxForm::Upper) jac *= y;
      if (in && form == BoxForm::Upper) jac *= 1.0 - y;
      if (!in && form == BoxForm::Split) jac *= 1.0 - y;
    }
    double inner = 0.0;
    std::fill(idx.begin(), idx.end(), 0u);
    while (true) {
      double w = 1.0;
      for (unsigned i = 0; i < n; ++i) {
        const double t = rule.nodes[idx[i]];
        w *= rule.weights[idx[i]];
        const bool in = subset & (std::uint64_t{1} << i);
        if (in)
          x[i] = form == BoxForm::Upper ? y + (1.0 - y) * t : y * t;
        else
          x[i] = form == BoxForm::Split ? y + (1.0 - y) * t : t;
      }
      inner += w * f(x);
      unsigned axis = 0;
      while (axis < n && ++idx[axis] == nodes) idx[axis++] = 0;
      if (axis == n) break;
    }
    total += rule.weights[iy] * jac * inner;
  }
  return total;
}

// Splits a plain polynomial into multiplicative monomials.
std::vector<MultiplicativeSpec> monomial_products(const PlainPolynomial& p) {
  std::vector<MultiplicativeSpec> out;
  const unsigned n = p.arity();
  for (const auto& [e, coef] : p.terms()) {
    MultiplicativeSpec m{n, {}, false};
    for (unsigned i = 0; i < n; ++i) {
      UnivariatePolynomial f(e[i] + 1, Rational(0));
      f.back() = i == 0 ? coef : Rational(1);
      m.factors.push_back(UnaryFactor::polynomial(std::move(f)));
    }
    if (n > 0 && coef == 0) continue;
    out.push_back(std::move(m));
  }
  return out;
}

// Box-integral oracle bound to a function class.
class BoxIntegrator {
 public:
  BoxIntegrator(const FunctionSpec& f, const QuadratureOptions& options) : options_(options), arity_(f.arity()) {
    if (const auto* m = f.get<MultiplicativeSpec>()) {
      parts_.push_back(*m);
    } else if (const auto* pp = f.get<PowerProductSpec>()) {
      parts_.push_back(MultiplicativeSpec::symmetric_of(UnaryFactor::power(1.0, pp->exponent), pp->arity));
    } else if (const auto* plain = f.get<PlainPolynomial>()) {
      parts_ = monomial_products(*plain);
    } else {
      if (arity_ > kMaxTensorArity)
        throw ConfigurationError("box integrals for this function class need n <= " + std::to_string(kMaxTensorArity));
      evaluator_ = make_evaluator(f);
    }
    for (const auto& part : parts_) boxes_.emplace_back(part, options_);
    if (arity_ > kMaxSubsetEnumerationArity)
      throw DomainError("subset enumeration limited to n <= " + std::to_string(kMaxSubsetEnumerationArity));
  }

  double operator()(std::uint64_t subset, BoxForm form) const {
    if ((subset >> arity_) != 0) throw DomainError("subset outside [n]");
    if (evaluator_) return tensor_box_integral(*evaluator_, subset, form, options_.tensor_nodes);
    double total = 0.0;
    for (const auto& b : boxes_) total += b.integral(subset, form);
    return total;
  }

 private:
  QuadratureOptions options_;
  unsigned arity_;
  std::vector<MultiplicativeSpec> parts_;
  std::vector<MultiplicativeBoxes> boxes_;
  std::optional<Evaluator> evaluator_;
};

}  // namespace

double subset_box_integral(const FunctionSpec& f, std::uint64_t subset, BoxForm form, const QuadratureOptions& options) {
  return BoxIntegrator(f, options)(subset, form);
}

double influence_via_alternative(const FunctionSpec& f, unsigned k, AlternativeFormula formula,
                                 const QuadratureOptions& options) {
  const unsigned n = f.arity();
  check_rank(n, k);
  const BoxIntegrator boxes(f, options);
  std::map<std::pair<std::uint64_t, int>, double> cache;
  return assemble_alternative(n, k, formula, [&](std::uint64_t s, BoxForm form) {
    const auto key = std::make_pair(s, static_cast<int>(form));
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const double v = boxes(s, form);
    cache.emplace(key, v);
    return v;
  });
}

}  // namespace osinf
