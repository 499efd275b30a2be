#include "osinf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "osinf/errors.hpp"

namespace osinf {

namespace {

bool is_nonnegative_integer(double c) { return c >= 0 && c <= 64 && c == std::floor(c); }

PlainPolynomial power_product_polynomial(const PowerProductSpec& p) {
  PlainPolynomial out(p.arity);
  out.add_term(std::vector<unsigned>(p.arity, static_cast<unsigned>(p.exponent)), 1);
  return out;
}

bool closed_form_applies(const FunctionSpec& f) {
  switch (f.kind()) {
    case FunctionKind::Multiplicative:
    case FunctionKind::PowerProduct:
    case FunctionKind::SetFunction:
      return true;
    case FunctionKind::PlainPolynomial:
      return f.builtin() == "variance";
    default:
      return false;
  }
}

bool exact_applies(const FunctionSpec& f) {
  switch (f.kind()) {
    case FunctionKind::OrderStatPolynomial:
    case FunctionKind::PlainPolynomial:
      return true;
    case FunctionKind::SetFunction:
      return f.arity() <= kMaxLovaszNormArity;
    case FunctionKind::Multiplicative:
      return f.get<MultiplicativeSpec>()->is_polynomial();
    case FunctionKind::PowerProduct:
      return is_nonnegative_integer(f.get<PowerProductSpec>()->exponent);
    case FunctionKind::BlackBox:
      return false;
  }
  return false;
}

// Everything needed to assemble a profile or approximation, in either exact or
// floating form.
struct Moments {
  Method method;
  unsigned n;
  std::vector<Quantity> indices;
  Quantity tail;
  Quantity mean;
  std::optional<Quantity> norm_sq;
  std::optional<SamplingProvenance> sampling;
  // Monte-Carlo only: covariance of the estimated (I_1..I_n, a_{n+1}, <f,1>, <f,f>).
  std::optional<SampleMoments> mc;
};

Moments exact_moments(const FunctionSpec& f, bool need_norm) {
  const auto form = exact_form(f);
  if (!form) throw ConfigurationError("exact method does not apply to " + kind_name(f.kind()) + " functions");
  const unsigned n = f.arity();
  Moments m{Method::Exact, n, {}, {}, {}, {}, {}, {}};
  const auto b = order_stat_moments(form->symmetrized);
  const auto a = solve_coefficients(gram_system(n), b);
  for (unsigned k = 1; k <= n; ++k) m.indices.push_back(Quantity::from_exact(a[k - 1]));
  const Rational mean = b[n];
  m.tail = Quantity::from_exact(formal_tail(n, mean, b[n - 1]));
  m.mean = Quantity::from_exact(mean);
  if (need_norm) m.norm_sq = Quantity::from_exact(form->norm_sq);
  return m;
}

Rational tail_from_mean(unsigned n, const Rational& mean, const std::vector<Rational>& indices) {
  Rational weighted = 0;
  for (unsigned k = 1; k <= n; ++k) weighted += Rational(k) * indices[k - 1];
  Rational t = mean - weighted / Rational(n + 1);
  t.canonicalize();
  return t;
}

double tail_from_mean(unsigned n, double mean, const std::vector<double>& indices) {
  double weighted = 0.0;
  for (unsigned k = 1; k <= n; ++k) weighted += k * indices[k - 1];
  return mean - weighted / (n + 1.0);
}

Moments closed_form_moments(const FunctionSpec& f, bool need_norm, const QuadratureOptions& q) {
  const unsigned n = f.arity();
  Moments m{Method::ClosedForm, n, {}, {}, {}, {}, {}, {}};
  if (const auto* v = f.get<SetFunction>()) {
    const auto profile = influence_profile_lovasz(*v);
    const auto sym = symmetric_part(*v);
    Rational mean = sym.constant;
    for (unsigned j = 1; j <= n; ++j) mean += sym.slopes[j - 1] * Rational(j, n + 1);
    mean.canonicalize();
    for (const auto& i : profile) m.indices.push_back(Quantity::from_exact(i));
    m.mean = Quantity::from_exact(mean);
    m.tail = Quantity::from_exact(tail_from_mean(n, mean, profile));
    if (need_norm) {
      if (n > kMaxLovaszNormArity)
        throw ConfigurationError("<f,f> for set functions needs n <= " + std::to_string(kMaxLovaszNormArity));
      m.norm_sq = Quantity::from_exact(lovasz_norm_sq(*v));
    }
    return m;
  }
  if (const auto* p = f.get<PlainPolynomial>(); p && f.builtin() == "variance") {
    const auto profile = variance_profile(n);
    Rational mean = p->integral();
    for (const auto& i : profile.indices) m.indices.push_back(Quantity::from_exact(i));
    m.mean = Quantity::from_exact(mean);
    m.tail = Quantity::from_exact(profile.intercept);
    if (need_norm) m.norm_sq = Quantity::from_exact(((*p) * (*p)).integral());
    return m;
  }
  std::vector<double> indices;
  double mean = 1.0;
  double norm = 1.0;
  if (const auto* pp = f.get<PowerProductSpec>()) {
    for (unsigned k = 1; k <= n; ++k) indices.push_back(influence_power_product(pp->exponent, n, k).value);
    mean = std::pow(1.0 / (pp->exponent + 1.0), n);
    norm = std::pow(1.0 / (2.0 * pp->exponent + 1.0), n);
  } else if (const auto* ms = f.get<MultiplicativeSpec>()) {
    for (unsigned k = 1; k <= n; ++k)
      indices.push_back(ms->symmetric ? influence_symmetric_multiplicative(ms->factors[0], n, k, q)
                                      : influence_multiplicative(*ms, k, q));
    for (const auto& phi : ms->factors) {
      mean *= phi.total_is_symbolic_zero() ? 0.0 : phi.total(q);
      if (need_norm) norm *= phi.square_integral(q);
    }
  } else {
    throw ConfigurationError("closed-form method does not apply to " + kind_name(f.kind()) + " functions");
  }
  for (double v : indices) m.indices.push_back(Quantity::from_double(v));
  m.mean = Quantity::from_double(mean);
  m.tail = Quantity::from_double(tail_from_mean(n, mean, indices));
  if (need_norm) m.norm_sq = Quantity::from_double(norm);
  return m;
}

Moments monte_carlo_moments(const FunctionSpec& f, const SamplingOptions& sampling) {
  const unsigned n = f.arity();
  const Evaluator eval = make_evaluator(f);
  const double np1 = n + 1.0;
  const double np2 = n + 2.0;
  // outputs: f g_1..f g_n, f t, f, f^2 with t = (n+1)^2 - (n+1)(n+2) x_(n)
  const std::size_t outputs = n + 3;
  std::vector<double> sorted(n);
  const auto moments = sample_moments(
      n, outputs, sampling,
      [&, sorted](std::uint64_t, SampleStream& stream, std::span<double> point, std::span<double> out) mutable {
        draw_uniform_point(stream, point);
        const double v = eval(point);
        std::copy(point.begin(), point.end(), sorted.begin());
        std::sort(sorted.begin(), sorted.end());
        for (unsigned k = 1; k <= n; ++k) out[k - 1] = v * g_basis_value(sorted, k);
        out[n] = v * (np1 * np1 - np1 * np2 * sorted[n - 1]);
        out[n + 1] = v;
        out[n + 2] = v * v;
      });
  Moments m{Method::MonteCarlo, n, {}, {}, {}, {}, SamplingProvenance{sampling.samples, sampling.seed}, moments};
  for (unsigned k = 0; k < n; ++k) m.indices.push_back(Quantity::from_double(moments.mean[k], moments.std_error(k)));
  m.tail = Quantity::from_double(moments.mean[n], moments.std_error(n));
  m.mean = Quantity::from_double(moments.mean[n + 1], moments.std_error(n + 1));
  m.norm_sq = Quantity::from_double(moments.mean[n + 2], moments.std_error(n + 2));
  return m;
}

Moments compute_moments(const FunctionSpec& f, const AnalysisOptions& options, bool need_norm) {
  switch (resolve_method(f, options.method)) {
    case Method::Exact: return exact_moments(f, need_norm);
    case Method::ClosedForm: return closed_form_moments(f, need_norm, options.quadrature);
    default: return monte_carlo_moments(f, options.sampling);
  }
}

std::vector<Quantity> coefficient_vector(const Moments& m) {
  auto a = m.indices;
  a.push_back(m.tail);
  return a;
}

bool all_exact(const std::vector<Quantity>& qs) {
  return std::all_of(qs.begin(), qs.end(), [](const Quantity& q) { return q.exact.has_value(); });
}

double quad_form(const RationalMatrix& mat, const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * mat(i, j).get_d() * y[j];
  return s;
}

// First-order standard error of a function of the estimated means with gradient `grad`.
double delta_se(const SampleMoments& mc, const std::vector<double>& grad) {
  double var = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i)
    for (std::size_t j = 0; j < grad.size(); ++j) var += grad[i] * mc.mean_cov(i, j) * grad[j];
  return std::sqrt(std::max(var, 0.0));
}

}  // namespace

std::optional<ExactForm> exact_form(const FunctionSpec& f) {
  if (!exact_applies(f)) return std::nullopt;
  if (const auto* p = f.get<OrderStatPolynomial>()) return ExactForm{*p, inner_product_exact(*p, *p)};
  if (const auto* v = f.get<SetFunction>()) return ExactForm{lovasz_symmetrized_polynomial(*v), lovasz_norm_sq(*v)};
  PlainPolynomial plain(f.arity());
  if (const auto* p = f.get<PlainPolynomial>()) plain = *p;
  else if (const auto* m = f.get<MultiplicativeSpec>()) plain = m->to_plain_polynomial();
  else if (const auto* pp = f.get<PowerProductSpec>()) plain = power_product_polynomial(*pp);
  else return std::nullopt;
  return ExactForm{symmetrize(plain), (plain * plain).integral()};
}

bool supports_method(const FunctionSpec& f, Method method) {
  switch (method) {
    case Method::Auto:
    case Method::MonteCarlo: return true;
    case Method::Exact: return exact_applies(f);
    case Method::ClosedForm: return closed_form_applies(f);
  }
  return false;
}

Method resolve_method(const FunctionSpec& f, Method requested) {
  if (requested == Method::Auto) {
    if (exact_applies(f)) return Method::Exact;
    if (closed_form_applies(f)) return Method::ClosedForm;
    return Method::MonteCarlo;
  }
  if (!supports_method(f, requested))
    throw ConfigurationError("method '" + method_name(requested) + "' does not apply to " + kind_name(f.kind()) +
                             " functions");
  return requested;
}

InfluenceProfile influence_profile(const FunctionSpec& f, const AnalysisOptions& options) {
  const auto m = compute_moments(f, options, false);
  return InfluenceProfile{m.n, m.indices, m.tail, m.mean, m.method, m.sampling};
}

ApproximationResult best_approximation(const FunctionSpec& f, const AnalysisOptions& options, bool allow_degenerate) {
  const auto m = compute_moments(f, options, true);
  const unsigned n = m.n;
  const auto sys = gram_system(n);
  ApproximationResult r;
  r.arity = n;
  r.method = m.method;
  r.coefficients = coefficient_vector(m);
  r.mean = m.mean;
  r.slopes = m.indices;
  r.norm_sq = *m.norm_sq;
  r.sampling = m.sampling;
  const double scale = std::sqrt(2.0 * (n + 1.0) * (n + 2.0));

  if (all_exact(r.coefficients) && m.norm_sq->exact && m.mean.exact) {
    std::vector<Rational> a;
    for (const auto& q : r.coefficients) a.push_back(*q.exact);
    const Rational var_l = approximation_variance(sys, a);
    Rational quad = 0;
    for (unsigned i = 0; i <= n; ++i)
      for (unsigned j = 0; j <= n; ++j) quad += a[i] * sys.gram(i, j) * a[j];
    Rational residual = *m.norm_sq->exact - quad;
    residual.canonicalize();
    Rational var_f = *m.norm_sq->exact - *m.mean.exact * *m.mean.exact;
    var_f.canonicalize();
    r.residual_norm_sq = Quantity::from_exact(residual);
    if (var_f == 0) {
      r.degenerate_variance = true;
    } else {
      Rational r2 = var_l / var_f;
      r2.canonicalize();
      r.r_squared = Quantity::from_exact(r2);
      const double sigma = std::sqrt(var_f.get_d());
      for (const auto& s : r.slopes) r.normalized.push_back(Quantity::from_double(s.value / (sigma * scale)));
    }
  } else {
    std::vector<double> a;
    for (const auto& q : r.coefficients) a.push_back(q.value);
    std::vector<double> c(n + 1);
    for (unsigned i = 0; i <= n; ++i) c[i] = sys.gram(i, n).get_d();
    std::vector<double> ma(n + 1, 0.0);
    for (unsigned i = 0; i <= n; ++i)
      for (unsigned j = 0; j <= n; ++j) ma[i] += sys.gram(i, j).get_d() * a[j];
    double ca = 0.0;
    for (unsigned i = 0; i <= n; ++i) ca += c[i] * a[i];
    const double quad = quad_form(sys.gram, a, a);
    const double var_l = quad - ca * ca;
    const double mu = m.mean.value;
    const double var_f = m.norm_sq->value - mu * mu;
    const double residual = m.norm_sq->value - quad;
    const bool degenerate = m.mc ? m.mc->cov(n + 1, n + 1) <= 0.0 : !(var_f > 0.0);

    if (m.mc) {
      // Gradients over (a_1..a_{n+1}, <f,1>, <f,f>).
      std::vector<double> g(n + 3, 0.0);
      for (unsigned i = 0; i <= n; ++i) g[i] = -2.0 * ma[i];
      g[n + 2] = 1.0;
      r.residual_norm_sq = Quantity::from_double(residual, delta_se(*m.mc, g));
    } else {
      r.residual_norm_sq = Quantity::from_double(residual);
    }
    if (degenerate) {
      r.degenerate_variance = true;
    } else {
      const double sigma = std::sqrt(var_f);
      const double r2 = var_l / var_f;
      if (m.mc) {
        std::vector<double> g(n + 3, 0.0);
        for (unsigned i = 0; i <= n; ++i) g[i] = 2.0 * (ma[i] - ca * c[i]) / var_f;
        g[n + 1] = 2.0 * mu * var_l / (var_f * var_f);
        g[n + 2] = -var_l / (var_f * var_f);
        r.r_squared = Quantity::from_double(r2, delta_se(*m.mc, g));
        for (unsigned k = 1; k <= n; ++k) {
          const double ik = a[k - 1];
          std::vector<double> gk(n + 3, 0.0);
          gk[k - 1] = 1.0 / (sigma * scale);
          gk[n + 1] = ik * mu / (var_f * sigma * scale);
          gk[n + 2] = -ik / (2.0 * var_f * sigma * scale);
          r.normalized.push_back(Quantity::from_double(ik / (sigma * scale), delta_se(*m.mc, gk)));
        }
      } else {
        r.r_squared = Quantity::from_double(r2);
        for (unsigned k = 1; k <= n; ++k) r.normalized.push_back(Quantity::from_double(a[k - 1] / (sigma * scale)));
      }
    }
  }
  if (r.degenerate_variance) {
    r.r_squared = Quantity::from_double(std::numeric_limits<double>::quiet_NaN());
    if (!allow_degenerate) throw DegenerateVarianceError("sigma^2(f) = 0: R^2 and r(f,k) are undefined for constant f");
  }
  return r;
}

Quantity normalized_index(const FunctionSpec& f, unsigned k, const AnalysisOptions& options) {
  if (k < 1 || k > f.arity())
    throw DomainError("normalized index defined for k in [1, " + std::to_string(f.arity()) + "]");
  return best_approximation(f, options).normalized[k - 1];
}

}  // namespace osinf
