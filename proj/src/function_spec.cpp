#include "osinf/function_spec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "osinf/errors.hpp"

namespace osinf {

std::string kind_name(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::OrderStatPolynomial: return "orderstat-polynomial";
    case FunctionKind::PlainPolynomial: return "plain-polynomial";
    case FunctionKind::SetFunction: return "set-function";
    case FunctionKind::Multiplicative: return "multiplicative";
    case FunctionKind::PowerProduct: return "power-product";
    case FunctionKind::BlackBox: return "black-box";
  }
  return "unknown";
}

FunctionSpec::FunctionSpec(Payload payload, std::string builtin)
    : payload_(std::move(payload)), builtin_(std::move(builtin)) {
  if (arity() < 1) throw DomainError("function arity must be positive");
  if (const auto* m = get<MultiplicativeSpec>(); m && m->factors.size() != m->arity)
    throw DomainError("multiplicative spec needs one factor per coordinate");
  if (const auto* p = get<PowerProductSpec>(); p && !(p->exponent > -0.5))
    throw DomainError("power product needs c > -1/2");
}

unsigned FunctionSpec::arity() const {
  return std::visit(
      [](const auto& p) -> unsigned {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OrderStatPolynomial> || std::is_same_v<T, PlainPolynomial> ||
                      std::is_same_v<T, SetFunction>)
          return p.arity();
        else if constexpr (std::is_same_v<T, BlackBox>)
          return p.evaluator.arity;
        else
          return p.arity;
      },
      payload_);
}

FunctionKind FunctionSpec::kind() const { return static_cast<FunctionKind>(payload_.index()); }

namespace {

// Coordinate index holding x_(k), ties broken by position.
std::size_t rank_position(std::span<const double> x, unsigned k) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  return order.at(k - 1);
}

void check_point(std::span<const double> x, unsigned n) {
  if (x.size() != n) throw DomainError("point dimension does not match arity");
}

void check_rank(unsigned k, unsigned n) {
  if (k < 1 || k > n) throw DomainError("rank " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
}

Evaluator orderstat_evaluator(const OrderStatPolynomial& p) {
  const unsigned n = p.arity();
  Evaluator e{n, [p, n](std::span<const double> x) {
                check_point(x, n);
                return p.evaluate(x);
              },
              {}};
  e.directional_derivative = [p, n](std::span<const double> x, unsigned k) {
    check_point(x, n);
    check_rank(k, n);
    const auto s = sorted_copy(x);
    double total = 0.0;
    for (const auto& [exps, coef] : p.terms()) {
      double term = coef.get_d();
      bool has_slot = false;
      for (const auto& sp : exps) {
        const double v = s[sp.slot - 1];
        if (sp.slot == k) {
          has_slot = true;
          term *= sp.power * std::pow(v, static_cast<int>(sp.power) - 1);
        } else {
          term *= std::pow(v, static_cast<int>(sp.power));
        }
      }
      if (has_slot) total += term;
    }
    return total;
  };
  return e;
}

Evaluator plain_evaluator(const PlainPolynomial& p) {
  const unsigned n = p.arity();
  Evaluator e{n, [p, n](std::span<const double> x) {
                check_point(x, n);
                return p.evaluate(x);
              },
              {}};
  e.directional_derivative = [p, n](std::span<const double> x, unsigned k) {
    check_point(x, n);
    check_rank(k, n);
    const std::size_t i = rank_position(x, k);
    double total = 0.0;
    for (const auto& [exps, coef] : p.terms()) {
      if (exps[i] == 0) continue;
      double term = coef.get_d() * exps[i];
      for (unsigned j = 0; j < n; ++j) {
        const int power = static_cast<int>(exps[j]) - (j == i ? 1 : 0);
        if (power > 0) term *= std::pow(x[j], power);
      }
      total += term;
    }
    return total;
  };
  return e;
}

Evaluator set_function_evaluator(const SetFunction& v) {
  const unsigned n = v.arity();
  Evaluator e{n, [v, n](std::span<const double> x) {
                check_point(x, n);
                return eval_lovasz(v, x);
              },
              {}};
  e.directional_derivative = [v, n](std::span<const double> x, unsigned k) {
    check_point(x, n);
    check_rank(k, n);
    return lovasz_directional_derivative(v, x, k);
  };
  return e;
}

Evaluator multiplicative_evaluator(const MultiplicativeSpec& m) {
  const unsigned n = m.arity;
  Evaluator e{n, [m](std::span<const double> x) { return m.evaluate(x); }, {}};
  const bool differentiable = std::all_of(m.factors.begin(), m.factors.end(), [](const UnaryFactor& f) {
    return f.kind() != UnaryFactor::Kind::Callable || f.derivative(0.5).has_value();
  });
  if (differentiable)
    e.directional_derivative = [m, n](std::span<const double> x, unsigned k) {
      check_point(x, n);
      check_rank(k, n);
      const std::size_t i = rank_position(x, k);
      double v = *m.factors[i].derivative(x[i]);
      for (unsigned j = 0; j < n; ++j)
        if (j != i) v *= m.factors[j].value(x[j]);
      return v;
    };
  return e;
}

Evaluator power_product_evaluator(const PowerProductSpec& p) {
  const unsigned n = p.arity;
  const double c = p.exponent;
  Evaluator e{n, [n, c](std::span<const double> x) {
                check_point(x, n);
                double prod = 1.0;
                for (double v : x) prod *= v;
                return c == 0.0 ? 1.0 : std::pow(prod, c);
              },
              {}};
  e.directional_derivative = [n, c](std::span<const double> x, unsigned k) {
    check_point(x, n);
    check_rank(k, n);
    const std::size_t i = rank_position(x, k);
    if (c == 0.0) return 0.0;
    double others = 1.0;
    for (unsigned j = 0; j < n; ++j)
      if (j != i) others *= x[j];
    return c * std::pow(others, c) * std::pow(x[i], c - 1.0);
  };
  return e;
}

}  // namespace

Evaluator make_evaluator(const FunctionSpec& f) {
  return std::visit(
      [](const auto& p) -> Evaluator {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OrderStatPolynomial>) return orderstat_evaluator(p);
        else if constexpr (std::is_same_v<T, PlainPolynomial>) return plain_evaluator(p);
        else if constexpr (std::is_same_v<T, SetFunction>) return set_function_evaluator(p);
        else if constexpr (std::is_same_v<T, MultiplicativeSpec>) return multiplicative_evaluator(p);
        else if constexpr (std::is_same_v<T, PowerProductSpec>) return power_product_evaluator(p);
        else return p.evaluator;
      },
      f.payload());
}

double conjunctive_example(std::span<const double> x) {
  if (x.size() != 2) throw DomainError("conjunctive example is binary");
  if (std::max(x[0], x[1]) < 0.75) return 0.0;
  return std::min({x[0], x[1], 0.25});
}

FunctionSpec builtin_function(std::string_view name, unsigned n) {
  if (n < 1) throw DomainError("arity must be positive");
  const std::string label(name);
  if (name == "variance") return FunctionSpec(variance_polynomial(n), label);
  if (name == "arithmetic-mean") {
    PlainPolynomial p(n);
    for (unsigned i = 0; i < n; ++i) {
      std::vector<unsigned> e(n, 0);
      e[i] = 1;
      p.add_term(std::move(e), Rational(1, n));
    }
    return FunctionSpec(std::move(p), label);
  }
  if (name == "product") {
    PlainPolynomial p(n);
    p.add_term(std::vector<unsigned>(n, 1), 1);
    return FunctionSpec(std::move(p), label);
  }
  if (name == "geometric-mean") return FunctionSpec(PowerProductSpec{n, 1.0 / n}, label);
  if (name == "min") return FunctionSpec(OrderStatPolynomial::order_statistic(n, 1), label);
  if (name == "max") return FunctionSpec(OrderStatPolynomial::order_statistic(n, n), label);
  if (name == "median") {
    if (n % 2 == 1) return FunctionSpec(OrderStatPolynomial::order_statistic(n, (n + 1) / 2), label);
    auto p = OrderStatPolynomial::order_statistic(n, n / 2) + OrderStatPolynomial::order_statistic(n, n / 2 + 1);
    p *= Rational(1, 2);
    return FunctionSpec(std::move(p), label);
  }
  if (name == "conjunctive-example-6.1") {
    if (n != 2) throw DomainError("conjunctive-example-6.1 is binary (arity 2)");
    Evaluator e{2, [](std::span<const double> x) { return conjunctive_example(x); }, {}};
    return FunctionSpec(BlackBox{std::move(e), label}, label);
  }
  throw DomainError("unknown builtin '" + label + "'");
}

}  // namespace osinf
