#include <doctest.h>

#include <cmath>

#include "osinf/analysis.hpp"
#include "osinf/errors.hpp"
#include "osinf/function_spec.hpp"
#include "osinf/lovasz.hpp"
#include "osinf/montecarlo.hpp"
#include "osinf/projection.hpp"
#include "support.hpp"

using namespace osinf;

namespace {

SamplingOptions sampling(std::uint64_t samples, std::uint64_t seed, unsigned threads = 1) {
  SamplingOptions o;
  o.samples = samples;
  o.seed = seed;
  o.threads = threads;
  return o;
}

Evaluator constant(unsigned n, double c) {
  Evaluator e;
  e.arity = n;
  e.value = [c](std::span<const double>) { return c; };
  e.directional_derivative = [](std::span<const double>, unsigned) { return 0.0; };
  return e;
}

Evaluator order_stat(unsigned n, unsigned k) {
  Evaluator e;
  e.arity = n;
  e.value = [k](std::span<const double> x) { return eval_order_stat(x, k); };
  e.directional_derivative = [k](std::span<const double>, unsigned j) { return j == k ? 1.0 : 0.0; };
  return e;
}

Evaluator coordinate(unsigned n, unsigned i) {
  Evaluator e;
  e.arity = n;
  e.value = [i](std::span<const double> x) { return x[i]; };
  return e;
}

Evaluator dual(const Evaluator& f) {
  Evaluator d;
  d.arity = f.arity;
  d.value = [f](std::span<const double> x) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1.0 - x[i];
    return 1.0 - f(y);
  };
  return d;
}

bool within(const IntegrationEstimate& e, double expected, double sigmas = 3.0) {
  return std::abs(e.value - expected) <= sigmas * e.std_error;
}

bool agree(const IntegrationEstimate& a, const IntegrationEstimate& b) {
  return std::abs(a.value - b.value) <= 3.0 * std::hypot(a.std_error, b.std_error);
}

constexpr EstimatorKind kAllEstimators[] = {EstimatorKind::Covariance, EstimatorKind::Derivative,
                                            EstimatorKind::DiffQuotientUniform, EstimatorKind::DiffQuotientTriangular};

}  // namespace

TEST_SUITE("montecarlo") {
  TEST_CASE("inner products") {
    const auto one = constant(3, 1.0);
    const auto e = mc_inner_product(one, one, sampling(1000, 1));
    CHECK(e.value == 1.0);
    CHECK(e.std_error == 0.0);
    CHECK(e.samples == 1000);
    CHECK(e.seed == 1);
    CHECK(within(mc_inner_product(order_stat(2, 1), order_stat(2, 1), sampling(100000, 2)), 1.0 / 6.0));
    for (unsigned n = 1; n <= 4; ++n)
      for (unsigned k = 1; k <= n; ++k) {
        Evaluator g;
        g.arity = n;
        g.value = [k](std::span<const double> x) { return g_basis_value(sorted_copy(x), k); };
        CHECK(within(mc_inner_product(constant(n, 1.0), g, sampling(100000, 10 * n + k)), 0.0));
      }
    CHECK_THROWS_AS(mc_inner_product(one, one, sampling(1, 1)), ConfigurationError);
    CHECK_THROWS_AS(mc_inner_product(one, constant(2, 1.0), sampling(10, 1)), DomainError);
  }

  TEST_CASE("covariance estimator") {
    const auto conj = make_evaluator(builtin_function("conjunctive-example-6.1", 2));
    const auto i1 = influence_mc_covariance(conj, 1, sampling(1000000, 61));
    const auto i2 = influence_mc_covariance(conj, 2, sampling(1000000, 62));
    CHECK(within(i1, 17.0 / 128.0));
    CHECK(within(i2, 19.0 / 64.0));
    CHECK(i1.estimator == EstimatorKind::Covariance);
    for (unsigned n = 1; n <= 4; ++n)
      for (unsigned i = 0; i < n; ++i)
        for (unsigned k = 1; k <= n; ++k)
          CHECK(within(influence_mc_covariance(coordinate(n, i), k, sampling(50000, 100 + 10 * i + k)), 1.0 / n));
    CHECK(within(influence_mc_covariance(constant(3, 2.5), 2, sampling(1000, 3)), 0.0));
    CHECK_THROWS_AS(influence_mc_covariance(constant(3, 2.5), 4, sampling(1000, 3)), DomainError);
  }

  TEST_CASE("derivative estimator") {
    for (unsigned n = 1; n <= 5; ++n)
      for (unsigned k = 1; k <= n; ++k) {
        const auto e = influence_mc_derivative(order_stat(n, k), k, sampling(50000, 7 * k + n));
        CHECK(within(e, 1.0));
        CHECK(e.estimator == EstimatorKind::Derivative);
      }
    for (int trial = 0; trial < 10; ++trial) {
      const unsigned n = testing::uniform_int(1, 4);
      const auto v = testing::random_capacity(n);
      const auto ev = make_evaluator(FunctionSpec(v));
      for (unsigned k = 1; k <= n; ++k) {
        const auto e = influence_mc_derivative(ev, k, sampling(50000, 1000 + 10 * trial + k));
        CHECK(within(e, influence_lovasz(v, k).get_d()));
        // capacities are nondecreasing, so D_(k) f >= 0
        CHECK(e.value >= -3.0 * e.std_error);
      }
    }
    CHECK_THROWS_AS(influence_mc_derivative(coordinate(2, 0), 1, sampling(100, 1)), ConfigurationError);
  }

  TEST_CASE("difference-quotient estimators") {
    for (auto variant : {DiffQuotientVariant::UniformY, DiffQuotientVariant::TriangularY}) {
      for (unsigned n = 1; n <= 4; ++n)
        for (unsigned k = 1; k <= n; ++k)
          CHECK(within(influence_mc_diffquotient(order_stat(n, k), k, sampling(50000, 3 * k + n), variant), 1.0));
      Evaluator prod;
      prod.arity = 2;
      prod.value = [](std::span<const double> x) { return x[0] * x[1]; };
      CHECK(within(influence_mc_diffquotient(prod, 1, sampling(100000, 17), variant), 0.8));
      CHECK(within(influence_mc_diffquotient(prod, 2, sampling(100000, 18), variant), 0.2));
    }
  }

  TEST_CASE("ineffective smallest variable") {
    // f depends only on the larger coordinate, through a different map on each simplex
    Evaluator f;
    f.arity = 2;
    f.value = [](std::span<const double> x) { return x[0] > x[1] ? x[0] * x[0] : std::sin(3.0 * x[1]); };
    f.directional_derivative = [](std::span<const double> x, unsigned k) {
      if (k == 1) return 0.0;
      return x[0] > x[1] ? 2.0 * x[0] : 3.0 * std::cos(3.0 * x[1]);
    };
    for (auto kind : kAllEstimators) {
      const auto e = influence_mc(f, 1, kind, sampling(200000, 5));
      CHECK(within(e, 0.0));
    }
    CHECK(influence_mc(f, 1, EstimatorKind::Derivative, sampling(1000, 5)).value == 0.0);
  }

  TEST_CASE("estimators agree pairwise") {
    const auto conj = make_evaluator(builtin_function("conjunctive-example-6.1", 2));
    for (unsigned k = 1; k <= 2; ++k) {
      const auto a = influence_mc(conj, k, EstimatorKind::Covariance, sampling(1000000, 71));
      const auto b = influence_mc(conj, k, EstimatorKind::DiffQuotientUniform, sampling(1000000, 72));
      const auto c = influence_mc(conj, k, EstimatorKind::DiffQuotientTriangular, sampling(1000000, 73));
      CHECK(agree(a, b));
      CHECK(agree(a, c));
      CHECK(agree(b, c));
    }
    for (int trial = 0; trial < 6; ++trial) {
      const unsigned n = testing::uniform_int(2, 4);
      const auto ev = make_evaluator(FunctionSpec(testing::random_set_function(n)));
      const unsigned k = testing::uniform_int(1, n);
      std::vector<IntegrationEstimate> e;
      for (std::size_t i = 0; i < std::size(kAllEstimators); ++i)
        e.push_back(influence_mc(ev, k, kAllEstimators[i], sampling(200000, 500 + 10 * trial + i)));
      for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) CHECK(agree(e[i], e[j]));
    }
  }

  TEST_CASE("reproducible for any thread count") {
    const auto conj = make_evaluator(builtin_function("conjunctive-example-6.1", 2));
    for (auto kind : {EstimatorKind::Covariance, EstimatorKind::DiffQuotientUniform, EstimatorKind::DiffQuotientTriangular}) {
      const auto serial = influence_mc(conj, 2, kind, sampling(100003, 9, 1));
      const auto again = influence_mc(conj, 2, kind, sampling(100003, 9, 1));
      const auto parallel = influence_mc(conj, 2, kind, sampling(100003, 9, 3));
      CHECK(serial.value == again.value);
      CHECK(serial.value == parallel.value);
      CHECK(serial.std_error == parallel.std_error);
    }
    const auto other = influence_mc_covariance(conj, 2, sampling(100003, 10));
    CHECK(other.value != influence_mc_covariance(conj, 2, sampling(100003, 9)).value);
    CHECK(agree(other, influence_mc_covariance(conj, 2, sampling(100003, 9))));
  }

  TEST_CASE("counter-based streams") {
    SampleStream a(1, 5), b(1, 5), c(1, 6), d(2, 5);
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
    CHECK(derive_seed(1, 1) != derive_seed(1, 2));
    for (int i = 0; i < 1000; ++i) {
      const double u = a.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }

  TEST_CASE("tainted samples carry the offending point") {
    Evaluator f;
    f.arity = 2;
    f.value = [](std::span<const double> x) { return x[0] > 0.99 ? std::nan("") : x[0]; };
    try {
      influence_mc_covariance(f, 1, sampling(10000, 4));
      FAIL("expected a tainted-sample error");
    } catch (const TaintedSampleError& e) {
      REQUIRE(e.point().size() == 2);
      CHECK(e.point()[0] > 0.99);
    }
    CHECK_THROWS_AS(mc_inner_product(f, f, sampling(10000, 4, 2)), TaintedSampleError);
  }

  TEST_CASE("duality") {
    const auto conj = make_evaluator(builtin_function("conjunctive-example-6.1", 2));
    const auto d = dual(conj);
    for (unsigned k = 1; k <= 2; ++k)
      CHECK(agree(influence_mc_covariance(d, k, sampling(400000, 80 + k)),
                  influence_mc_covariance(conj, 3 - k, sampling(400000, 90 + k))));
  }

  TEST_CASE("permutations preserve the index and the residual norm") {
    for (int trial = 0; trial < 5; ++trial) {
      const auto v = testing::random_set_function(3);
      const auto perm = testing::random_permutation(3);
      const auto moved = make_evaluator(FunctionSpec(relabeled(v, perm)));
      for (unsigned k = 1; k <= 3; ++k)
        CHECK(within(influence_mc_covariance(moved, k, sampling(200000, 300 + 10 * trial + k)),
                     influence_lovasz(v, k).get_d()));
      const auto approx = best_approximation(FunctionSpec(v));
      Evaluator residual;
      residual.arity = 3;
      residual.value = [&](std::span<const double> x) { return moved(x) - approx.evaluate_basis_form(x); };
      const auto norm = mc_inner_product(residual, residual, sampling(200000, 400 + trial));
      CHECK(within(norm, approx.residual_norm_sq.value));
    }
  }

  TEST_CASE("tensor quadrature") {
    CHECK(tensor_quadrature(constant(3, 1.0), 2) == doctest::Approx(1.0).epsilon(1e-15));
    Evaluator xy;
    xy.arity = 2;
    xy.value = [](std::span<const double> x) { return x[0] * x[1]; };
    CHECK(std::abs(tensor_quadrature(xy, 2) - 0.25) <= 1e-15);
    CHECK(std::abs(tensor_quadrature(order_stat(2, 1), 64) - 1.0 / 3.0) <= 1e-6);
    CHECK_THROWS_AS(tensor_quadrature(constant(5, 1.0), 4), ConfigurationError);
    CHECK_THROWS_AS(tensor_quadrature(constant(2, 1.0), 1), ConfigurationError);
    const auto rule = gauss_legendre_unit(7);
    double total = 0.0;
    for (double w : rule.weights) total += w;
    CHECK(std::abs(total - 1.0) <= 1e-15);
  }
}
