#include <doctest.h>

#include <cmath>

#include "osinf/errors.hpp"
#include "osinf/exact_kernel.hpp"
#include "osinf/montecarlo.hpp"
#include "osinf/projection.hpp"
#include "support.hpp"

using namespace osinf;
using testing::random_point;

namespace {

// Tensor Gauss-Legendre over the ordered simplex 0 <= y_1 <= ... <= y_n <= 1 via
// y_n = u_n, y_k = u_k y_{k+1}; the integral over the cube is n! times this.
template <class SortedFn>
double simplex_quadrature(unsigned n, unsigned nodes, const SortedFn& f) {
  const auto rule = gauss_legendre_unit(nodes);
  std::vector<unsigned> idx(n, 0);
  std::vector<double> y(n);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    double upper = 1.0;
    for (unsigned k = n; k-- > 0;) {
      y[k] = rule.nodes[idx[k]] * upper;
      w *= rule.weights[idx[k]] * upper;
      upper = y[k];
    }
    total += w * f(y);
    unsigned axis = 0;
    while (axis < n && ++idx[axis] == nodes) idx[axis++] = 0;
    if (axis == n) break;
  }
  double fact = 1.0;
  for (unsigned k = 2; k <= n; ++k) fact *= k;
  return fact * total;
}

Rational q(long p, long d = 1) { return make_rational(p, d); }

}  // namespace

TEST_SUITE("exact-kernel") {
  TEST_CASE("eval_order_stat picks sorted coordinates with boundary conventions") {
    const std::vector<double> x{0.3, 0.1, 0.7};
    CHECK(eval_order_stat(x, 2) == 0.3);
    CHECK(eval_order_stat(x, 0) == 0.0);
    CHECK(eval_order_stat(x, 4) == 1.0);
    const std::vector<double> tie{0.5, 0.5};
    CHECK(eval_order_stat(tie, 1) == 0.5);
    CHECK(eval_order_stat(tie, 2) == 0.5);
    CHECK_THROWS_AS(eval_order_stat(x, 5), DomainError);
  }

  TEST_CASE("moment examples") {
    for (unsigned n = 1; n <= 6; ++n)
      for (unsigned k = 1; k <= n; ++k) CHECK(moment(OrderStatMonomial(n, {{k, 1}})) == q(k, n + 1));
    CHECK(moment(OrderStatMonomial(2, {{1, 1}, {2, 1}})) == q(1, 4));
    CHECK(moment(OrderStatMonomial(2, {{1, 1}, {2, 2}})) == q(1, 5));
    CHECK(moment(OrderStatMonomial(2, {{1, 2}, {2, 1}})) == q(2, 15));
    CHECK(moment(OrderStatMonomial(3, {{2, 1}}, q(3, 2))) == q(3, 4));
  }

  TEST_CASE("moment agrees with a simplex quadrature oracle for n <= 3, degree <= 4") {
    for (unsigned n = 1; n <= 3; ++n) {
      // every exponent vector with total degree <= 4
      std::vector<unsigned> e(n, 0);
      while (true) {
        unsigned degree = 0;
        for (unsigned v : e) degree += v;
        if (degree <= 4) {
          Exponents sparse;
          for (unsigned k = 0; k < n; ++k)
            if (e[k]) sparse.push_back({k + 1, e[k]});
          const OrderStatMonomial mono(n, sparse);
          const double exact = moment(mono).get_d();
          const double oracle = simplex_quadrature(n, 8, [&](std::span<const double> y) { return mono.evaluate_sorted(y); });
          CHECK(std::abs(oracle - exact) <= 1e-10 * std::abs(exact));
        }
        unsigned axis = 0;
        while (axis < n && ++e[axis] == 5) e[axis++] = 0;
        if (axis == n) break;
      }
    }
  }

  TEST_CASE("inner products") {
    const auto os = [](unsigned n, unsigned k) { return OrderStatPolynomial::order_statistic(n, k); };
    CHECK(inner_product_exact(os(3, 1), os(3, 2)) == q(3, 20));
    CHECK(inner_product_exact(OrderStatPolynomial(4, 1), OrderStatPolynomial(4, 1)) == 1);
    CHECK(inner_product_exact(os(2, 1), os(2, 1)) == q(1, 6));
    CHECK_THROWS_AS(inner_product_exact(os(2, 1), os(3, 1)), DomainError);
    for (unsigned n = 1; n <= 12; ++n)
      for (unsigned i = 1; i <= n + 1; ++i)
        for (unsigned j = 1; j <= n + 1; ++j)
          CHECK(inner_product_exact(os(n, i), os(n, j)) ==
                q(std::min(i, j) * (std::max(i, j) + 1), (n + 1) * (n + 2)));
  }

  TEST_CASE("inner product is bilinear") {
    for (int trial = 0; trial < 50; ++trial) {
      const unsigned n = testing::uniform_int(1, 4);
      const auto f = testing::random_orderstat_polynomial(n);
      const auto g = testing::random_orderstat_polynomial(n);
      const auto h = testing::random_orderstat_polynomial(n);
      const Rational a = testing::small_rational();
      CHECK(inner_product_exact(a * f + g, h) == a * inner_product_exact(f, h) + inner_product_exact(g, h));
      CHECK(inner_product_exact(f, h) == inner_product_exact(h, f));
    }
  }

  TEST_CASE("symmetrize examples") {
    for (unsigned n = 1; n <= 5; ++n) {
      PlainPolynomial xi(n);
      std::vector<unsigned> e(n, 0);
      e[n - 1] = 1;
      xi.add_term(e, 1);
      OrderStatPolynomial expected(n);
      for (unsigned k = 1; k <= n; ++k) expected.add_term({{k, 1}}, q(1, n));
      CHECK(symmetrize(xi) == expected);
    }
    PlainPolynomial x1x2(2);
    x1x2.add_term({1, 1}, 1);
    OrderStatPolynomial prod(2);
    prod.add_term({{1, 1}, {2, 1}}, 1);
    CHECK(symmetrize(x1x2) == prod);

    PlainPolynomial sq(2);
    sq.add_term({2, 0}, 1);
    OrderStatPolynomial half(2);
    half.add_term({{1, 2}}, q(1, 2));
    half.add_term({{2, 2}}, q(1, 2));
    CHECK(symmetrize(sq) == half);
  }

  TEST_CASE("symmetrize matches the permutation average and is idempotent") {
    for (int trial = 0; trial < 60; ++trial) {
      const unsigned n = testing::uniform_int(1, 4);
      const auto f = testing::random_plain_polynomial(n);
      const auto sym = symmetrize(f);
      for (int p = 0; p < 5; ++p) {
        const auto x = random_point(n);
        const double brute = testing::brute_force_symmetrized([&](std::span<const double> y) { return f.evaluate(y); }, x);
        CHECK(std::abs(sym.evaluate(x) - brute) <= 1e-12);
      }
      // Sym(f) written in plain variables re-symmetrizes to the same canonical form.
      PlainPolynomial plain_sym(n);
      std::vector<unsigned> perm(n);
      std::iota(perm.begin(), perm.end(), 0u);
      unsigned count = 0;
      do {
        plain_sym += f.permuted(perm);
        ++count;
      } while (std::next_permutation(perm.begin(), perm.end()));
      plain_sym *= q(1, count);
      CHECK(symmetrize(plain_sym) == sym);
    }
  }

  TEST_CASE("dualize") {
    for (unsigned n = 1; n <= 5; ++n) {
      CHECK(dualize(OrderStatPolynomial::order_statistic(n, 1)) == OrderStatPolynomial::order_statistic(n, n));
      auto mid = (OrderStatPolynomial::order_statistic(n, 1) + OrderStatPolynomial::order_statistic(n, n)) * q(1, 2);
      CHECK(dualize(mid) == mid);
    }
    OrderStatPolynomial prod(2);
    prod.add_term({{1, 1}, {2, 1}}, 1);
    const auto d = dualize(prod);
    for (int p = 0; p < 100; ++p) {
      const auto x = random_point(2);
      const double expected = 1.0 - (1.0 - x[0]) * (1.0 - x[1]);
      CHECK(std::abs(d.evaluate(x) - expected) <= 1e-12);
    }
    for (int trial = 0; trial < 50; ++trial) {
      const unsigned n = testing::uniform_int(1, 5);
      const auto f = testing::random_orderstat_polynomial(n);
      CHECK(dualize(dualize(f)) == f);
      const auto x = random_point(n);
      std::vector<double> flipped(n);
      for (unsigned i = 0; i < n; ++i) flipped[i] = 1.0 - x[i];
      CHECK(std::abs(dualize(f).evaluate(x) - (1.0 - f.evaluate(flipped))) <= 1e-10);
    }
  }

  TEST_CASE("expand_subset_sum") {
    CHECK(expand_subset_sum(2, 1, 1) == std::vector<Integer>{1, 1});
    CHECK(expand_subset_sum(3, 2, 1) == std::vector<Integer>{2, 1, 0});
    CHECK(expand_subset_sum(3, 2, 2) == std::vector<Integer>{0, 1, 2});
    CHECK_THROWS_AS(expand_subset_sum(3, 2, 3), DomainError);
    CHECK_THROWS_AS(expand_subset_sum(3, 4, 1), DomainError);
    CHECK_THROWS_AS(expand_subset_sum(3, 2, 0), DomainError);
    for (unsigned n = 1; n <= 5; ++n)
      for (unsigned s = 1; s <= n; ++s)
        for (unsigned k = 1; k <= s; ++k) {
          const auto c = expand_subset_sum(n, s, k);
          for (int p = 0; p < 20; ++p) {
            const auto x = random_point(n);
            const auto sorted = sorted_copy(x);
            double lhs = 0.0;
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
              if (static_cast<unsigned>(std::popcount(m)) == s) lhs += eval_subset_order_stat(x, m, k);
            double rhs = 0.0;
            for (unsigned j = 0; j < n; ++j) rhs += c[j].get_d() * sorted[j];
            CHECK(std::abs(lhs - rhs) <= 1e-12);
          }
        }
  }

  TEST_CASE("expand_min_max") {
    const auto via_max = expand_min_max(2, 1, ExtremeMode::ViaMax);
    const auto via_min = expand_min_max(2, 2, ExtremeMode::ViaMin);
    for (int p = 0; p < 100; ++p) {
      const auto x = random_point(2);
      CHECK(std::abs(via_max.evaluate(x) - (x[0] + x[1] - std::max(x[0], x[1]))) <= 1e-15);
      CHECK(std::abs(via_min.evaluate(x) - (x[0] + x[1] - std::min(x[0], x[1]))) <= 1e-15);
    }
    const auto c = expand_min_max(3, 2, ExtremeMode::ViaMax);
    std::map<std::uint64_t, Rational> coeffs;
    for (const auto& t : c.terms) {
      CHECK(t.rank == static_cast<unsigned>(std::popcount(t.subset)));
      coeffs[t.subset] += t.coefficient;
    }
    CHECK(coeffs[0b011] == 1);
    CHECK(coeffs[0b101] == 1);
    CHECK(coeffs[0b110] == 1);
    CHECK(coeffs[0b111] == -2);
    CHECK(coeffs[0b001] == 0);
    CHECK_THROWS_AS(expand_min_max(3, 0, ExtremeMode::ViaMin), DomainError);
    CHECK_THROWS_AS(expand_min_max(3, 4, ExtremeMode::ViaMax), DomainError);
    for (unsigned n = 1; n <= 5; ++n)
      for (unsigned k = 1; k <= n; ++k)
        for (auto mode : {ExtremeMode::ViaMax, ExtremeMode::ViaMin}) {
          const auto comb = expand_min_max(n, k, mode);
          for (int p = 0; p < 1000; ++p) {
            const auto x = random_point(n);
            CHECK(std::abs(comb.evaluate(x) - eval_order_stat(x, k)) <= 1e-12);
          }
        }
  }
}
