#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "osinf/exact_kernel.hpp"
#include "osinf/lovasz.hpp"
#include "osinf/montecarlo.hpp"

namespace testing {

using osinf::Rational;

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline unsigned uniform_int(unsigned lo, unsigned hi) {
  return std::uniform_int_distribution<unsigned>(lo, hi)(rng());
}

inline double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng()); }

// Small rationals p/q with |p| <= 6, q in [1, 5].
inline Rational small_rational() {
  const int p = static_cast<int>(uniform_int(0, 12)) - 6;
  const unsigned q = uniform_int(1, 5);
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline std::vector<double> random_point(unsigned n) {
  std::vector<double> x(n);
  for (auto& v : x) v = uniform01();
  return x;
}

inline osinf::OrderStatPolynomial random_orderstat_polynomial(unsigned n, unsigned max_terms = 3,
                                                              unsigned max_power = 2) {
  osinf::OrderStatPolynomial p(n, small_rational());
  const unsigned terms = uniform_int(1, max_terms);
  for (unsigned t = 0; t < terms; ++t) {
    osinf::Exponents e;
    for (unsigned slot = 1; slot <= n; ++slot) {
      const unsigned power = uniform_int(0, max_power);
      if (power > 0 && uniform_int(0, 1) == 1) e.push_back({slot, power});
    }
    if (e.empty()) e.push_back({uniform_int(1, n), 1});
    p.add_term(e, small_rational());
  }
  return p;
}

inline osinf::PlainPolynomial random_plain_polynomial(unsigned n, unsigned max_terms = 3, unsigned max_power = 2) {
  osinf::PlainPolynomial p(n);
  const unsigned terms = uniform_int(1, max_terms);
  for (unsigned t = 0; t < terms; ++t) {
    std::vector<unsigned> e(n);
    for (auto& v : e) v = uniform_int(0, max_power);
    p.add_term(e, small_rational());
  }
  return p;
}

inline osinf::SetFunction random_set_function(unsigned n) {
  std::vector<Rational> v(std::size_t{1} << n);
  for (auto& q : v) q = small_rational();
  return osinf::SetFunction(n, std::move(v));
}

// Nondecreasing set function with v(empty) = 0, v(full) = 1.
inline osinf::SetFunction random_capacity(unsigned n) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<Rational> v(size, Rational(0));
  for (std::size_t s = 1; s < size; ++s) {
    Rational lo = 0;
    for (unsigned i = 0; i < n; ++i)
      if (s & (std::size_t{1} << i)) lo = std::max(lo, v[s & ~(std::size_t{1} << i)]);
    v[s] = lo + Rational(uniform_int(0, 4), 8);
  }
  const Rational top = v[size - 1];
  for (auto& q : v) {
    if (top != 0) q /= top;
    q.canonicalize();
  }
  if (top == 0) v[size - 1] = 1;
  return osinf::SetFunction(n, std::move(v));
}

inline std::vector<unsigned> random_permutation(unsigned n) {
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), rng());
  return perm;
}

// Sym(f) evaluated by brute force over all n! permutations.
template <class F>
double brute_force_symmetrized(const F& f, std::span<const double> x) {
  const unsigned n = static_cast<unsigned>(x.size());
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::vector<double> y(n);
  double total = 0.0;
  unsigned count = 0;
  do {
    for (unsigned i = 0; i < n; ++i) y[i] = x[perm[i]];
    total += f(y);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / count;
}

}  // namespace testing
