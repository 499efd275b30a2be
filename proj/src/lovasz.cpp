#include "osinf/lovasz.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "osinf/errors.hpp"
#include "osinf/projection.hpp"

namespace osinf {

namespace {

void check_arity(unsigned n) {
  if (n < 1 || n > kMaxSetFunctionArity)
    throw DomainError("set-function arity " + std::to_string(n) + " outside [1, " +
                      std::to_string(kMaxSetFunctionArity) + "]");
}

void check_rank(unsigned n, unsigned k) {
  if (k < 1 || k > n) throw DomainError("rank " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
}

unsigned popcount(std::uint64_t m) { return static_cast<unsigned>(std::popcount(m)); }

// Indices 0..n-1 ordered so that x is ascending along them (stable on ties).
std::vector<unsigned> ascending_order(std::span<const double> x) {
  std::vector<unsigned> order(x.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](unsigned a, unsigned b) { return x[a] < x[b]; });
  return order;
}

}  // namespace

SetFunction::SetFunction(unsigned arity, std::vector<Rational> values) : arity_(arity), values_(std::move(values)) {
  check_arity(arity_);
  if (values_.size() != (std::size_t{1} << arity_))
    throw DomainError("set function of arity " + std::to_string(arity_) + " needs " +
                      std::to_string(std::size_t{1} << arity_) + " values, got " + std::to_string(values_.size()));
  values_d_.reserve(values_.size());
  for (auto& q : values_) {
    q.canonicalize();
    values_d_.push_back(q.get_d());
  }
}

SetFunction SetFunction::from_vertices(unsigned arity, const std::function<Rational(std::uint64_t)>& v) {
  check_arity(arity);
  std::vector<Rational> values(std::size_t{1} << arity);
  for (std::uint64_t s = 0; s < values.size(); ++s) values[s] = v(s);
  return SetFunction(arity, std::move(values));
}

MobiusRepresentation mobius(const SetFunction& v) {
  const unsigned n = v.arity();
  std::vector<Rational> m = v.values();
  for (unsigned bit = 0; bit < n; ++bit) {
    const std::uint64_t b = std::uint64_t{1} << bit;
    for (std::uint64_t s = 0; s < m.size(); ++s)
      if (s & b) m[s] -= m[s ^ b];
  }
  return {n, std::move(m)};
}

SetFunction zeta(const MobiusRepresentation& m) {
  check_arity(m.arity);
  std::vector<Rational> v = m.values;
  for (unsigned bit = 0; bit < m.arity; ++bit) {
    const std::uint64_t b = std::uint64_t{1} << bit;
    for (std::uint64_t s = 0; s < v.size(); ++s)
      if (s & b) v[s] += v[s ^ b];
  }
  return SetFunction(m.arity, std::move(v));
}

namespace {

std::vector<Rational> level_average(unsigned n, const std::vector<Rational>& table) {
  std::vector<Rational> sums(n + 1, Rational(0));
  for (std::uint64_t s = 0; s < table.size(); ++s) sums[popcount(s)] += table[s];
  for (unsigned k = 0; k <= n; ++k) {
    sums[k] /= Rational(binomial(n, k));
    sums[k].canonicalize();
  }
  return sums;
}

}  // namespace

LevelAverages level_averages(const SetFunction& v) {
  return {level_average(v.arity(), v.values()), level_average(v.arity(), mobius(v).values)};
}

double eval_lovasz(const SetFunction& v, std::span<const double> x) {
  const unsigned n = v.arity();
  if (x.size() != n) throw DomainError("point dimension does not match arity");
  const auto order = ascending_order(x);
  // A_i = {pi(i), ..., pi(n)}; walk from the full set down to the empty set.
  std::uint64_t upper = v.full_set();
  double result = v.value_d(0);
  for (unsigned i = 0; i < n; ++i) {
    const std::uint64_t next = upper & ~(std::uint64_t{1} << order[i]);
    result += (v.value_d(upper) - v.value_d(next)) * x[order[i]];
    upper = next;
  }
  return result;
}

double eval_lovasz_mobius(const MobiusRepresentation& m, std::span<const double> x) {
  if (x.size() != m.arity) throw DomainError("point dimension does not match arity");
  double result = m.values[0].get_d();
  for (std::uint64_t s = 1; s < m.values.size(); ++s) {
    if (m.values[s] == 0) continue;
    double lo = 1.0;
    for (unsigned i = 0; i < m.arity; ++i)
      if (s & (std::uint64_t{1} << i)) lo = std::min(lo, x[i]);
    result += m.values[s].get_d() * lo;
  }
  return result;
}

double lovasz_directional_derivative(const SetFunction& v, std::span<const double> x, unsigned k) {
  const unsigned n = v.arity();
  check_rank(n, k);
  if (x.size() != n) throw DomainError("point dimension does not match arity");
  const auto order = ascending_order(x);
  std::uint64_t upper = v.full_set();
  for (unsigned i = 0; i + 1 < k; ++i) upper &= ~(std::uint64_t{1} << order[i]);
  const std::uint64_t next = upper & ~(std::uint64_t{1} << order[k - 1]);
  return v.value_d(upper) - v.value_d(next);
}

Rational influence_lovasz(const SetFunction& v, unsigned k) {
  const unsigned n = v.arity();
  check_rank(n, k);
  const auto v_bar = level_average(n, v.values());
  Rational r = v_bar[n - k + 1] - v_bar[n - k];
  r.canonicalize();
  return r;
}

Rational influence_lovasz_mobius(const LevelAverages& levels, unsigned n, unsigned k) {
  check_rank(n, k);
  if (levels.m_bar.size() != n + 1) throw DomainError("level averages do not match arity");
  Rational total = 0;
  for (unsigned s = 1; s <= n - k + 1; ++s) total += Rational(binomial(n - k, s - 1)) * levels.m_bar[s];
  total.canonicalize();
  return total;
}

std::vector<Rational> influence_profile_lovasz(const SetFunction& v) {
  const unsigned n = v.arity();
  const auto v_bar = level_average(n, v.values());
  std::vector<Rational> profile;
  profile.reserve(n);
  for (unsigned k = 1; k <= n; ++k) {
    Rational r = v_bar[n - k + 1] - v_bar[n - k];
    r.canonicalize();
    profile.push_back(r);
  }
  return profile;
}

Rational influence_os_subset(unsigned n, std::uint64_t subset, unsigned rank, unsigned k) {
  if (n < 1 || n > 62) throw DomainError("arity outside [1, 62]");
  if (subset == 0 || (subset >> n) != 0) throw DomainError("subset must be a nonempty subset of [n]");
  const unsigned s = popcount(subset);
  if (rank < 1 || rank > s) throw DomainError("rank " + std::to_string(rank) + " outside [1, " + std::to_string(s) + "]");
  check_rank(n, k);
  if (k < rank || k - rank > n - s) return 0;
  Rational r(binomial(k - 1, rank - 1) * binomial(n - k, s - rank), binomial(n, s));
  r.canonicalize();
  return r;
}

SetFunction subset_order_stat_set_function(unsigned n, std::uint64_t subset, unsigned rank) {
  check_arity(n);
  const unsigned s = popcount(subset);
  if (subset == 0 || (subset >> n) != 0) throw DomainError("subset must be a nonempty subset of [n]");
  if (rank < 1 || rank > s) throw DomainError("rank " + std::to_string(rank) + " outside [1, " + std::to_string(s) + "]");
  return SetFunction::from_vertices(n, [&](std::uint64_t a) {
    return Rational(popcount(a & subset) >= s - rank + 1 ? 1 : 0);
  });
}

EqualInfluenceDiagnosis equal_influence_class(const SetFunction& v) {
  const unsigned n = v.arity();
  const auto levels = level_averages(v);
  const auto profile = influence_profile_lovasz(v);
  EqualInfluenceDiagnosis d;
  for (unsigned k = 2; k <= n; ++k)
    if (profile[k - 1] != profile[0]) {
      d.first_violated_profile_rank = k;
      break;
    }
  const Rational step = levels.v_bar[1] - levels.v_bar[0];
  for (unsigned s = 2; s <= n; ++s)
    if (levels.v_bar[s] - levels.v_bar[s - 1] != step) {
      d.first_violated_progression_level = s;
      break;
    }
  for (unsigned s = 2; s <= n; ++s)
    if (levels.m_bar[s] != 0) {
      d.first_violated_mobius_level = s;
      break;
    }
  d.flat_profile = !d.first_violated_profile_rank;
  d.arithmetic_progression = !d.first_violated_progression_level;
  d.vanishing_higher_mobius = !d.first_violated_mobius_level;
  d.equal = d.flat_profile && d.arithmetic_progression && d.vanishing_higher_mobius;
  return d;
}

double ShiftedLStatistic::evaluate(std::span<const double> x) const {
  const auto sorted = sorted_copy(x);
  if (sorted.size() != slopes.size()) throw DomainError("point dimension does not match arity");
  double v = constant.get_d();
  for (std::size_t i = 0; i < sorted.size(); ++i) v += slopes[i].get_d() * sorted[i];
  return v;
}

ShiftedLStatistic symmetric_part(const SetFunction& v) {
  return {v[0], influence_profile_lovasz(v)};
}

OrderStatPolynomial lovasz_symmetrized_polynomial(const SetFunction& v) {
  const unsigned n = v.arity();
  const auto m = mobius(v);
  const auto m_bar = level_average(n, m.values);
  OrderStatPolynomial sym(n, m.values[0]);
  for (unsigned s = 1; s <= n; ++s) {
    if (m_bar[s] == 0) continue;
    const auto coeffs = expand_subset_sum(n, s, 1);
    for (unsigned j = 1; j <= n; ++j)
      if (coeffs[j - 1] != 0) sym.add_term({{j, 1}}, m_bar[s] * Rational(coeffs[j - 1]));
  }
  return sym;
}

Rational lovasz_norm_sq(const SetFunction& v) {
  const unsigned n = v.arity();
  if (n > kMaxLovaszNormArity)
    throw DomainError("exact Lovasz norm limited to n <= " + std::to_string(kMaxLovaszNormArity));
  // On the simplex of pi, f = sum_i d_i os_i with d_i = v(A_i) - v(A_{i+1}),
  // d_{n+1} = v(empty), A_i = {pi(i..n)}. Averaging over pi needs
  // E[v(A_i) v(A_j)], where (A_i, A_j) is a uniform nested pair of sizes
  // n-i+1 >= n-j+1.
  std::vector<std::vector<Rational>> pair_sums(n + 1, std::vector<Rational>(n + 1, Rational(0)));
  for (std::uint64_t a = 0; a <= v.full_set(); ++a) {
    if (v[a] == 0) continue;
    const unsigned size_a = popcount(a);
    for (std::uint64_t b = a;; b = (b - 1) & a) {
      if (v[b] != 0) pair_sums[size_a][popcount(b)] += v[a] * v[b];
      if (b == 0) break;
    }
  }
  const unsigned order = n + 1;
  // w_i = v(A_i), i = 1..n+1; |A_i| = n - i + 1.
  std::vector<std::vector<Rational>> ww(order, std::vector<Rational>(order));
  for (unsigned i = 1; i <= order; ++i)
    for (unsigned j = i; j <= order; ++j) {
      const unsigned a = n - i + 1;
      const unsigned b = n - j + 1;
      Rational e = pair_sums[a][b] / Rational(binomial(n, a) * binomial(a, b));
      e.canonicalize();
      ww[i - 1][j - 1] = e;
      ww[j - 1][i - 1] = e;
    }
  // E[d d^T] with d = D w, D bidiagonal.
  auto dd = [&](unsigned i, unsigned j) {
    auto term = [&](unsigned p, unsigned q) { return ww[p][q]; };
    Rational r = term(i, j);
    if (i < n) r -= term(i + 1, j);
    if (j < n) r -= term(i, j + 1);
    if (i < n && j < n) r += term(i + 1, j + 1);
    return r;
  };
  const GramSystem sys = gram_system(n);
  Rational total = 0;
  for (unsigned i = 0; i < order; ++i)
    for (unsigned j = 0; j < order; ++j) total += sys.gram(i, j) * dd(i, j);
  total.canonicalize();
  return total;
}

SetFunction dual_set_function(const SetFunction& v) {
  const std::uint64_t full = v.full_set();
  return SetFunction::from_vertices(v.arity(), [&](std::uint64_t s) { return Rational(1 - v[full & ~s]); });
}

SetFunction relabeled(const SetFunction& v, std::span<const unsigned> perm) {
  const unsigned n = v.arity();
  if (perm.size() != n) throw DomainError("permutation length does not match arity");
  // pi(f)(1_A) = f(1_B) with B = {i : perm[i] in A}.
  return SetFunction::from_vertices(n, [&](std::uint64_t a) {
    std::uint64_t b = 0;
    for (unsigned i = 0; i < n; ++i)
      if (a & (std::uint64_t{1} << perm[i])) b |= std::uint64_t{1} << i;
    return v[b];
  });
}

}  // namespace osinf
