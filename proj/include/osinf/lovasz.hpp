#pragma once

// Set functions on [n], their Mobius transform, Lovasz-extension evaluation,
// and the closed-form influence index of a Lovasz extension.
//
// Subsets are bitmasks with bit i-1 <=> element i.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "osinf/exact_kernel.hpp"
#include "osinf/rational.hpp"

namespace osinf {

inline constexpr unsigned kMaxSetFunctionArity = 24;

class SetFunction {
 public:
  SetFunction(unsigned arity, std::vector<Rational> values);

  static SetFunction from_vertices(unsigned arity, const std::function<Rational(std::uint64_t)>& v);

  unsigned arity() const { return arity_; }
  std::uint64_t full_set() const { return (std::uint64_t{1} << arity_) - 1; }
  const Rational& operator[](std::uint64_t subset) const { return values_[subset]; }
  const std::vector<Rational>& values() const { return values_; }
  double value_d(std::uint64_t subset) const { return values_d_[subset]; }

  friend bool operator==(const SetFunction& a, const SetFunction& b) { return a.arity_ == b.arity_ && a.values_ == b.values_; }

 private:
  unsigned arity_;
  std::vector<Rational> values_;
  std::vector<double> values_d_;
};

struct MobiusRepresentation {
  unsigned arity;
  std::vector<Rational> values;
};

// v-bar(s) and m-bar(s), s = 0..n.
struct LevelAverages {
  std::vector<Rational> v_bar;
  std::vector<Rational> m_bar;
};

MobiusRepresentation mobius(const SetFunction& v);
SetFunction zeta(const MobiusRepresentation& m);
LevelAverages level_averages(const SetFunction& v);

// Singer's telescoping form on the simplex containing x.
double eval_lovasz(const SetFunction& v, std::span<const double> x);
// sum_S m(S) min_{i in S} x_i.
double eval_lovasz_mobius(const MobiusRepresentation& m, std::span<const double> x);
// D_(k) f = v({pi(k..n)}) - v({pi(k+1..n)}) on the open simplex of x.
double lovasz_directional_derivative(const SetFunction& v, std::span<const double> x, unsigned k);

// v-bar(n-k+1) - v-bar(n-k).
Rational influence_lovasz(const SetFunction& v, unsigned k);
// sum_{s=1}^{n-k+1} C(n-k, s-1) m-bar(s).
Rational influence_lovasz_mobius(const LevelAverages& levels, unsigned n, unsigned k);
std::vector<Rational> influence_profile_lovasz(const SetFunction& v);

// I(os_{j:S}, k): hypergeometric mass C(k-1,j-1) C(n-k,|S|-j) / C(n,|S|).
Rational influence_os_subset(unsigned n, std::uint64_t subset, unsigned rank, unsigned k);

// Vertex set function of os_{j:S}: 1 iff at least |S|-j+1 members of S are in A.
SetFunction subset_order_stat_set_function(unsigned n, std::uint64_t subset, unsigned rank);

struct EqualInfluenceDiagnosis {
  bool equal = false;
  bool flat_profile = false;             // I(f,k) = I(f,1) for all k
  bool arithmetic_progression = false;   // v-bar in arithmetic progression
  bool vanishing_higher_mobius = false;  // m-bar(s) = 0 for s >= 2
  std::optional<unsigned> first_violated_profile_rank;
  std::optional<unsigned> first_violated_progression_level;
  std::optional<unsigned> first_violated_mobius_level;
};

EqualInfluenceDiagnosis equal_influence_class(const SetFunction& v);

// Sym(f) = f(0) + sum_i I(f,i) os_i for a Lovasz extension f.
struct ShiftedLStatistic {
  Rational constant;
  std::vector<Rational> slopes;

  double evaluate(std::span<const double> x) const;
};

ShiftedLStatistic symmetric_part(const SetFunction& v);

// Sym(f) as an order-statistic polynomial, built from the Mobius form and the
// subset-sum expansion of subset minima (independent of influence_lovasz).
OrderStatPolynomial lovasz_symmetrized_polynomial(const SetFunction& v);

// <f,f> for the Lovasz extension, exact. Enumerates nested pairs B <= A (3^n).
Rational lovasz_norm_sq(const SetFunction& v);
inline constexpr unsigned kMaxLovaszNormArity = 14;

// v^d(S) = 1 - v([n] \ S): the vertex function of f^d.
SetFunction dual_set_function(const SetFunction& v);

// Set function of pi(f), pi(f)(x) = f(x_{perm[0]}, ..., x_{perm[n-1]}), 0-based perm.
SetFunction relabeled(const SetFunction& v, std::span<const unsigned> perm);

}  // namespace osinf
