#pragma once

// Exact rational core: order statistics of points in [0,1]^n, polynomials in
// order statistics, the closed-form moment of an order-statistic monomial over
// the unit cube, symmetrization of plain polynomials, dualization, and the
// subset min/max expansion identities.

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "osinf/rational.hpp"

namespace osinf {

// x_(k) of the point; k = 0 gives 0 and k = n+1 gives 1. Ties are resolved by
// sorting, so equal coordinates occupy consecutive ranks.
double eval_order_stat(std::span<const double> x, unsigned k);

// Ascending copy of the point.
std::vector<double> sorted_copy(std::span<const double> x);

struct SlotPower {
  unsigned slot;   // order-statistic rank, 1-based
  unsigned power;  // >= 1
  auto operator<=>(const SlotPower&) const = default;
};

// Sparse exponent map, ascending by slot, no zero powers.
using Exponents = std::vector<SlotPower>;

unsigned total_degree(const Exponents& e);
Exponents multiply_exponents(const Exponents& a, const Exponents& b);

class OrderStatMonomial {
 public:
  OrderStatMonomial(unsigned arity, Exponents exponents, Rational coefficient = 1);

  unsigned arity() const { return arity_; }
  const Exponents& exponents() const { return exponents_; }
  const Rational& coefficient() const { return coefficient_; }

  double evaluate(std::span<const double> x) const;
  double evaluate_sorted(std::span<const double> sorted) const;

 private:
  unsigned arity_;
  Exponents exponents_;
  Rational coefficient_;
};

// Canonical polynomial in x_(1..n): terms keyed by exponent map (merged, no zero
// coefficients) plus a separate constant.
class OrderStatPolynomial {
 public:
  explicit OrderStatPolynomial(unsigned arity, Rational constant = 0);

  // os_k for k in [0, n+1] (os_0 = 0, os_{n+1} = 1).
  static OrderStatPolynomial order_statistic(unsigned arity, unsigned k);

  unsigned arity() const { return arity_; }
  const Rational& constant() const { return constant_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  std::vector<OrderStatMonomial> monomials() const;
  bool is_constant() const { return terms_.empty(); }
  unsigned degree() const;

  void add_term(const Exponents& exponents, const Rational& coefficient);
  void add_constant(const Rational& c) { constant_ += c; }

  double evaluate(std::span<const double> x) const;
  double evaluate_sorted(std::span<const double> sorted) const;

  OrderStatPolynomial& operator+=(const OrderStatPolynomial& other);
  OrderStatPolynomial& operator-=(const OrderStatPolynomial& other);
  OrderStatPolynomial& operator*=(const Rational& scale);
  friend OrderStatPolynomial operator+(OrderStatPolynomial a, const OrderStatPolynomial& b) { return a += b; }
  friend OrderStatPolynomial operator-(OrderStatPolynomial a, const OrderStatPolynomial& b) { return a -= b; }
  friend OrderStatPolynomial operator*(OrderStatPolynomial a, const Rational& s) { return a *= s; }
  friend OrderStatPolynomial operator*(const Rational& s, OrderStatPolynomial a) { return a *= s; }
  friend OrderStatPolynomial operator*(const OrderStatPolynomial& a, const OrderStatPolynomial& b);
  friend bool operator==(const OrderStatPolynomial& a, const OrderStatPolynomial& b);

 private:
  unsigned arity_;
  Rational constant_;
  std::map<Exponents, Rational> terms_;
};

// Polynomial in the plain coordinates x_1..x_n. Exponent vectors are dense
// (length n); the all-zero vector carries the constant.
class PlainPolynomial {
 public:
  explicit PlainPolynomial(unsigned arity) : arity_(arity) {}

  unsigned arity() const { return arity_; }
  const std::map<std::vector<unsigned>, Rational>& terms() const { return terms_; }

  void add_term(std::vector<unsigned> exponents, const Rational& coefficient);
  double evaluate(std::span<const double> x) const;
  Rational integral() const;
  // pi(f)(x) = f(x_{perm[0]}, ..., x_{perm[n-1]}) with 0-based perm.
  PlainPolynomial permuted(std::span<const unsigned> perm) const;

  PlainPolynomial& operator+=(const PlainPolynomial& other);
  PlainPolynomial& operator*=(const Rational& scale);
  friend PlainPolynomial operator*(const PlainPolynomial& a, const PlainPolynomial& b);
  friend bool operator==(const PlainPolynomial&, const PlainPolynomial&) = default;

 private:
  unsigned arity_;
  std::map<std::vector<unsigned>, Rational> terms_;
};

// One term coeff * x_{rank:S}, S given as a bitmask (bit i-1 <=> element i).
struct SubsetTerm {
  std::uint64_t subset;
  unsigned rank;
  Rational coefficient;
};

struct SignedSubsetCombination {
  unsigned arity = 0;
  std::vector<SubsetTerm> terms;

  double evaluate(std::span<const double> x) const;
};

// x_{rank:S}: the rank-th smallest coordinate among those selected by S.
double eval_subset_order_stat(std::span<const double> x, std::uint64_t subset, unsigned rank);

// Integral over [0,1]^n of the monomial (coefficient included).
Rational moment(unsigned arity, const OrderStatMonomial& monomial);
Rational moment(const OrderStatMonomial& monomial);

Rational inner_product_exact(const OrderStatPolynomial& f, const OrderStatPolynomial& g);
Rational integral_exact(const OrderStatPolynomial& f);

// Sym(f) expressed in order statistics.
OrderStatPolynomial symmetrize(const PlainPolynomial& f);

// f^d(x) = 1 - f(1 - x), re-expanded in order statistics.
OrderStatPolynomial dualize(const OrderStatPolynomial& f);

// Coefficients c_1..c_n with sum_{|S|=s} x_{k:S} = sum_j c_j x_{j:n}.
std::vector<Integer> expand_subset_sum(unsigned n, unsigned s, unsigned k);

enum class ExtremeMode { ViaMax, ViaMin };

// x_{k:n} written through subset maxima (ViaMax) or subset minima (ViaMin).
SignedSubsetCombination expand_min_max(unsigned n, unsigned k, ExtremeMode mode);

}  // namespace osinf
