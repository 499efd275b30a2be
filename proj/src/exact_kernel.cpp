#include "osinf/exact_kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "osinf/errors.hpp"

namespace osinf {

double eval_order_stat(std::span<const double> x, unsigned k) {
  const auto n = static_cast<unsigned>(x.size());
  if (k > n + 1)
    throw DomainError("order statistic rank " + std::to_string(k) + " outside [0, " + std::to_string(n + 1) + "]");
  if (k == 0) return 0.0;
  if (k == n + 1) return 1.0;
  std::vector<double> tmp(x.begin(), x.end());
  std::nth_element(tmp.begin(), tmp.begin() + (k - 1), tmp.end());
  return tmp[k - 1];
}

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return s;
}

unsigned total_degree(const Exponents& e) {
  unsigned d = 0;
  for (const auto& sp : e) d += sp.power;
  return d;
}

Exponents multiply_exponents(const Exponents& a, const Exponents& b) {
  Exponents out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->slot < ib->slot)) {
      out.push_back(*ia++);
    } else if (ia == a.end() || ib->slot < ia->slot) {
      out.push_back(*ib++);
    } else {
      out.push_back({ia->slot, ia->power + ib->power});
      ++ia;
      ++ib;
    }
  }
  return out;
}

namespace {

void validate_exponents(unsigned arity, const Exponents& e) {
  unsigned prev = 0;
  for (const auto& sp : e) {
    if (sp.slot < 1 || sp.slot > arity)
      throw DomainError("exponent slot " + std::to_string(sp.slot) + " outside [1, " + std::to_string(arity) + "]");
    if (sp.slot <= prev) throw DomainError("exponent slots must be strictly ascending");
    if (sp.power == 0) throw DomainError("zero exponents must be omitted");
    prev = sp.slot;
  }
}

double product_sorted(std::span<const double> sorted, const Exponents& e) {
  double v = 1.0;
  for (const auto& sp : e) {
    const double base = sorted[sp.slot - 1];
    for (unsigned p = 0; p < sp.power; ++p) v *= base;
  }
  return v;
}

}  // namespace

OrderStatMonomial::OrderStatMonomial(unsigned arity, Exponents exponents, Rational coefficient)
    : arity_(arity), exponents_(std::move(exponents)), coefficient_(std::move(coefficient)) {
  if (arity_ == 0) throw DomainError("arity must be positive");
  validate_exponents(arity_, exponents_);
}

double OrderStatMonomial::evaluate(std::span<const double> x) const {
  if (x.size() != arity_) throw DomainError("point dimension does not match arity");
  return evaluate_sorted(sorted_copy(x));
}

double OrderStatMonomial::evaluate_sorted(std::span<const double> sorted) const {
  return coefficient_.get_d() * product_sorted(sorted, exponents_);
}

OrderStatPolynomial::OrderStatPolynomial(unsigned arity, Rational constant)
    : arity_(arity), constant_(std::move(constant)) {
  if (arity_ == 0) throw DomainError("arity must be positive");
}

OrderStatPolynomial OrderStatPolynomial::order_statistic(unsigned arity, unsigned k) {
  if (k > arity + 1)
    throw DomainError("order statistic rank " + std::to_string(k) + " outside [0, " + std::to_string(arity + 1) + "]");
  OrderStatPolynomial p(arity);
  if (k == arity + 1) {
    p.constant_ = 1;
  } else if (k > 0) {
    p.add_term({{k, 1}}, 1);
  }
  return p;
}

std::vector<OrderStatMonomial> OrderStatPolynomial::monomials() const {
  std::vector<OrderStatMonomial> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) out.emplace_back(arity_, e, c);
  return out;
}

unsigned OrderStatPolynomial::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

void OrderStatPolynomial::add_term(const Exponents& exponents, const Rational& coefficient) {
  if (exponents.empty()) {
    constant_ += coefficient;
    return;
  }
  validate_exponents(arity_, exponents);
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponents, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

double OrderStatPolynomial::evaluate(std::span<const double> x) const {
  if (x.size() != arity_) throw DomainError("point dimension does not match arity");
  return evaluate_sorted(sorted_copy(x));
}

double OrderStatPolynomial::evaluate_sorted(std::span<const double> sorted) const {
  double v = constant_.get_d();
  for (const auto& [e, c] : terms_) v += c.get_d() * product_sorted(sorted, e);
  return v;
}

OrderStatPolynomial& OrderStatPolynomial::operator+=(const OrderStatPolynomial& other) {
  if (other.arity_ != arity_) throw DomainError("arity mismatch in polynomial sum");
  constant_ += other.constant_;
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

OrderStatPolynomial& OrderStatPolynomial::operator-=(const OrderStatPolynomial& other) {
  if (other.arity_ != arity_) throw DomainError("arity mismatch in polynomial difference");
  constant_ -= other.constant_;
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

OrderStatPolynomial& OrderStatPolynomial::operator*=(const Rational& scale) {
  if (scale == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  constant_ *= scale;
  for (auto& [e, c] : terms_) c *= scale;
  return *this;
}

OrderStatPolynomial operator*(const OrderStatPolynomial& a, const OrderStatPolynomial& b) {
  if (a.arity_ != b.arity_) throw DomainError("arity mismatch in polynomial product");
  OrderStatPolynomial out(a.arity_, a.constant_ * b.constant_);
  if (b.constant_ != 0)
    for (const auto& [e, c] : a.terms_) out.add_term(e, c * b.constant_);
  if (a.constant_ != 0)
    for (const auto& [e, c] : b.terms_) out.add_term(e, c * a.constant_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add_term(multiply_exponents(ea, eb), ca * cb);
  return out;
}

bool operator==(const OrderStatPolynomial& a, const OrderStatPolynomial& b) {
  return a.arity_ == b.arity_ && a.constant_ == b.constant_ && a.terms_ == b.terms_;
}

void PlainPolynomial::add_term(std::vector<unsigned> exponents, const Rational& coefficient) {
  if (exponents.size() != arity_) throw DomainError("plain exponent vector length does not match arity");
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(exponents), coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

double PlainPolynomial::evaluate(std::span<const double> x) const {
  if (x.size() != arity_) throw DomainError("point dimension does not match arity");
  double total = 0.0;
  for (const auto& [e, c] : terms_) {
    double v = c.get_d();
    for (unsigned i = 0; i < arity_; ++i)
      for (unsigned p = 0; p < e[i]; ++p) v *= x[i];
    total += v;
  }
  return total;
}

Rational PlainPolynomial::integral() const {
  Rational total = 0;
  for (const auto& [e, c] : terms_) {
    Integer den = 1;
    for (unsigned p : e) den *= p + 1;
    total += c / Rational(den);
  }
  total.canonicalize();
  return total;
}

PlainPolynomial PlainPolynomial::permuted(std::span<const unsigned> perm) const {
  if (perm.size() != arity_) throw DomainError("permutation length does not match arity");
  // pi(f)(x) = f(x_{perm[0]}, ...): variable slot i of f now reads x_{perm[i]}.
  PlainPolynomial out(arity_);
  for (const auto& [e, c] : terms_) {
    std::vector<unsigned> moved(arity_, 0);
    for (unsigned i = 0; i < arity_; ++i) moved[perm[i]] += e[i];
    out.add_term(std::move(moved), c);
  }
  return out;
}

PlainPolynomial& PlainPolynomial::operator+=(const PlainPolynomial& other) {
  if (other.arity_ != arity_) throw DomainError("arity mismatch in polynomial sum");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

PlainPolynomial& PlainPolynomial::operator*=(const Rational& scale) {
  if (scale == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= scale;
  return *this;
}

PlainPolynomial operator*(const PlainPolynomial& a, const PlainPolynomial& b) {
  if (a.arity_ != b.arity_) throw DomainError("arity mismatch in polynomial product");
  PlainPolynomial out(a.arity_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      std::vector<unsigned> e(ea);
      for (unsigned i = 0; i < a.arity_; ++i) e[i] += eb[i];
      out.add_term(std::move(e), ca * cb);
    }
  return out;
}

double eval_subset_order_stat(std::span<const double> x, std::uint64_t subset, unsigned rank) {
  std::vector<double> vals;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (subset & (std::uint64_t{1} << i)) vals.push_back(x[i]);
  if (rank < 1 || rank > vals.size())
    throw DomainError("subset rank " + std::to_string(rank) + " outside [1, " + std::to_string(vals.size()) + "]");
  std::nth_element(vals.begin(), vals.begin() + (rank - 1), vals.end());
  return vals[rank - 1];
}

double SignedSubsetCombination::evaluate(std::span<const double> x) const {
  double total = 0.0;
  for (const auto& t : terms) total += t.coefficient.get_d() * eval_subset_order_stat(x, t.subset, t.rank);
  return total;
}

Rational moment(unsigned arity, const OrderStatMonomial& monomial) {
  if (monomial.arity() != arity) throw DomainError("monomial arity does not match n");
  return moment(monomial);
}

Rational moment(const OrderStatMonomial& monomial) {
  // n!/(n+C)! * prod_j (k_j - 1 + C_j)! / (k_j - 1 + C_{j-1})!, C_j the partial
  // exponent sums in ascending slot order.
  const unsigned n = monomial.arity();
  Integer num = 1;
  unsigned partial = 0;
  for (const auto& sp : monomial.exponents()) {
    const unsigned lo = sp.slot - 1 + partial;
    partial += sp.power;
    num *= rising_range(lo, sp.slot - 1 + partial);
  }
  Rational value(num, rising_range(n, n + partial));
  value.canonicalize();
  return value * monomial.coefficient();
}

Rational inner_product_exact(const OrderStatPolynomial& f, const OrderStatPolynomial& g) {
  if (f.arity() != g.arity())
    throw DomainError("inner product of arity " + std::to_string(f.arity()) + " and " + std::to_string(g.arity()));
  const unsigned n = f.arity();
  Rational total = f.constant() * g.constant();
  if (g.constant() != 0)
    for (const auto& [e, c] : f.terms()) total += g.constant() * moment(OrderStatMonomial(n, e, c));
  if (f.constant() != 0)
    for (const auto& [e, c] : g.terms()) total += f.constant() * moment(OrderStatMonomial(n, e, c));
  for (const auto& [ef, cf] : f.terms())
    for (const auto& [eg, cg] : g.terms()) total += moment(OrderStatMonomial(n, multiply_exponents(ef, eg), cf * cg));
  total.canonicalize();
  return total;
}

Rational integral_exact(const OrderStatPolynomial& f) {
  return inner_product_exact(f, OrderStatPolynomial(f.arity(), 1));
}

OrderStatPolynomial symmetrize(const PlainPolynomial& f) {
  const unsigned n = f.arity();
  OrderStatPolynomial out(n);
  for (const auto& [plain, coef] : f.terms()) {
    // Every distinct arrangement of the exponent multiset over the sorted
    // slots occurs equally often among the n! permutations.
    std::vector<unsigned> arrangement(plain);
    std::sort(arrangement.begin(), arrangement.end());
    std::vector<Exponents> arrangements;
    do {
      Exponents e;
      for (unsigned j = 0; j < n; ++j)
        if (arrangement[j] > 0) e.push_back({j + 1, arrangement[j]});
      arrangements.push_back(std::move(e));
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    const Rational weight = coef / Rational(static_cast<long>(arrangements.size()));
    for (const auto& e : arrangements) out.add_term(e, weight);
  }
  return out;
}

OrderStatPolynomial dualize(const OrderStatPolynomial& f) {
  const unsigned n = f.arity();
  // f(1 - x): x_(k) of (1 - x) is 1 - x_(n-k+1).
  OrderStatPolynomial reflected(n, f.constant());
  for (const auto& [e, c] : f.terms()) {
    OrderStatPolynomial product(n, c);
    for (const auto& sp : e) {
      const unsigned mirrored = n - sp.slot + 1;
      OrderStatPolynomial factor(n);
      for (unsigned i = 0; i <= sp.power; ++i) {
        Rational coeff(binomial(sp.power, i));
        if (i % 2 == 1) coeff = -coeff;
        if (i == 0)
          factor.add_constant(coeff);
        else
          factor.add_term({{mirrored, i}}, coeff);
      }
      product = product * factor;
    }
    reflected += product;
  }
  OrderStatPolynomial dual(n, 1);
  dual -= reflected;
  return dual;
}

std::vector<Integer> expand_subset_sum(unsigned n, unsigned s, unsigned k) {
  if (!(1 <= k && k <= s && s <= n))
    throw DomainError("expand_subset_sum requires 1 <= k <= s <= n (got n=" + std::to_string(n) +
                      ", s=" + std::to_string(s) + ", k=" + std::to_string(k) + ")");
  std::vector<Integer> coeffs(n, 0);
  for (unsigned j = k; j <= n; ++j) coeffs[j - 1] = binomial(j - 1, k - 1) * binomial(n - j, s - k);
  return coeffs;
}

SignedSubsetCombination expand_min_max(unsigned n, unsigned k, ExtremeMode mode) {
  if (n == 0 || n > 62) throw DomainError("expand_min_max supports 1 <= n <= 62");
  if (k < 1 || k > n) throw DomainError("rank " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  SignedSubsetCombination out;
  out.arity = n;
  const std::uint64_t full = (std::uint64_t{1} << n);
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    const auto size = static_cast<unsigned>(std::popcount(mask));
    if (mode == ExtremeMode::ViaMax) {
      if (size < k) continue;
      Rational c(binomial(size - 1, k - 1));
      if ((size - k) % 2 == 1) c = -c;
      out.terms.push_back({mask, size, c});
    } else {
      if (size < n - k + 1) continue;
      Rational c(binomial(size - 1, n - k));
      if ((size - (n - k + 1)) % 2 == 1) c = -c;
      out.terms.push_back({mask, 1, c});
    }
  }
  return out;
}

}  // namespace osinf
