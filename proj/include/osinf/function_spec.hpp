#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "osinf/closed_forms.hpp"
#include "osinf/exact_kernel.hpp"
#include "osinf/lovasz.hpp"
#include "osinf/montecarlo.hpp"

namespace osinf {

// f(x) = (prod_i x_i)^exponent, exponent > -1/2.
struct PowerProductSpec {
  unsigned arity = 0;
  double exponent = 1.0;
};

struct BlackBox {
  Evaluator evaluator;
  std::string name;
};

enum class FunctionKind { OrderStatPolynomial, PlainPolynomial, SetFunction, Multiplicative, PowerProduct, BlackBox };

std::string kind_name(FunctionKind kind);

// A function on [0,1]^n in one of the analysable classes.
class FunctionSpec {
 public:
  using Payload = std::variant<OrderStatPolynomial, PlainPolynomial, SetFunction, MultiplicativeSpec, PowerProductSpec, BlackBox>;

  FunctionSpec(Payload payload, std::string builtin = {});

  unsigned arity() const;
  FunctionKind kind() const;
  const Payload& payload() const { return payload_; }
  // Builtin name when the spec came from one ("variance", "product", ...), else empty.
  const std::string& builtin() const { return builtin_; }

  template <class T>
  const T* get() const {
    return std::get_if<T>(&payload_);
  }

 private:
  Payload payload_;
  std::string builtin_;
};

// Pointwise evaluator (with D_(k) f where the class provides it).
Evaluator make_evaluator(const FunctionSpec& f);

inline constexpr const char* kBuiltinNames[] = {"variance", "arithmetic-mean", "geometric-mean", "product",
                                                "min",      "max",             "median",         "conjunctive-example-6.1"};

// Builds a builtin function of arity n. The conjunctive example is binary.
FunctionSpec builtin_function(std::string_view name, unsigned n);

// Binary conjunctive aggregation function: 0 if max < 3/4, else min(x1, x2, 1/4).
double conjunctive_example(std::span<const double> x);

}  // namespace osinf
