#include "osinf/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "osinf/errors.hpp"

namespace osinf {

using nlohmann::json;

namespace {

constexpr unsigned kMaxSpecArity = 64;

std::string at(const std::string& base, std::string_view key) { return base + "." + std::string(key); }
std::string at(const std::string& base, std::size_t index) { return base + "[" + std::to_string(index) + "]"; }

const json& require(const json& obj, std::string_view key, const std::string& loc) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(at(loc, key), "missing required field");
  return *it;
}

Rational read_rational(const json& v, const std::string& loc) {
  try {
    if (v.is_number_integer()) {
      if (v.is_number_unsigned()) return Rational(Integer(std::to_string(v.get<std::uint64_t>())));
      return Rational(Integer(std::to_string(v.get<std::int64_t>())));
    }
    if (v.is_number_float()) return rational_from_double(v.get<double>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(loc, std::string("not a number: ") + e.what());
  }
  throw SpecError(loc, "expected a number or a rational string");
}

double read_double(const json& v, const std::string& loc) { return read_rational(v, loc).get_d(); }

unsigned read_unsigned(const json& v, const std::string& loc) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw SpecError(loc, "expected a nonnegative integer");
  return static_cast<unsigned>(v.get<std::int64_t>());
}

const json& require_array(const json& obj, std::string_view key, const std::string& loc) {
  const json& v = require(obj, key, loc);
  if (!v.is_array()) throw SpecError(at(loc, key), "expected an array");
  return v;
}

std::vector<unsigned> read_exponents(const json& v, unsigned n, const std::string& loc) {
  if (!v.is_array()) throw SpecError(loc, "expected an array of " + std::to_string(n) + " exponents");
  if (v.size() != n)
    throw SpecError(loc, "expected " + std::to_string(n) + " exponents, got " + std::to_string(v.size()));
  std::vector<unsigned> e;
  for (std::size_t i = 0; i < v.size(); ++i) e.push_back(read_unsigned(v[i], at(loc, i)));
  return e;
}

template <class AddTerm>
void read_terms(const json& doc, unsigned n, const AddTerm& add) {
  if (!doc.contains("terms")) return;
  const json& terms = require_array(doc, "terms", "$");
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string loc = at("$.terms", t);
    if (!terms[t].is_object()) throw SpecError(loc, "expected an object with coef and exponents");
    const Rational coef = read_rational(require(terms[t], "coef", loc), at(loc, "coef"));
    const auto e = read_exponents(require(terms[t], "exponents", loc), n, at(loc, "exponents"));
    add(e, coef);
  }
}

UnaryFactor read_factor(const json& v, const std::string& loc) {
  if (!v.is_object()) throw SpecError(loc, "expected a factor object");
  const json& type = require(v, "type", loc);
  if (!type.is_string()) throw SpecError(at(loc, "type"), "expected a string");
  const auto name = type.get<std::string>();
  if (name == "power") {
    const double scale = v.contains("scale") ? read_double(v["scale"], at(loc, "scale")) : 1.0;
    const double exponent = read_double(require(v, "exponent", loc), at(loc, "exponent"));
    if (!(exponent > -0.5)) throw SpecError(at(loc, "exponent"), "power exponent must exceed -1/2");
    return UnaryFactor::power(scale, exponent);
  }
  if (name == "polynomial") {
    const json& coeffs = require_array(v, "coefficients", loc);
    UnivariatePolynomial p;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      p.push_back(read_rational(coeffs[i], at(at(loc, "coefficients"), i)));
    return UnaryFactor::polynomial(std::move(p));
  }
  throw SpecError(at(loc, "type"), "unknown factor type '" + name + "' (expected power or polynomial)");
}

FunctionSpec parse_payload(const json& doc, const std::string& kind, unsigned n) {
  if (kind == "orderstat-polynomial") {
    OrderStatPolynomial p(n, doc.contains("constant") ? read_rational(doc["constant"], "$.constant") : Rational(0));
    read_terms(doc, n, [&](const std::vector<unsigned>& e, const Rational& c) {
      Exponents sparse;
      for (unsigned i = 0; i < n; ++i)
        if (e[i] > 0) sparse.push_back({i + 1, e[i]});
      if (sparse.empty()) p.add_constant(c);
      else p.add_term(sparse, c);
    });
    return FunctionSpec(std::move(p));
  }
  if (kind == "plain-polynomial") {
    PlainPolynomial p(n);
    if (doc.contains("constant")) p.add_term(std::vector<unsigned>(n, 0), read_rational(doc["constant"], "$.constant"));
    read_terms(doc, n, [&](const std::vector<unsigned>& e, const Rational& c) { p.add_term(e, c); });
    return FunctionSpec(std::move(p));
  }
  if (kind == "set-function") {
    if (n > kMaxSetFunctionArity)
      throw SpecError("$.arity", "set functions limited to n <= " + std::to_string(kMaxSetFunctionArity));
    const json& values = require_array(doc, "values", "$");
    const std::size_t expected = std::size_t{1} << n;
    if (values.size() != expected)
      throw SpecError("$.values", "expected 2^" + std::to_string(n) + " = " + std::to_string(expected) +
                                      " entries, got " + std::to_string(values.size()));
    std::vector<Rational> v;
    v.reserve(expected);
    for (std::size_t i = 0; i < values.size(); ++i) v.push_back(read_rational(values[i], at("$.values", i)));
    return FunctionSpec(SetFunction(n, std::move(v)));
  }
  if (kind == "multiplicative") {
    if (doc.contains("factor")) {
      if (doc.contains("factors")) throw SpecError("$", "give either factor or factors, not both");
      return FunctionSpec(MultiplicativeSpec::symmetric_of(read_factor(doc["factor"], "$.factor"), n));
    }
    const json& factors = require_array(doc, "factors", "$");
    if (factors.size() != n)
      throw SpecError("$.factors", "expected " + std::to_string(n) + " factors, got " + std::to_string(factors.size()));
    MultiplicativeSpec m{n, {}, false};
    for (std::size_t i = 0; i < factors.size(); ++i) m.factors.push_back(read_factor(factors[i], at("$.factors", i)));
    m.symmetric = factors.size() > 0 && std::all_of(factors.begin(), factors.end(),
                                                    [&](const json& f) { return f == factors[0]; });
    return FunctionSpec(std::move(m));
  }
  if (kind == "power-product") {
    const double c = read_double(require(doc, "exponent", "$"), "$.exponent");
    if (!(c > -0.5)) throw SpecError("$.exponent", "power-product exponent must exceed -1/2");
    return FunctionSpec(PowerProductSpec{n, c});
  }
  if (kind == "builtin") {
    const json& name = require(doc, "name", "$");
    if (!name.is_string()) throw SpecError("$.name", "expected a string");
    const auto label = name.get<std::string>();
    if (std::find(std::begin(kBuiltinNames), std::end(kBuiltinNames), label) == std::end(kBuiltinNames))
      throw SpecError("$.name", "unknown builtin '" + label + "'");
    try {
      return builtin_function(label, n);
    } catch (const DomainError& e) {
      throw SpecError("$.arity", e.what());
    }
  }
  throw SpecError("$.kind", "unknown kind '" + kind +
                                "' (expected orderstat-polynomial, plain-polynomial, set-function, multiplicative, "
                                "power-product or builtin)");
}

json rational_json(const Rational& q) { return to_string(q); }

json terms_json(const auto& terms, unsigned n, const auto& dense) {
  json out = json::array();
  for (const auto& [e, c] : terms) out.push_back({{"coef", rational_json(c)}, {"exponents", dense(e, n)}});
  return out;
}

json factor_json(const UnaryFactor& f) {
  switch (f.kind()) {
    case UnaryFactor::Kind::Power:
      return {{"type", "power"}, {"scale", f.scale()}, {"exponent", f.exponent()}};
    case UnaryFactor::Kind::Polynomial: {
      json c = json::array();
      for (const auto& q : f.coefficients()) c.push_back(rational_json(q));
      return {{"type", "polynomial"}, {"coefficients", c}};
    }
    case UnaryFactor::Kind::Callable:
      return {{"type", "callable"}, {"label", f.label()}};
  }
  return {};
}

}  // namespace

FunctionSpec parse_function_spec(const json& doc) {
  if (!doc.is_object()) throw SpecError("$", "expected a JSON object");
  const json& kind = require(doc, "kind", "$");
  if (!kind.is_string()) throw SpecError("$.kind", "expected a string");
  const unsigned n = read_unsigned(require(doc, "arity", "$"), "$.arity");
  if (n < 1 || n > kMaxSpecArity) throw SpecError("$.arity", "arity must be in [1, " + std::to_string(kMaxSpecArity) + "]");
  try {
    return parse_payload(doc, kind.get<std::string>(), n);
  } catch (const SpecError&) {
    throw;
  } catch (const DomainError& e) {
    throw SpecError("$", e.what());
  }
}

FunctionSpec parse_function_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SpecError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_function_spec(doc);
}

FunctionSpec load_function_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path, "cannot open spec file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_function_spec(std::string_view(ss.str()));
}

json function_spec_to_json(const FunctionSpec& f) {
  const unsigned n = f.arity();
  if (!f.builtin().empty()) return {{"kind", "builtin"}, {"name", f.builtin()}, {"arity", n}};
  json out{{"kind", kind_name(f.kind())}, {"arity", n}};
  if (const auto* p = f.get<OrderStatPolynomial>()) {
    out["constant"] = rational_json(p->constant());
    out["terms"] = terms_json(p->terms(), n, [](const Exponents& e, unsigned arity) {
      std::vector<unsigned> d(arity, 0);
      for (const auto& sp : e) d[sp.slot - 1] = sp.power;
      return d;
    });
  } else if (const auto* p = f.get<PlainPolynomial>()) {
    out["terms"] = terms_json(p->terms(), n, [](const std::vector<unsigned>& e, unsigned) { return e; });
  } else if (const auto* v = f.get<SetFunction>()) {
    json values = json::array();
    for (const auto& q : v->values()) values.push_back(rational_json(q));
    out["values"] = values;
  } else if (const auto* m = f.get<MultiplicativeSpec>()) {
    if (m->symmetric) {
      out["factor"] = factor_json(m->factors[0]);
    } else {
      json factors = json::array();
      for (const auto& phi : m->factors) factors.push_back(factor_json(phi));
      out["factors"] = factors;
    }
  } else if (const auto* pp = f.get<PowerProductSpec>()) {
    out["exponent"] = pp->exponent;
  } else {
    throw ConfigurationError("black-box functions have no document form");
  }
  return out;
}

}  // namespace osinf
