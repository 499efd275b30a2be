#include "osinf/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <sstream>

#include "osinf/errors.hpp"
#include "osinf/spec_io.hpp"

namespace osinf {

using nlohmann::json;

namespace {

json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const json& v) {
  if (v.is_number()) return v.get<double>();
  const auto s = v.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw SpecError("$", "bad number '" + s + "'");
}

template <class T>
void put_optional(json& out, const char* key, const std::optional<T>& v) {
  if (v) out[key] = *v;
}

template <class T>
std::optional<T> get_optional(const json& in, const char* key) {
  if (!in.contains(key) || in[key].is_null()) return std::nullopt;
  return in[key].get<T>();
}

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ReportEntry entry_of(const std::string& quantity, std::optional<std::uint64_t> k, const Quantity& q,
                     const std::string& method, const std::optional<SamplingProvenance>& sampling) {
  ReportEntry e{quantity, k, q.value, std::nullopt, q.std_error, method, std::nullopt, std::nullopt};
  if (q.exact) e.rational = to_string(*q.exact);
  if (sampling && q.std_error) {
    e.samples = sampling->samples;
    e.seed = sampling->seed;
  }
  return e;
}

ReportDocument base_report(const std::string& command, const FunctionSpec& f) {
  ReportDocument r;
  r.command = command;
  r.spec = function_spec_to_json(f);
  return r;
}

std::string method_label(Method m, Method requested) {
  auto label = method_name(m);
  if (requested == Method::Auto) label += " (auto)";
  return label;
}

}  // namespace

bool ReportDocument::disagreement(double threshold) const {
  return std::any_of(pairs.begin(), pairs.end(), [&](const CrosscheckPair& p) { return !(std::abs(p.z) <= threshold); });
}

json report_to_json(const ReportDocument& r) {
  json out{{"command", r.command}, {"tool_version", r.tool_version}, {"method", r.method}, {"spec", r.spec}};
  put_optional(out, "seed", r.seed);
  json entries = json::array();
  for (const auto& e : r.entries) {
    json j{{"quantity", e.quantity}, {"value", number_json(e.value)}, {"method", e.method}};
    put_optional(j, "k", e.k);
    put_optional(j, "rational", e.rational);
    if (e.se) j["se"] = number_json(*e.se);
    put_optional(j, "samples", e.samples);
    put_optional(j, "seed", e.seed);
    entries.push_back(std::move(j));
  }
  out["entries"] = std::move(entries);
  if (r.diagnosis) {
    const auto& d = *r.diagnosis;
    json j{{"equal", d.equal},
           {"flat_profile", d.flat_profile},
           {"arithmetic_progression", d.arithmetic_progression},
           {"vanishing_higher_mobius", d.vanishing_higher_mobius}};
    put_optional(j, "first_violated_profile_rank", d.first_violated_profile_rank);
    put_optional(j, "first_violated_progression_level", d.first_violated_progression_level);
    put_optional(j, "first_violated_mobius_level", d.first_violated_mobius_level);
    out["diagnosis"] = std::move(j);
  }
  if (!r.pairs.empty()) {
    json pairs = json::array();
    for (const auto& p : r.pairs)
      pairs.push_back({{"first", p.first}, {"second", p.second}, {"difference", number_json(p.difference)},
                       {"z", number_json(p.z)}});
    out["pairs"] = std::move(pairs);
  }
  out["warnings"] = r.warnings;
  return out;
}

ReportDocument report_from_json(const json& in) {
  ReportDocument r;
  r.command = in.at("command").get<std::string>();
  r.tool_version = in.at("tool_version").get<std::string>();
  r.method = in.at("method").get<std::string>();
  r.spec = in.at("spec");
  r.seed = get_optional<std::uint64_t>(in, "seed");
  for (const auto& j : in.at("entries")) {
    ReportEntry e;
    e.quantity = j.at("quantity").get<std::string>();
    e.k = get_optional<std::uint64_t>(j, "k");
    e.value = number_from_json(j.at("value"));
    e.rational = get_optional<std::string>(j, "rational");
    if (j.contains("se")) e.se = number_from_json(j["se"]);
    e.method = j.at("method").get<std::string>();
    e.samples = get_optional<std::uint64_t>(j, "samples");
    e.seed = get_optional<std::uint64_t>(j, "seed");
    r.entries.push_back(std::move(e));
  }
  if (in.contains("diagnosis")) {
    const auto& j = in["diagnosis"];
    DiagnosisReport d;
    d.equal = j.at("equal").get<bool>();
    d.flat_profile = j.at("flat_profile").get<bool>();
    d.arithmetic_progression = j.at("arithmetic_progression").get<bool>();
    d.vanishing_higher_mobius = j.at("vanishing_higher_mobius").get<bool>();
    d.first_violated_profile_rank = get_optional<unsigned>(j, "first_violated_profile_rank");
    d.first_violated_progression_level = get_optional<unsigned>(j, "first_violated_progression_level");
    d.first_violated_mobius_level = get_optional<unsigned>(j, "first_violated_mobius_level");
    r.diagnosis = d;
  }
  if (in.contains("pairs"))
    for (const auto& j : in["pairs"])
      r.pairs.push_back({j.at("first").get<std::string>(), j.at("second").get<std::string>(),
                         number_from_json(j.at("difference")), number_from_json(j.at("z"))});
  if (in.contains("warnings")) r.warnings = in["warnings"].get<std::vector<std::string>>();
  return r;
}

std::optional<ReportFormat> parse_format(std::string_view text) {
  if (text == "table") return ReportFormat::Table;
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  return std::nullopt;
}

std::string render_report(const ReportDocument& r, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::Json) {
    out << report_to_json(r).dump(2) << '\n';
    return out.str();
  }
  const bool per_k_only = r.command == "influence";
  if (format == ReportFormat::Csv) {
    out << (per_k_only ? "" : "quantity,") << "k,value,rational,se,method\n";
    for (const auto& e : r.entries) {
      if (!per_k_only) out << csv_escape(e.quantity) << ',';
      out << (e.k ? std::to_string(*e.k) : "") << ',' << format_double(e.value, 17) << ',' << e.rational.value_or("")
          << ',' << (e.se ? format_double(*e.se, 17) : "") << ',' << csv_escape(e.method) << '\n';
    }
    for (const auto& p : r.pairs)
      out << "z," << ',' << format_double(p.z, 17) << ",,," << csv_escape(p.first + " vs " + p.second) << '\n';
    return out.str();
  }

  out << "osinf " << r.tool_version << "  " << r.command << "  method: " << r.method;
  if (r.seed) out << "  seed: " << *r.seed;
  out << "\nspec: " << r.spec.dump() << "\n\n";
  out << std::left << std::setw(22) << "quantity" << std::setw(8) << "k" << std::setw(24) << "value" << std::setw(26)
      << "rational" << std::setw(14) << "se" << "method\n";
  for (const auto& e : r.entries) {
    out << std::setw(22) << e.quantity << std::setw(8) << (e.k ? std::to_string(*e.k) : "-") << std::setw(24)
        << format_double(e.value, 15) << std::setw(26) << e.rational.value_or("-") << std::setw(14)
        << (e.se ? format_double(*e.se, 4) : "-") << e.method;
    if (e.samples) out << "  [n=" << *e.samples << " seed=" << *e.seed << "]";
    out << '\n';
  }
  if (r.diagnosis) {
    const auto& d = *r.diagnosis;
    const auto yn = [](bool b) { return b ? "yes" : "no"; };
    out << "\nequal influence: " << yn(d.equal) << "\n  flat profile:            " << yn(d.flat_profile);
    if (d.first_violated_profile_rank) out << "  (first violation at k = " << *d.first_violated_profile_rank << ")";
    out << "\n  arithmetic progression:  " << yn(d.arithmetic_progression);
    if (d.first_violated_progression_level) out << "  (first violation at level " << *d.first_violated_progression_level << ")";
    out << "\n  vanishing higher Mobius: " << yn(d.vanishing_higher_mobius);
    if (d.first_violated_mobius_level) out << "  (first violation at level " << *d.first_violated_mobius_level << ")";
    out << '\n';
  }
  if (!r.pairs.empty()) {
    out << "\npairwise z-scores\n";
    for (const auto& p : r.pairs)
      out << "  " << std::setw(26) << p.first << std::setw(26) << p.second << std::setw(14) << format_double(p.z, 4)
          << (std::abs(p.z) <= 3.0 ? "ok" : "DISAGREE") << '\n';
  }
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  return out.str();
}

ReportDocument run_influence(const FunctionSpec& f, unsigned k, const AnalysisOptions& options) {
  const unsigned n = f.arity();
  if (k > n) throw DomainError("rank " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  const auto profile = influence_profile(f, options);
  ReportDocument r = base_report("influence", f);
  r.method = method_label(profile.method, options.method);
  if (profile.sampling) r.seed = profile.sampling->seed;
  const auto m = method_name(profile.method);
  for (unsigned j = 1; j <= n; ++j)
    if (k == 0 || j == k) r.entries.push_back(entry_of("influence", j, profile.indices[j - 1], m, profile.sampling));
  return r;
}

ReportDocument run_approximation(const FunctionSpec& f, const AnalysisOptions& options) {
  const auto a = best_approximation(f, options, true);
  const unsigned n = f.arity();
  ReportDocument r = base_report("approx", f);
  r.method = method_label(a.method, options.method);
  if (a.sampling) r.seed = a.sampling->seed;
  const auto m = method_name(a.method);
  for (unsigned j = 1; j <= n + 1; ++j) r.entries.push_back(entry_of("coefficient", j, a.coefficients[j - 1], m, a.sampling));
  r.entries.push_back(entry_of("mean", std::nullopt, a.mean, m, a.sampling));
  for (unsigned j = 1; j <= n; ++j) r.entries.push_back(entry_of("slope", j, a.slopes[j - 1], m, a.sampling));
  r.entries.push_back(entry_of("norm-squared", std::nullopt, a.norm_sq, m, a.sampling));
  r.entries.push_back(entry_of("residual-norm-squared", std::nullopt, a.residual_norm_sq, m, a.sampling));
  if (a.degenerate_variance) {
    r.warnings.push_back("degenerate variance: f is constant, so R^2 and r(f,k) are undefined");
  } else {
    r.entries.push_back(entry_of("r-squared", std::nullopt, a.r_squared, m, a.sampling));
    for (unsigned j = 1; j <= n; ++j) r.entries.push_back(entry_of("normalized-index", j, a.normalized[j - 1], m, a.sampling));
  }
  return r;
}

ReportDocument run_lovasz(const FunctionSpec& f, const LovaszRequest& request) {
  const auto* v = f.get<SetFunction>();
  if (!v) throw ConfigurationError("lovasz command needs a set-function spec, got " + kind_name(f.kind()));
  const unsigned n = v->arity();
  ReportDocument r = base_report("lovasz", f);
  r.method = method_name(Method::ClosedForm);
  const auto profile = influence_profile_lovasz(*v);
  for (unsigned j = 1; j <= n; ++j)
    r.entries.push_back(entry_of("influence", j, Quantity::from_exact(profile[j - 1]), r.method, std::nullopt));
  if (request.mobius) {
    const auto m = mobius(*v);
    for (std::uint64_t s = 0; s < m.values.size(); ++s)
      r.entries.push_back(entry_of("mobius", s, Quantity::from_exact(m.values[s]), "exact", std::nullopt));
  }
  if (request.symmetric_part) {
    const auto sym = symmetric_part(*v);
    r.entries.push_back(entry_of("symmetric-constant", std::nullopt, Quantity::from_exact(sym.constant), "exact", std::nullopt));
    for (unsigned j = 1; j <= n; ++j)
      r.entries.push_back(entry_of("symmetric-slope", j, Quantity::from_exact(sym.slopes[j - 1]), "exact", std::nullopt));
  }
  if (request.diagnose_equal_influence) {
    const auto d = equal_influence_class(*v);
    r.diagnosis = DiagnosisReport{d.equal,
                                  d.flat_profile,
                                  d.arithmetic_progression,
                                  d.vanishing_higher_mobius,
                                  d.first_violated_profile_rank,
                                  d.first_violated_progression_level,
                                  d.first_violated_mobius_level};
  }
  return r;
}

std::optional<EstimatorKind> parse_estimator(std::string_view text) {
  for (auto kind : {EstimatorKind::Covariance, EstimatorKind::Derivative, EstimatorKind::DiffQuotientUniform,
                    EstimatorKind::DiffQuotientTriangular})
    if (text == estimator_name(kind)) return kind;
  return std::nullopt;
}

ReportDocument run_crosscheck(const FunctionSpec& f, const CrosscheckRequest& request) {
  const unsigned n = f.arity();
  if (request.k < 1 || request.k > n)
    throw DomainError("rank " + std::to_string(request.k) + " outside [1, " + std::to_string(n) + "]");
  const Evaluator eval = make_evaluator(f);
  ReportDocument r = base_report("crosscheck", f);
  r.seed = request.sampling.seed;

  std::vector<EstimatorKind> estimators = request.estimators;
  if (estimators.empty()) {
    estimators = {EstimatorKind::Covariance, EstimatorKind::Derivative, EstimatorKind::DiffQuotientUniform,
                  EstimatorKind::DiffQuotientTriangular};
    if (!eval.has_derivative()) {
      estimators.erase(estimators.begin() + 1);
      r.warnings.push_back("derivative estimator skipped: no directional derivative for this function class");
    }
  }

  struct Estimate {
    std::string name;
    double value;
    double se;
  };
  std::vector<Estimate> all;
  const Method reference = resolve_method(f, Method::Auto);
  if (reference != Method::MonteCarlo) {
    AnalysisOptions opts;
    opts.method = reference;
    const auto profile = influence_profile(f, opts);
    const auto& q = profile.indices[request.k - 1];
    r.entries.push_back(entry_of("influence", request.k, q, method_name(reference), std::nullopt));
    all.push_back({method_name(reference), q.value, 0.0});
  }
  r.method = "monte-carlo";
  for (auto kind : estimators) {
    SamplingOptions opts = request.sampling;
    opts.seed = derive_seed(request.sampling.seed, static_cast<std::uint64_t>(kind) + 1);
    const auto est = influence_mc(eval, request.k, kind, opts);
    ReportEntry e{"influence", request.k, est.value, std::nullopt, est.std_error, estimator_name(kind),
                  est.samples, est.seed};
    r.entries.push_back(e);
    all.push_back({estimator_name(kind), est.value, est.std_error});
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const double diff = all[i].value - all[j].value;
      const double se = std::hypot(all[i].se, all[j].se);
      const double z = se > 0 ? diff / se : (diff == 0 ? 0.0 : std::copysign(INFINITY, diff));
      r.pairs.push_back({all[i].name, all[j].name, diff, z});
    }
  if (r.disagreement()) r.warnings.push_back("estimators disagree: some |z| > 3");
  return r;
}

}  // namespace osinf
