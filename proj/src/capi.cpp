#include "osinf/osinf.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "osinf/errors.hpp"
#include "osinf/report.hpp"
#include "osinf/spec_io.hpp"

struct osinf_spec {
  osinf::FunctionSpec spec;
  std::string kind;
};

struct osinf_report {
  osinf::ReportDocument doc;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_location;

osinf_status fail(osinf_status status, const std::string& message, const std::string& location = {}) {
  last_error = message;
  last_location = location;
  return status;
}

template <class Body>
osinf_status guarded(Body&& body) {
  last_error.clear();
  last_location.clear();
  try {
    return body();
  } catch (const osinf::SpecError& e) {
    return fail(OSINF_INVALID_SPEC, e.what(), e.location());
  } catch (const osinf::ConfigurationError& e) {
    return fail(OSINF_INCOMPATIBLE, e.what());
  } catch (const osinf::TaintedSampleError& e) {
    std::string msg = e.what();
    msg += " (sample " + std::to_string(e.sample_index()) + ", point [";
    for (std::size_t i = 0; i < e.point().size(); ++i) msg += (i ? ", " : "") + std::to_string(e.point()[i]);
    return fail(OSINF_TAINTED_SAMPLE, msg + "])");
  } catch (const osinf::NumericalError& e) {
    return fail(OSINF_NUMERICAL, e.what());
  } catch (const osinf::DegenerateVarianceError& e) {
    return fail(OSINF_DEGENERATE_VARIANCE, e.what());
  } catch (const osinf::DomainError& e) {
    return fail(OSINF_DOMAIN, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(OSINF_INVALID_SPEC, e.what(), "$");
  } catch (const std::bad_alloc&) {
    return fail(OSINF_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OSINF_INTERNAL, e.what());
  } catch (...) {
    return fail(OSINF_INTERNAL, "unknown error");
  }
}

osinf::AnalysisOptions to_analysis(const osinf_options* options) {
  osinf_options local;
  if (!options) {
    osinf_options_init(&local);
    options = &local;
  }
  osinf::AnalysisOptions a;
  switch (options->method) {
    case OSINF_METHOD_AUTO: a.method = osinf::Method::Auto; break;
    case OSINF_METHOD_EXACT: a.method = osinf::Method::Exact; break;
    case OSINF_METHOD_CLOSED_FORM: a.method = osinf::Method::ClosedForm; break;
    case OSINF_METHOD_MONTE_CARLO: a.method = osinf::Method::MonteCarlo; break;
    default: throw osinf::ConfigurationError("unknown method code " + std::to_string(options->method));
  }
  a.sampling.samples = options->samples;
  a.sampling.seed = options->seed;
  a.sampling.threads = options->threads == 0 ? 1 : options->threads;
  return a;
}

osinf_status null_arg(const char* name) { return fail(OSINF_USAGE, std::string(name) + " must not be NULL"); }

osinf_status wrap_spec(osinf::FunctionSpec spec, osinf_spec** out) {
  auto kind = spec.builtin().empty() ? osinf::kind_name(spec.kind()) : "builtin:" + spec.builtin();
  *out = new osinf_spec{std::move(spec), std::move(kind)};
  return OSINF_OK;
}

char* copy_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* osinf_version(void) { return osinf::kToolVersion; }

const char* osinf_status_name(osinf_status status) {
  switch (status) {
    case OSINF_OK: return "ok";
    case OSINF_USAGE: return "usage";
    case OSINF_INVALID_SPEC: return "invalid-spec";
    case OSINF_INCOMPATIBLE: return "incompatible-method";
    case OSINF_TAINTED_SAMPLE: return "tainted-sample";
    case OSINF_DISAGREEMENT: return "disagreement";
    case OSINF_NUMERICAL: return "numerical";
    case OSINF_DOMAIN: return "domain";
    case OSINF_DEGENERATE_VARIANCE: return "degenerate-variance";
    case OSINF_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* osinf_last_error(void) { return last_error.c_str(); }
const char* osinf_last_error_location(void) { return last_location.c_str(); }

osinf_status osinf_spec_parse(const char* json_text, osinf_spec** out) {
  if (!json_text) return null_arg("json_text");
  if (!out) return null_arg("out");
  return guarded([&] { return wrap_spec(osinf::parse_function_spec(std::string_view(json_text)), out); });
}

osinf_status osinf_spec_load(const char* path, osinf_spec** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { return wrap_spec(osinf::load_function_spec(path), out); });
}

osinf_status osinf_spec_builtin(const char* name, unsigned arity, osinf_spec** out) {
  if (!name) return null_arg("name");
  if (!out) return null_arg("out");
  return guarded([&] {
    const nlohmann::json doc{{"kind", "builtin"}, {"name", name}, {"arity", arity}};
    return wrap_spec(osinf::parse_function_spec(doc), out);
  });
}

void osinf_spec_free(osinf_spec* spec) { delete spec; }
unsigned osinf_spec_arity(const osinf_spec* spec) { return spec ? spec->spec.arity() : 0; }
const char* osinf_spec_kind(const osinf_spec* spec) { return spec ? spec->kind.c_str() : ""; }

void osinf_options_init(osinf_options* options) {
  if (!options) return;
  const osinf::SamplingOptions defaults;
  options->method = OSINF_METHOD_AUTO;
  options->samples = defaults.samples;
  options->seed = defaults.seed;
  options->threads = 1;
  if (const char* env = std::getenv("OSINF_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (end && *end == '\0' && end != env) options->seed = v;
  }
}

osinf_status osinf_influence(const osinf_spec* spec, unsigned k, const osinf_options* options, osinf_report** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new osinf_report{osinf::run_influence(spec->spec, k, to_analysis(options))};
    return OSINF_OK;
  });
}

osinf_status osinf_influence_value(const osinf_spec* spec, unsigned k, const osinf_options* options, double* value,
                                   double* se) {
  if (!spec) return null_arg("spec");
  if (!value) return null_arg("value");
  return guarded([&] {
    if (k < 1 || k > spec->spec.arity()) throw osinf::DomainError("rank outside [1, n]");
    const auto profile = osinf::influence_profile(spec->spec, to_analysis(options));
    *value = profile.indices[k - 1].value;
    if (se) *se = profile.indices[k - 1].std_error.value_or(0.0);
    return OSINF_OK;
  });
}

osinf_status osinf_approximate(const osinf_spec* spec, const osinf_options* options, osinf_report** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new osinf_report{osinf::run_approximation(spec->spec, to_analysis(options))};
    return OSINF_OK;
  });
}

osinf_status osinf_lovasz(const osinf_spec* spec, unsigned flags, osinf_report** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guarded([&] {
    osinf::LovaszRequest req{(flags & OSINF_LOVASZ_MOBIUS) != 0, (flags & OSINF_LOVASZ_SYMMETRIC_PART) != 0,
                             (flags & OSINF_LOVASZ_DIAGNOSE) != 0};
    *out = new osinf_report{osinf::run_lovasz(spec->spec, req)};
    return OSINF_OK;
  });
}

osinf_status osinf_crosscheck(const osinf_spec* spec, unsigned k, unsigned estimator_mask, const osinf_options* options,
                              osinf_report** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guarded([&] {
    osinf::CrosscheckRequest req;
    req.k = k;
    req.sampling = to_analysis(options).sampling;
    const std::pair<unsigned, osinf::EstimatorKind> bits[] = {
        {OSINF_ESTIMATOR_COVARIANCE, osinf::EstimatorKind::Covariance},
        {OSINF_ESTIMATOR_DERIVATIVE, osinf::EstimatorKind::Derivative},
        {OSINF_ESTIMATOR_DIFFQUOTIENT_UNIFORM, osinf::EstimatorKind::DiffQuotientUniform},
        {OSINF_ESTIMATOR_DIFFQUOTIENT_TRIANGULAR, osinf::EstimatorKind::DiffQuotientTriangular}};
    for (const auto& [bit, kind] : bits)
      if (estimator_mask & bit) req.estimators.push_back(kind);
    *out = new osinf_report{osinf::run_crosscheck(spec->spec, req)};
    if ((*out)->doc.disagreement()) return fail(OSINF_DISAGREEMENT, "estimators disagree: some |z| > 3");
    return OSINF_OK;
  });
}

osinf_status osinf_report_render(const osinf_report* report, osinf_format format, char** out) {
  if (!report) return null_arg("report");
  if (!out) return null_arg("out");
  return guarded([&] {
    osinf::ReportFormat f;
    switch (format) {
      case OSINF_FORMAT_TABLE: f = osinf::ReportFormat::Table; break;
      case OSINF_FORMAT_JSON: f = osinf::ReportFormat::Json; break;
      case OSINF_FORMAT_CSV: f = osinf::ReportFormat::Csv; break;
      default: return fail(OSINF_USAGE, "unknown format code");
    }
    *out = copy_string(osinf::render_report(report->doc, f));
    return OSINF_OK;
  });
}

void osinf_string_free(char* text) { std::free(text); }

size_t osinf_report_entry_count(const osinf_report* report) { return report ? report->doc.entries.size() : 0; }

osinf_status osinf_report_entry(const osinf_report* report, size_t index, osinf_entry* entry) {
  if (!report) return null_arg("report");
  if (!entry) return null_arg("entry");
  if (index >= report->doc.entries.size()) return fail(OSINF_DOMAIN, "entry index out of range");
  const auto& e = report->doc.entries[index];
  entry->quantity = e.quantity.c_str();
  entry->has_k = e.k.has_value();
  entry->k = e.k.value_or(0);
  entry->value = e.value;
  entry->rational = e.rational ? e.rational->c_str() : nullptr;
  entry->has_se = e.se.has_value();
  entry->se = e.se.value_or(0.0);
  entry->method = e.method.c_str();
  entry->samples = e.samples.value_or(0);
  entry->seed = e.seed.value_or(0);
  return OSINF_OK;
}

size_t osinf_report_warning_count(const osinf_report* report) { return report ? report->doc.warnings.size() : 0; }

const char* osinf_report_warning(const osinf_report* report, size_t index) {
  if (!report || index >= report->doc.warnings.size()) return nullptr;
  return report->doc.warnings[index].c_str();
}

osinf_status osinf_report_parse(const char* json_text, osinf_report** out) {
  if (!json_text) return null_arg("json_text");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new osinf_report{osinf::report_from_json(nlohmann::json::parse(json_text))};
    return OSINF_OK;
  });
}

void osinf_report_free(osinf_report* report) { delete report; }

}  // extern "C"
