// osinf: influence of order statistics on functions of [0,1]^n.
//
//   osinf influence  SPEC [--k K | --all] [--method M] [--samples N] [--seed S] [--format F]
//   osinf approx     SPEC [--method M] [--samples N] [--seed S] [--format F]
//   osinf lovasz     SPEC [--mobius] [--symmetric-part] [--diagnose-equal-influence] [--format F]
//   osinf crosscheck SPEC --k K [--estimators a,b,...] [--samples N] [--seed S] [--format F]
//
// SPEC is a JSON spec file, or builtin:NAME:N as a shorthand.

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osinf/osinf.h"

namespace {

struct SpecDeleter {
  void operator()(osinf_spec* s) const { osinf_spec_free(s); }
};
struct ReportDeleter {
  void operator()(osinf_report* r) const { osinf_report_free(r); }
};
using SpecPtr = std::unique_ptr<osinf_spec, SpecDeleter>;
using ReportPtr = std::unique_ptr<osinf_report, ReportDeleter>;

int report_error(osinf_status status, std::string message = osinf_last_error(),
                 std::string location = osinf_last_error_location()) {
  std::cerr << "osinf: " << osinf_status_name(status) << ": " << message;
  if (status == OSINF_INVALID_SPEC && !location.empty()) std::cerr << " (at " << location << ")";
  std::cerr << '\n';
  return static_cast<int>(status);
}

osinf_status load_spec(const std::string& arg, SpecPtr& out) {
  osinf_spec* raw = nullptr;
  osinf_status st;
  const std::string prefix = "builtin:";
  if (arg.rfind(prefix, 0) == 0) {
    const auto rest = arg.substr(prefix.size());
    const auto colon = rest.rfind(':');
    unsigned n = 0;
    std::string name = rest;
    if (colon != std::string::npos) {
      name = rest.substr(0, colon);
      try {
        n = static_cast<unsigned>(std::stoul(rest.substr(colon + 1)));
      } catch (const std::exception&) {
        n = 0;
      }
    } else if (name == "conjunctive-example-6.1") {
      n = 2;
    }
    st = osinf_spec_builtin(name.c_str(), n, &raw);
    if (st == OSINF_DOMAIN) st = OSINF_INVALID_SPEC;
  } else {
    st = osinf_spec_load(arg.c_str(), &raw);
  }
  out.reset(raw);
  return st;
}

int emit(osinf_report* report, osinf_format format) {
  char* text = nullptr;
  const osinf_status st = osinf_report_render(report, format, &text);
  if (st != OSINF_OK) return report_error(st);
  std::fputs(text, stdout);
  osinf_string_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influence of order statistics on functions of [0,1]^n"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("osinf ") + osinf_version());

  osinf_options options;
  osinf_options_init(&options);
  std::string spec_arg;
  std::string method = "auto";
  std::string format = "table";
  unsigned k = 0;
  bool all = false;

  const std::map<std::string, osinf_method> methods{{"auto", OSINF_METHOD_AUTO},
                                                     {"exact", OSINF_METHOD_EXACT},
                                                     {"closed-form", OSINF_METHOD_CLOSED_FORM},
                                                     {"mc", OSINF_METHOD_MONTE_CARLO},
                                                     {"monte-carlo", OSINF_METHOD_MONTE_CARLO}};
  const std::map<std::string, osinf_format> formats{
      {"table", OSINF_FORMAT_TABLE}, {"json", OSINF_FORMAT_JSON}, {"csv", OSINF_FORMAT_CSV}};
  const std::map<std::string, unsigned> estimator_bits{
      {"covariance", OSINF_ESTIMATOR_COVARIANCE},
      {"derivative", OSINF_ESTIMATOR_DERIVATIVE},
      {"diffquotient-uniform", OSINF_ESTIMATOR_DIFFQUOTIENT_UNIFORM},
      {"diffquotient-triangular", OSINF_ESTIMATOR_DIFFQUOTIENT_TRIANGULAR}};

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("spec", spec_arg, "spec file or builtin:NAME:N")->required();
    sub->add_option("--format", format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  };
  const auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--samples", options.samples, "Monte-Carlo samples")->check(CLI::Range(2ull, 1ull << 40));
    sub->add_option("--seed", options.seed, "Monte-Carlo seed (default from OSINF_SEED)");
    sub->add_option("--threads", options.threads, "worker threads")->check(CLI::Range(1u, 256u));
  };

  auto* influence = app.add_subcommand("influence", "influence indices I(f,k)");
  add_common(influence);
  add_sampling(influence);
  auto* k_opt = influence->add_option("--k", k, "rank k")->check(CLI::PositiveNumber);
  auto* all_flag = influence->add_flag("--all", all, "every rank");
  k_opt->excludes(all_flag);
  influence->add_option("--method", method, "auto, exact, closed-form or mc")
      ->check(CLI::IsMember({"auto", "exact", "closed-form", "mc", "monte-carlo"}));

  auto* approx = app.add_subcommand("approx", "best shifted L-statistic approximation, R^2 and r(f,k)");
  add_common(approx);
  add_sampling(approx);
  approx->add_option("--method", method, "auto, exact, closed-form or mc")
      ->check(CLI::IsMember({"auto", "exact", "closed-form", "mc", "monte-carlo"}));

  bool mobius = false;
  bool symmetric = false;
  bool diagnose = false;
  auto* lovasz = app.add_subcommand("lovasz", "Lovasz extension reports for a set function");
  add_common(lovasz);
  lovasz->add_flag("--mobius", mobius, "Mobius transform");
  lovasz->add_flag("--symmetric-part", symmetric, "Sym(f) as a shifted L-statistic");
  lovasz->add_flag("--diagnose-equal-influence", diagnose, "equal-influence characterization");

  std::vector<std::string> estimators;
  auto* crosscheck = app.add_subcommand("crosscheck", "compare influence estimators");
  add_common(crosscheck);
  add_sampling(crosscheck);
  crosscheck->add_option("--k", k, "rank k")->required()->check(CLI::PositiveNumber);
  crosscheck->add_option("--estimators", estimators, "covariance,derivative,diffquotient-uniform,diffquotient-triangular")
      ->delimiter(',')
      ->check(CLI::IsMember({"covariance", "derivative", "diffquotient-uniform", "diffquotient-triangular"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : OSINF_USAGE;
  }

  if (influence->parsed() && !all && k == 0) {
    std::cerr << "osinf: usage: influence needs --k K or --all\n";
    return OSINF_USAGE;
  }
  options.method = methods.at(method);
  const osinf_format fmt = formats.at(format);

  SpecPtr spec;
  if (const osinf_status st = load_spec(spec_arg, spec); st != OSINF_OK) return report_error(st);

  osinf_report* raw = nullptr;
  osinf_status st = OSINF_OK;
  if (influence->parsed()) {
    st = osinf_influence(spec.get(), all ? 0 : k, &options, &raw);
  } else if (approx->parsed()) {
    st = osinf_approximate(spec.get(), &options, &raw);
  } else if (lovasz->parsed()) {
    const unsigned flags = (mobius ? OSINF_LOVASZ_MOBIUS : 0u) | (symmetric ? OSINF_LOVASZ_SYMMETRIC_PART : 0u) |
                           (diagnose ? OSINF_LOVASZ_DIAGNOSE : 0u);
    st = osinf_lovasz(spec.get(), flags, &raw);
  } else {
    unsigned mask = 0;
    for (const auto& e : estimators) mask |= estimator_bits.at(e);
    st = osinf_crosscheck(spec.get(), k, mask, &options, &raw);
  }
  ReportPtr report(raw);
  // rendering resets the error slot
  const std::string message = osinf_last_error();
  const std::string location = osinf_last_error_location();
  if (report) {
    if (const int rc = emit(report.get(), fmt); rc != 0) return rc;
  }
  if (st != OSINF_OK) return report_error(st, message, location);
  return 0;
}
