#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pwcalc/pwcalc.hpp"

using namespace pwcalc;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFailures = 1;

nlohmann::json real_vector_json(const RealVector& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

nlohmann::json extended_json(const ExtendedReal& x) {
  if (x.is_infinite()) return "inf";
  return x.value();
}

void emit(const nlohmann::json& j, const std::string& out) {
  std::string text = j.dump(2);
  if (out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw ParseError("cannot write '" + out + "'");
  f << text << "\n";
}

struct PairArgs {
  std::string a, b;
  void add(CLI::App* cmd) {
    cmd->add_option("--A", a, "JSON matrix file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--B", b, "JSON matrix file")->required()->check(CLI::ExistingFile);
  }
};

CalculusOptions options(double tau_end) {
  if (!(tau_end >= 0 && tau_end < 0.5)) throw ParseError("--tau-end must lie in [0, 0.5)");
  CalculusOptions opt;
  opt.endpoint_tol = tau_end;
  return opt;
}

SuiteReport run_suite(const std::string& name, const std::string& f, const std::string& cand, const SuiteConfig& cfg) {
  auto need_f = [&] {
    if (f.empty()) throw ParseError("suite " + name + " needs --f");
    return parse_function(f);
  };
  auto need_c = [&] {
    if (cand.empty()) throw ParseError("suite " + name + " needs --candidate");
    return parse_candidate(cand);
  };
  if (name == "convexity") return suite_convexity(need_f(), cfg);
  if (name == "concavity") return suite_concavity_restricted(need_f(), cfg);
  if (name == "continuity") return suite_continuity(need_f(), cfg);
  if (name == "homogeneity") return suite_homogeneity(need_f(), cfg);
  if (name == "commuting") return suite_commuting(need_f(), cfg);
  if (name == "axioms101" || name == "axioms_thm101") return suite_axioms_thm101(need_c(), cfg);
  if (name == "axioms103" || name == "axioms_thm103") {
    if (cand.empty() && !f.empty()) return suite_axioms_thm103(perspective_candidate(parse_function(f)), cfg);
    return suite_axioms_thm103(need_c(), cfg);
  }
  if (name == "connection107" || name == "connection_cor107") return suite_connection_cor107(need_c(), cfg);
  throw ParseError("unknown suite '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pusz-Woronowicz functional calculus and operator perspectives"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  double tau_end = kEndpointTol;
  std::string out, fspec, hspec, cand, suite_name, report;
  PairArgs pair;
  SuiteConfig cfg;

  auto* persp = app.add_subcommand("perspective", "operator perspective phi_f(A,B) as an extended element");
  persp->add_option("--f", fspec, "function spec, e.g. power:2, tlogt, repr77:file.json")->required();
  pair.add(persp);
  persp->add_option("--out", out, "write JSON here instead of stdout");
  persp->add_option("--tau-end", tau_end, "endpoint tolerance for R's spectrum");

  auto* mean = app.add_subcommand("mean", "Kubo-Ando connection A sigma_h B");
  mean->add_option("--h", hspec, "operator monotone function spec, e.g. geometric, parallel")->required();
  pair.add(mean);
  mean->add_option("--out", out, "write JSON here instead of stdout");
  mean->add_option("--tau-end", tau_end, "endpoint tolerance for R's spectrum");

  auto* div = app.add_subcommand("divergence", "maximal f-divergence Tr phi_f(A,B)");
  div->add_option("--f", fspec, "function spec")->required();
  pair.add(div);
  div->add_option("--tau-end", tau_end, "endpoint tolerance for R's spectrum");

  auto* leb = app.add_subcommand("lebesgue", "B-absolutely continuous and singular parts of A");
  pair.add(leb);
  leb->add_option("--out", out, "write JSON here instead of stdout");

  auto* t2 = app.add_subcommand("t2bound", "least lambda with A^2 <= lambda B");
  pair.add(t2);
  t2->add_option("--out", out, "write JSON here instead of stdout");

  auto* suite = app.add_subcommand("suite", "run a seeded property suite");
  suite->add_option("name", suite_name,
                    "convexity | concavity | continuity | homogeneity | commuting | axioms101 | axioms103 | "
                    "connection107")
      ->required();
  suite->add_option("--f", fspec, "function spec");
  suite->add_option("--candidate", cand,
                    "parallel | geometric | arithmetic | harmonic | anticommutator | perspective:<f> | bias:<f> | "
                    "neg:<candidate>");
  suite->add_option("--seed", cfg.seed, "seed");
  suite->add_option("--dim", cfg.dim, "matrix dimension")->check(CLI::Range(1, 64));
  suite->add_option("--trials", cfg.trials, "number of trials")->check(CLI::NonNegativeNumber);
  suite->add_option("--report", report, "write the JSON report here");
  suite->add_flag("--deterministic", cfg.deterministic, "report wall_time_ms as 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*persp) {
      auto f = parse_function(fspec);
      auto r = perspective_apply(f, read_matrix(pair.a), read_matrix(pair.b), options(tau_end));
      nlohmann::json j = to_json(r.value);
      j["r_eigenvalues"] = real_vector_json(r.r_eigs);
      j["hits_zero"] = r.hits_zero;
      j["hits_one"] = r.hits_one;
      j["norm"] = extended_json(r.value.norm());
      emit(j, out);
    } else if (*mean) {
      auto h = parse_monotone(hspec);
      Matrix m = connection(h, read_matrix(pair.a), read_matrix(pair.b), options(tau_end));
      emit(matrix_to_json(m), out);
    } else if (*div) {
      auto f = parse_function(fspec);
      Matrix a = read_matrix(pair.a), b = read_matrix(pair.b);
      ExtendedReal d = max_f_divergence(f, a, b, options(tau_end));
      // rounding noise of a few ulps on an exact zero prints as 0
      double scale = 1.0 + spectral_norm(a) + spectral_norm(b);
      if (d.is_finite() && std::abs(d.value()) <= 64 * kEps * scale * a.rows()) d = ExtendedReal(0.0);
      std::cout << d.to_string() << "\n";
    } else if (*leb) {
      Matrix a = read_matrix(pair.a), b = read_matrix(pair.b);
      auto d = lebesgue_decomposition(a, b);
      nlohmann::json j;
      j["ac_part"] = matrix_to_json(d.ac_part);
      j["singular_part"] = matrix_to_json(d.singular_part);
      j["absolutely_continuous"] = is_absolutely_continuous(a, b);
      emit(j, out);
    } else if (*t2) {
      Matrix a = read_matrix(pair.a), b = read_matrix(pair.b);
      auto r = t2_bound(a, b);
      nlohmann::json j;
      j["bounded"] = r.bounded;
      j["lambda_min"] = extended_json(r.lambda_min);
      j["certified_upper"] = r.certified_upper;
      j["certified_strict"] = r.certified_strict;
      j["perspective_norm"] = extended_json(perspective(power_function(2), a, b).norm());
      emit(j, out);
    } else if (*suite) {
      SuiteReport r = run_suite(suite_name, fspec, cand, cfg);
      std::printf("%s %s: %d/%d trials passed\n", r.suite.c_str(), r.subject.c_str(), r.passes, r.trials);
      for (const auto& [name, t] : r.checks) std::printf("  %-24s %d passed, %d failed\n", name.c_str(), t.passes, t.failures);
      for (const auto& n : r.notes) std::printf("  note: %s\n", n.c_str());
      if (!report.empty()) {
        std::ofstream f(report);
        if (!f) throw ParseError("cannot write '" + report + "'");
        f << to_json(r).dump(2) << "\n";
      }
      return r.clean() ? 0 : kExitFailures;
    }
  } catch (const ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotPsdError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailures;
  }
  return 0;
}
