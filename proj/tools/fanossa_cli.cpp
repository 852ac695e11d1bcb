// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end over the fanossa C API.  Each subcommand builds a
// JSON request, runs it through fanossa_run_json, and renders the report as
// json, table, or csv.  Exit codes are the C API error codes.
#include "fanossa/fanossa.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using nlohmann::json;

namespace {

struct CommonOpts {
  std::string format = "table";
  std::string output;
  uint64_t seed = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "error: cannot write " << output << "\n";
      std::exit(FANOSSA_EINTERNAL);
    }
    out << text << "\n";
  }
}

// Renders rows (all the same keys) as an aligned table or csv.
std::string render_rows(const std::vector<std::string>& cols,
                        const std::vector<std::vector<std::string>>& rows,
                        bool csv) {
  std::ostringstream out;
  if (csv) {
    for (size_t c = 0; c < cols.size(); ++c)
      out << cols[c] << (c + 1 < cols.size() ? "," : "\n");
    for (const auto& r : rows)
      for (size_t c = 0; c < r.size(); ++c)
        out << r[c] << (c + 1 < r.size() ? "," : "\n");
    return out.str();
  }
  std::vector<size_t> w(cols.size());
  for (size_t c = 0; c < cols.size(); ++c) w[c] = cols[c].size();
  for (const auto& r : rows)
    for (size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], r[c].size());
  auto line = [&](const std::vector<std::string>& r) {
    for (size_t c = 0; c < r.size(); ++c) {
      out << r[c] << std::string(w[c] - r[c].size(), ' ');
      out << (c + 1 < r.size() ? "  " : "\n");
    }
  };
  line(cols);
  for (const auto& r : rows) line(r);
  return out.str();
}

std::string scalar_str(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string render_dims(const json& rep, bool csv) {
  std::ostringstream out;
  out << "delta = " << scalar_str(rep.at("delta"));
  if (rep.contains("identifiable"))
    out << "   identifiable = " << (rep.at("identifiable").get<bool>() ? "yes" : "no");
  out << "\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : rep.at("stratification")) {
    std::string lambda;
    for (const auto& p : r.at("schubert_lambda"))
      lambda += (lambda.empty() ? "" : " ") + p.dump();
    rows.push_back({r.at("k_prime").dump(), scalar_str(r.at("expected_dim")),
                    "(" + lambda + ")", scalar_str(r.at("schubert_codim")),
                    scalar_str(r.at("incidence_dim")),
                    r.at("degenerate").get<bool>() ? "yes" : "no"});
  }
  out << render_rows({"k'", "expected_dim", "lambda", "codim", "incidence_dim",
                      "degenerate"},
                     rows, csv);
  return out.str();
}

std::string render_tangent(const json& rep) {
  std::ostringstream out;
  out << "delta = " << scalar_str(rep.at("delta"))
      << "\ntangent_dim = " << rep.at("tangent_dim").dump()
      << "\nclassification = " << rep.at("classification").get<std::string>();
  return out.str();
}

std::string render_census(const json& rep) {
  std::ostringstream out;
  out << "q = " << rep.at("q").dump() << "\ncount = " << rep.at("count").dump();
  if (rep.contains("strata")) {
    out << "\nstrata (dim of intersection with the marked plane -> count):";
    for (const auto& [kp, c] : rep.at("strata").items())
      out << "\n  " << kp << " -> " << c.dump();
  }
  return out.str();
}

std::string render_report(const json& rep) {
  std::ostringstream out;
  out << "n = " << rep.at("n").dump() << "  k = " << rep.at("k").dump()
      << "  s = " << rep.at("s").dump();
  if (rep.contains("r")) out << "  r = " << rep.at("r").dump();
  out << "\ndelta = " << scalar_str(rep.at("delta"))
      << "\nidentifiable = " << (rep.at("identifiable").get<bool>() ? "yes" : "no")
      << "\nmin_epochs(delta) = " << scalar_str(rep.at("delta_threshold"))
      << "\nmin_epochs(closed form) = " << scalar_str(rep.at("closed_form_threshold"));
  if (rep.contains("coarse_threshold"))
    out << "\nmin_epochs(coarse bound) = " << scalar_str(rep.at("coarse_threshold"));
  if (rep.at("discrepancy_flag").get<bool>())
    out << "\nnote: the two thresholds disagree; the delta-based one is sharper";
  return out.str();
}

std::string render_recover(const json& rep) {
  std::ostringstream out;
  out << "converged_restarts = " << rep.at("converged_restarts").dump()
      << "\nclusters = " << rep.at("clusters").size();
  int i = 0;
  for (const auto& c : rep.at("clusters")) {
    out << "\n  [" << i++ << "] residual = " << c.at("residual").dump()
        << "  restarts = " << c.at("supporting_restarts").dump();
    if (c.contains("ground_truth_angle"))
      out << "  angle_to_truth = " << c.at("ground_truth_angle").dump();
  }
  return out.str();
}

int run(const std::string& command, const json& request,
        const CommonOpts& common,
        const std::function<std::string(const json&, bool)>& render) {
  fanossa_ctx* ctx = fanossa_ctx_new();
  char* out = nullptr;
  int rc = fanossa_run_json(ctx, command.c_str(), request.dump().c_str(), &out);
  if (rc != FANOSSA_OK) {
    std::cerr << "error: " << fanossa_ctx_error(ctx) << "\n";
    fanossa_ctx_free(ctx);
    return rc;
  }
  std::string text = out;
  fanossa_string_free(out);
  fanossa_ctx_free(ctx);
  if (common.format != "json") {
    json rep = json::parse(text);
    text = render(rep, common.format == "csv");
  }
  emit(text, common.output);
  return FANOSSA_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fano-scheme dimension tables, conditionally generic instance "
               "generation, tangent-space verification, finite-field censuses, "
               "and stationary-subspace identifiability/recovery"};
  app.require_subcommand(1);
  app.fallthrough();  // global --format/--output usable after the subcommand
  app.set_version_flag("--version", fanossa_version());

  CommonOpts common;
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--output", common.output, "Write the report to a file");

  // dims
  int n = 0, k = 0, s = 1, r = 0, kp = -2;
  long q = 0;
  std::vector<int> degrees;
  auto* dims = app.add_subcommand(
      "dims", "Expected dimensions and stratification for given (n, k, degrees)");
  dims->add_option("--n", n, "Ambient projective dimension")->required();
  dims->add_option("--k", k, "Plane dimension")->required();
  dims->add_option("--degrees", degrees, "Form degrees (all >= 2)")
      ->required()
      ->delimiter(',');

  // gen
  std::string field = "Q";
  int64_t bound = 1000;
  bool verify = false, rank_set = false;
  auto* gen = app.add_subcommand(
      "gen", "Random system of forms vanishing on a marked coordinate plane");
  gen->add_option("--n", n, "Ambient projective dimension")->required();
  gen->add_option("--k", k, "Dimension of the marked plane")->required();
  gen->add_option("--s", s, "Number of forms")->required();
  gen->add_option("--degrees", degrees, "Form degrees (default: all 2)")
      ->delimiter(',');
  auto* rank_opt =
      gen->add_option("--rank", r, "Force each quadric to have this Gram rank");
  gen->add_option("--field", field, "Coefficient field: Q or an odd prime p")
      ->capture_default_str();
  gen->add_option("--bound", bound, "Coefficient box bound over Q")
      ->capture_default_str();
  gen->add_option("--seed", common.seed, "RNG seed")->capture_default_str();
  gen->add_flag("--verify", verify, "Re-check vanishing (and rank) after sampling");

  // tangent
  std::string instance_path;
  auto* tangent = app.add_subcommand(
      "tangent", "Tangent-space dimension and verdict at the instance's plane");
  tangent->add_option("--instance", instance_path, "Instance JSON file")
      ->required();

  // census
  long budget = 10000000;
  bool override_budget = false, no_points = false;
  auto* census = app.add_subcommand(
      "census", "Enumerate all k-planes on the instance over a small prime field");
  census->add_option("--instance", instance_path, "Instance JSON file")
      ->required();
  census->add_option("--k", k, "Plane dimension to enumerate")->required();
  census->add_option("--q", q, "Reduce a rational instance mod this odd prime");
  census->add_option("--budget", budget, "Enumeration budget (planes visited)")
      ->capture_default_str();
  census->add_flag("--override-budget", override_budget,
                   "Proceed past the budget check");

  // ssa-gen
  auto* ssa_gen = app.add_subcommand(
      "ssa-gen", "Synthetic epoch cumulants with a known stationary subspace");
  ssa_gen->add_option("--n", n, "Ambient projective dimension")->required();
  ssa_gen->add_option("--k", k, "Stationary subspace dimension (projective)")
      ->required();
  ssa_gen->add_option("--s", s, "Number of non-reference epochs")->required();
  auto* ssa_rank_opt =
      ssa_gen->add_option("--rank", r, "Rank of each covariance difference");
  ssa_gen->add_option("--seed", common.seed, "RNG seed")->capture_default_str();

  // ssa-report
  auto* ssa_report = app.add_subcommand(
      "ssa-report", "Identifiability verdict and minimum-epoch thresholds");
  ssa_report->add_option("--n", n, "Ambient projective dimension")->required();
  ssa_report->add_option("--k", k, "Stationary subspace dimension (projective)")
      ->required();
  ssa_report->add_option("--s", s, "Number of non-reference epochs")->required();
  auto* report_rank_opt =
      ssa_report->add_option("--rank", r, "Rank of each covariance difference");

  // ssa-recover
  int restarts = 50;
  auto* ssa_recover = app.add_subcommand(
      "ssa-recover", "Numerically recover the stationary subspace");
  ssa_recover->add_option("--instance", instance_path, "SSA instance JSON file")
      ->required();
  ssa_recover->add_option("--k", k, "Subspace dimension (projective)")
      ->required();
  ssa_recover->add_option("--restarts", restarts, "Optimizer restarts")
      ->capture_default_str();
  ssa_recover->add_option("--seed", common.seed, "RNG seed")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dims) {
      json req{{"n", n}, {"k", k}, {"degrees", degrees}};
      return run("dims", req, common,
                 [](const json& rep, bool csv) { return render_dims(rep, csv); });
    }
    if (*gen) {
      json req{{"n", n},       {"k", k},          {"s", s},
               {"bound", bound}, {"seed", common.seed}, {"verify", verify}};
      if (!degrees.empty()) req["degrees"] = degrees;
      if (rank_opt->count()) req["rank_r"] = r;
      if (field == "Q" || field == "q")
        req["field"] = {{"kind", "rational"}};
      else
        req["field"] = {{"kind", "prime"}, {"p", std::stol(field)}};
      // instance files are raw reports; render as-is in every format
      return run("gen", req, common,
                 [](const json& rep, bool) { return rep.dump(2); });
    }
    if (*tangent) {
      json req{{"instance", json::parse(read_file(instance_path))}};
      return run("tangent", req, common,
                 [](const json& rep, bool) { return render_tangent(rep); });
    }
    if (*census) {
      json req{{"instance", json::parse(read_file(instance_path))},
               {"k", k},
               {"budget", budget},
               {"override_budget", override_budget}};
      if (census->get_option("--q")->count()) req["q"] = q;
      return run("census", req, common,
                 [](const json& rep, bool) { return render_census(rep); });
    }
    if (*ssa_gen) {
      json req{{"n", n}, {"k", k}, {"s", s}, {"seed", common.seed}};
      if (ssa_rank_opt->count()) req["rank_r"] = r;
      return run("ssa-gen", req, common,
                 [](const json& rep, bool) { return rep.dump(2); });
    }
    if (*ssa_report) {
      json req{{"n", n}, {"k", k}, {"s", s}};
      if (report_rank_opt->count()) req["r"] = r;
      return run("ssa-report", req, common,
                 [](const json& rep, bool) { return render_report(rep); });
    }
    if (*ssa_recover) {
      json req{{"instance", json::parse(read_file(instance_path))},
               {"k", k},
               {"restarts", restarts},
               {"seed", common.seed}};
      return run("ssa-recover", req, common,
                 [](const json& rep, bool) { return render_recover(rep); });
    }
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return FANOSSA_EINVAL;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return FANOSSA_EINTERNAL;
  }
  return FANOSSA_OK;
}
