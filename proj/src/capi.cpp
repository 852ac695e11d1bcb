// SPDX-License-Identifier: Apache-2.0
#include "fanossa/fanossa.h"

#include "json_io.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

namespace {

using fanossa::json_io::json;
namespace dims = fanossa::dims;
namespace exactla = fanossa::exactla;
namespace forms = fanossa::forms;
namespace grass = fanossa::grass;
namespace fano = fanossa::fano;
namespace ssa = fanossa::ssa;
namespace json_io = fanossa::json_io;

constexpr const char* kVersion = "0.1.0";

json provenance(const json& request) {
  json p;
  p["parameters"] = request;
  p["seed"] = request.contains("seed") ? request.at("seed") : json(nullptr);
  p["tool_version"] = kVersion;
  return p;
}

json cmd_dims(const json& req) {
  dims::MultiDegree d(req.at("degrees").get<std::vector<int>>());
  dims::FanoParams p(req.at("n").get<int>(), req.at("k").get<int>(), d);
  json out;
  out["delta"] = dims::delta(p).get_str();
  if (!d.is_single_quadric()) {
    out["identifiable"] = dims::identifiable(p);
    json diffs = json::array();
    for (const auto& r : dims::forward_differences(p)) {
      json row;
      row["k_prime"] = r.k_prime;
      row["delta1"] = r.d1.get_str();
      if (r.has_d2) row["delta2"] = r.d2.get_str();
      diffs.push_back(std::move(row));
    }
    out["forward_differences"] = std::move(diffs);
  }
  json strat = json::array();
  for (const auto& r : dims::stratification_table(p)) {
    json row;
    row["k_prime"] = r.k_prime;
    row["expected_dim"] = r.expected_dim.get_str();
    row["schubert_lambda"] = r.schubert_lambda;
    row["schubert_codim"] = r.schubert_codim.get_str();
    row["incidence_dim"] = r.incidence_dim.get_str();
    row["degenerate"] = r.degenerate;
    strat.push_back(std::move(row));
  }
  out["stratification"] = std::move(strat);
  out["provenance"] = provenance(req);
  return out;
}

grass::Plane request_plane(const json& req, const exactla::FieldDesc& f,
                           int n, int k) {
  if (req.contains("plane")) return json_io::plane_from_json(req.at("plane"), f);
  std::vector<int> idx(k + 1);
  for (int i = 0; i <= k; ++i) idx[i] = i;
  return grass::Plane::coordinate(f, n, idx);
}

json cmd_gen(const json& req) {
  int n = req.at("n").get<int>(), k = req.at("k").get<int>();
  int s = req.at("s").get<int>();
  if (s < 1) throw dims::param_error("gen requires s >= 1 forms");
  std::vector<int> degrees(s, 2);
  if (req.contains("degrees")) {
    degrees = req.at("degrees").get<std::vector<int>>();
    if (int(degrees.size()) != s)
      throw dims::param_error("degrees length must equal s");
  }
  exactla::FieldDesc field = req.contains("field")
                                 ? json_io::field_from_json(req.at("field"))
                                 : exactla::FieldDesc::rational();
  int64_t bound = req.value("bound", int64_t(1000));
  forms::Rng rng(req.value("seed", uint64_t(0)));
  grass::Plane plane = request_plane(req, field, n, k);
  std::optional<int> rank_r;
  if (req.contains("rank_r")) rank_r = req.at("rank_r").get<int>();

  json_io::Instance inst{field, n, {}, plane};
  for (int degree : degrees) {
    if (rank_r) {
      if (degree != 2)
        throw dims::param_error("rank constraints require degree-2 forms");
      inst.forms.push_back(forms::form_of(forms::random_rank_r_vanishing_quadric(
          n, k, *rank_r, plane, bound, rng)));
    } else {
      inst.forms.push_back(
          forms::random_vanishing_form(field, n, degree, plane, bound, rng));
    }
  }
  if (req.value("verify", false)) {
    for (const auto& f : inst.forms) {
      if (!forms::vanishes_on(f, plane))
        throw fano::contract_violation("generated form does not vanish on the plane");
      if (rank_r && exactla::rank_exact(forms::gram_of(f)) != *rank_r)
        throw fano::contract_violation("generated quadric has the wrong rank");
    }
  }
  json out = json_io::instance_to_json(inst);
  out["provenance"] = provenance(req);
  return out;
}

json cmd_tangent(const json& req) {
  json_io::Instance inst = json_io::instance_from_json(req.at("instance"));
  grass::Plane plane =
      req.contains("plane")
          ? json_io::plane_from_json(req.at("plane"), inst.field)
          : (inst.plane ? *inst.plane
                        : throw dims::param_error(
                              "tangent requires a plane (inline or in the instance)"));
  fano::PolySystem sys(inst.forms);
  auto v = fano::verdict(sys, plane);
  json out;
  out["delta"] = v.delta.get_str();
  out["tangent_dim"] = v.tangent_dim;
  out["classification"] = fano::classification_str(v.classification);
  out["field"] = json_io::field_to_json(inst.field);
  out["provenance"] = provenance(req);
  return out;
}

json cmd_census(const json& req) {
  json_io::Instance inst = json_io::instance_from_json(req.at("instance"));
  int k = req.at("k").get<int>();
  mpz_class budget(req.value("budget", long(10000000)));
  bool override_budget = req.value("override_budget", false);

  fano::PolySystem sys(inst.forms);
  long q;
  if (inst.field.kind == exactla::FieldKind::Prime) {
    q = inst.field.p;
  } else {
    if (!req.contains("q"))
      throw dims::param_error("census of a rational instance requires q");
    q = req.at("q").get<long>();
    sys = fano::reduce_system_mod(sys, q);
  }
  exactla::FieldDesc fq = exactla::FieldDesc::prime(q);
  auto points = fano::fano_points_fq(sys, k, budget, override_budget);
  json out;
  out["q"] = q;
  out["count"] = points.size();
  json pts = json::array();
  for (const auto& p : points) pts.push_back(json_io::plane_to_json(p));
  out["points"] = std::move(pts);

  std::optional<grass::Plane> lp;
  if (req.contains("plane"))
    lp = json_io::plane_from_json(req.at("plane"), fq);
  else if (inst.plane) {
    // carry the instance's plane into F_q
    lp = json_io::plane_from_json(json_io::plane_to_json(*inst.plane), fq);
  }
  if (lp) {
    auto strata = fano::stratified_counts(sys, k, *lp, q, budget, override_budget);
    json st = json::object();
    for (const auto& [kp, c] : strata) st[std::to_string(kp)] = c;
    out["strata"] = std::move(st);
  }
  out["provenance"] = provenance(req);
  return out;
}

json cmd_ssa_gen(const json& req) {
  int n = req.at("n").get<int>(), k = req.at("k").get<int>();
  int s = req.at("s").get<int>();
  std::optional<int> rank_r;
  if (req.contains("rank_r")) rank_r = req.at("rank_r").get<int>();
  forms::Rng rng(req.value("seed", uint64_t(0)));
  auto inst = ssa::generate_instance(n, k, s, rank_r, rng);
  json out = json_io::ssa_instance_to_json(inst);
  out["provenance"] = provenance(req);
  return out;
}

json cmd_ssa_report(const json& req) {
  std::optional<int> r;
  if (req.contains("r")) r = req.at("r").get<int>();
  auto rep = ssa::identifiability_report(req.at("n").get<int>(),
                                         req.at("k").get<int>(),
                                         req.at("s").get<int>(), r);
  json out = json_io::identifiability_report_to_json(rep);
  out["provenance"] = provenance(req);
  return out;
}

json cmd_ssa_recover(const json& req) {
  ssa::SsaInstance inst = json_io::ssa_instance_from_json(req.at("instance"));
  int k = req.at("k").get<int>();
  ssa::RecoveryOptions opts;
  opts.restarts = req.value("restarts", opts.restarts);
  opts.max_iterations = req.value("max_iterations", opts.max_iterations);
  opts.grad_tol = req.value("grad_tol", opts.grad_tol);
  opts.cluster_radius = req.value("cluster_radius", opts.cluster_radius);
  forms::Rng rng(req.value("seed", uint64_t(0)));

  auto diff = ssa::difference_system(inst.epochs);
  bool reduce = req.value("reduce_ambient", true);
  json out;
  ssa::RecoveryResult res;
  if (reduce && !diff.linear_forms.empty()) {
    auto red = ssa::reduce_ambient(diff, k);
    res = ssa::recover_subspace({}, red.quadrics, k, opts, rng);
    for (auto& c : res.clusters) c.basis = c.basis * red.embedding;
    out["reduced_ambient"] = red.embedding.rows() - 1;
  } else {
    res = ssa::recover_subspace(diff.linear_forms, diff.quadrics, k, opts, rng);
  }
  out["converged_restarts"] = res.converged_restarts;
  out["dropped_forms"] = diff.dropped_linear + diff.dropped_quadrics;
  json clusters = json::array();
  for (const auto& c : res.clusters) {
    json cl;
    cl["basis"] = json_io::eigen_matrix_to_json(c.basis);
    cl["residual"] = c.residual;
    cl["supporting_restarts"] = c.supporting_restarts;
    if (inst.ground_truth.size())
      cl["ground_truth_angle"] =
          grass::subspace_distance(c.basis, inst.ground_truth)
              .max_principal_angle;
    clusters.push_back(std::move(cl));
  }
  out["clusters"] = std::move(clusters);
  out["provenance"] = provenance(req);
  return out;
}

}  // namespace

struct fanossa_ctx {
  std::string error;
};

extern "C" {

fanossa_ctx* fanossa_ctx_new(void) { return new fanossa_ctx; }
void fanossa_ctx_free(fanossa_ctx* ctx) { delete ctx; }
const char* fanossa_ctx_error(const fanossa_ctx* ctx) {
  return ctx ? ctx->error.c_str() : "";
}
const char* fanossa_version(void) { return kVersion; }
void fanossa_string_free(char* s) { std::free(s); }

int fanossa_run_json(fanossa_ctx* ctx, const char* command,
                     const char* request_json, char** out_json) {
  if (!ctx || !command || !request_json || !out_json) return FANOSSA_EINVAL;
  ctx->error.clear();
  *out_json = nullptr;
  try {
    json req = json::parse(request_json);
    std::string cmd(command);
    json out;
    if (cmd == "dims")
      out = cmd_dims(req);
    else if (cmd == "gen")
      out = cmd_gen(req);
    else if (cmd == "tangent")
      out = cmd_tangent(req);
    else if (cmd == "census")
      out = cmd_census(req);
    else if (cmd == "ssa-gen")
      out = cmd_ssa_gen(req);
    else if (cmd == "ssa-report")
      out = cmd_ssa_report(req);
    else if (cmd == "ssa-recover")
      out = cmd_ssa_recover(req);
    else {
      ctx->error = "unknown command: " + cmd;
      return FANOSSA_EINVAL;
    }
    std::string dumped = out.dump(2);
    *out_json = static_cast<char*>(std::malloc(dumped.size() + 1));
    if (!*out_json) {
      ctx->error = "out of memory";
      return FANOSSA_EINTERNAL;
    }
    std::memcpy(*out_json, dumped.c_str(), dumped.size() + 1);
    return FANOSSA_OK;
  } catch (const grass::budget_error& e) {
    ctx->error = e.what();
    return FANOSSA_EBUDGET;
  } catch (const fano::contract_violation& e) {
    ctx->error = e.what();
    return FANOSSA_EINTERNAL;
  } catch (const dims::unsupported_regime& e) {
    ctx->error = e.what();
    return FANOSSA_EINVAL;
  } catch (const dims::param_error& e) {
    ctx->error = e.what();
    return FANOSSA_EINVAL;
  } catch (const exactla::field_error& e) {
    ctx->error = e.what();
    return FANOSSA_EINVAL;
  } catch (const forms::chart_error& e) {
    ctx->error = e.what();
    return FANOSSA_EINVAL;
  } catch (const json_io::parse_error& e) {
    ctx->error = e.what();
    return FANOSSA_EINVAL;
  } catch (const json::exception& e) {
    ctx->error = e.what();
    return FANOSSA_EINVAL;
  } catch (const std::exception& e) {
    ctx->error = e.what();
    return FANOSSA_EINTERNAL;
  }
}

}  // extern "C"
