// SPDX-License-Identifier: Apache-2.0
#include "ssa.hpp"

#include "grass.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>

namespace fanossa::ssa {

EpochCumulants estimate_cumulants(const Eigen::MatrixXd& samples,
                                  bool unbiased) {
  const long m = samples.rows();
  if (m < 2)
    throw dims::param_error("cumulant estimation requires at least 2 samples");
  Eigen::VectorXd mean = samples.colwise().mean();
  Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
  double divisor = unbiased ? double(m - 1) : double(m);
  Eigen::MatrixXd cov = centered.transpose() * centered / divisor;
  return {std::move(mean), std::move(cov)};
}

DifferenceSystem difference_system(const std::vector<EpochCumulants>& epochs,
                                   double tol) {
  if (epochs.size() < 2)
    throw dims::param_error("difference system requires at least 2 epochs");
  DifferenceSystem out;
  double scale = 0;
  std::vector<Eigen::VectorXd> lins;
  std::vector<Eigen::MatrixXd> quads;
  for (size_t i = 1; i < epochs.size(); ++i) {
    lins.push_back(epochs[i].mean - epochs[0].mean);
    quads.push_back(epochs[i].covariance - epochs[0].covariance);
    scale = std::max({scale, lins.back().lpNorm<Eigen::Infinity>(),
                      quads.back().lpNorm<Eigen::Infinity>()});
  }
  double cut = tol * scale;
  for (auto& l : lins) {
    if (l.lpNorm<Eigen::Infinity>() <= cut)
      ++out.dropped_linear;
    else
      out.linear_forms.push_back(std::move(l));
  }
  for (auto& g : quads) {
    if (g.lpNorm<Eigen::Infinity>() <= cut)
      ++out.dropped_quadrics;
    else
      out.quadrics.push_back(std::move(g));
  }
  return out;
}

ReducedSystem reduce_ambient(const DifferenceSystem& sys, int k, double tol) {
  ReducedSystem out;
  if (sys.linear_forms.empty()) {
    int amb = sys.quadrics.empty() ? 0 : int(sys.quadrics.front().rows());
    out.embedding = Eigen::MatrixXd::Identity(amb, amb);
    out.quadrics = sys.quadrics;
    return out;
  }
  Eigen::MatrixXd a(sys.linear_forms.size(), sys.linear_forms.front().size());
  for (size_t i = 0; i < sys.linear_forms.size(); ++i)
    a.row(long(i)) = sys.linear_forms[i];
  Eigen::MatrixXd kernel = exactla::nullspace_numeric(a, tol);
  if (kernel.rows() < k + 1)
    throw dims::param_error(
        "linear constraints leave no room for a k-plane (kernel dimension " +
        std::to_string(kernel.rows()) + " < k+1)");
  out.embedding = kernel;
  for (const auto& g : sys.quadrics)
    out.quadrics.push_back(kernel * g * kernel.transpose());
  return out;
}

Eigen::MatrixXd random_stiefel(int rows, int cols, forms::Rng& rng) {
  Eigen::MatrixXd g(cols, rows);
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j < rows; ++j) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(cols, rows);
  return q.transpose();
}

SsaInstance generate_instance(int n, int k, int s, std::optional<int> rank_r,
                              forms::Rng& rng) {
  if (k < 0 || k >= n) throw dims::param_error("requires 0 <= k < n");
  if (s < 1) throw dims::param_error("requires at least s=1 epoch difference");
  if (rank_r) {
    if (*rank_r < 2 * k + 2)
      throw dims::unsupported_regime("rank constraint requires r >= 2k+2");
    if (*rank_r > n + 1) throw dims::param_error("rank r exceeds n+1");
  }
  const int amb = n + 1, kp1 = k + 1;
  Eigen::MatrixXd basis = random_stiefel(amb, amb, rng);
  Eigen::MatrixXd p = basis.topRows(kp1);

  // Base covariance: well-conditioned random SPD.
  Eigen::MatrixXd a(amb, amb);
  for (int i = 0; i < amb; ++i)
    for (int j = 0; j < amb; ++j) a(i, j) = rng.gaussian();
  Eigen::MatrixXd sigma0 =
      a * a.transpose() / amb + 0.5 * Eigen::MatrixXd::Identity(amb, amb);
  Eigen::VectorXd mu0(amb);
  for (int i = 0; i < amb; ++i) mu0(i) = rng.gaussian();

  SsaInstance inst;
  inst.rank_constraint = rank_r;
  inst.epochs.push_back({mu0, sigma0});
  for (int e = 1; e <= s; ++e) {
    // Symmetric difference with zero block on the stationary rows, built
    // in the adapted basis and rotated back.
    Eigen::MatrixXd dw = Eigen::MatrixXd::Zero(amb, amb);
    if (rank_r) {
      int r = *rank_r;
      for (int u = 0; u < amb; ++u)
        for (int v = u; v < amb; ++v) {
          if (u < kp1 && v < kp1) continue;
          if (u >= r && v >= r) continue;
          double x = rng.gaussian();
          dw(u, v) = x;
          dw(v, u) = x;
        }
      // rank-r completion of the corner: solve each bordered minor = 0
      Eigen::MatrixXd lead = dw.topLeftCorner(r, r);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(lead);
      double lead_det = lu.determinant();
      if (std::abs(lead_det) < 1e-12) {
        --e;  // resample this epoch difference
        continue;
      }
      for (int u = r; u < amb; ++u)
        for (int v = u; v < amb; ++v) {
          Eigen::MatrixXd sub(r + 1, r + 1);
          sub.topLeftCorner(r, r) = lead;
          sub.block(0, r, r, 1) = dw.block(0, v, r, 1);
          sub.block(r, 0, 1, r) = dw.block(u, 0, 1, r);
          sub(r, r) = 0;
          double b = sub.determinant();
          double val = -b / lead_det;
          dw(u, v) = val;
          dw(v, u) = val;
        }
    } else {
      for (int u = 0; u < amb; ++u)
        for (int v = u; v < amb; ++v) {
          if (u < kp1 && v < kp1) continue;
          double x = rng.gaussian();
          dw(u, v) = x;
          dw(v, u) = x;
        }
    }
    Eigen::MatrixXd d = basis.transpose() * dw * basis;
    // Shrink until Sigma_0 + D stays positive definite; the scaling
    // preserves P D P^T = 0 exactly.
    double shrink = 1.0;
    for (int it = 0; it < 60; ++it) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma0 + shrink * d);
      if (es.eigenvalues().minCoeff() >= 0.01) break;
      shrink *= 0.5;
    }
    Eigen::VectorXd vw = Eigen::VectorXd::Zero(amb);
    for (int i = kp1; i < amb; ++i) vw(i) = rng.gaussian();
    Eigen::VectorXd v = basis.transpose() * vw;
    inst.epochs.push_back({mu0 + v, sigma0 + shrink * d});
  }
  inst.ground_truth = p;
  return inst;
}

IdentifiabilityReport identifiability_report(int n, int k, int s,
                                             std::optional<int> r) {
  if (k < 0 || k >= n) throw dims::param_error("requires 0 <= k < n");
  if (s < 1) throw dims::param_error("requires s >= 1");
  if (r && *r < 2 * k + 2)
    throw dims::unsupported_regime(
        "rank-constrained report requires r >= 2k+2");
  IdentifiabilityReport rep;
  rep.n = n;
  rep.k = k;
  rep.s = s;
  rep.r = r;
  rep.delta = dims::delta_quadrics(n, s, k);
  rep.verdict = rep.delta < 0;
  auto th = dims::min_epoch_differences(n, k);
  rep.delta_threshold = th.delta_based;
  rep.closed_form_threshold = th.closed_form;
  rep.coarse_threshold = th.coarse;
  rep.discrepancy_flag = rep.delta_threshold != rep.closed_form_threshold;
  return rep;
}

double objective(const Eigen::MatrixXd& w,
                 const std::vector<Eigen::VectorXd>& linear_forms,
                 const std::vector<Eigen::MatrixXd>& quadrics) {
  double val = 0;
  for (const auto& g : quadrics) val += (w * g * w.transpose()).squaredNorm();
  for (const auto& l : linear_forms) val += (w * l).squaredNorm();
  return val;
}

Eigen::MatrixXd objective_gradient(const Eigen::MatrixXd& w,
                                   const std::vector<Eigen::VectorXd>& linear_forms,
                                   const std::vector<Eigen::MatrixXd>& quadrics) {
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(w.rows(), w.cols());
  for (const auto& g : quadrics) {
    Eigen::MatrixXd s = w * g * w.transpose();
    grad += 4.0 * s * w * g;
  }
  for (const auto& l : linear_forms) grad += 2.0 * (w * l) * l.transpose();
  return grad;
}

static Eigen::MatrixXd retract(const Eigen::MatrixXd& w) {
  // Polar retraction: orthonormalize the rows.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

RecoveryResult recover_subspace(const std::vector<Eigen::VectorXd>& linear_forms,
                                const std::vector<Eigen::MatrixXd>& quadrics,
                                int k, const RecoveryOptions& opts,
                                forms::Rng& rng) {
  RecoveryResult result;
  double scale = 0;
  for (const auto& g : quadrics) scale += g.squaredNorm();
  for (const auto& l : linear_forms) scale += l.squaredNorm();
  result.scale = scale;
  if (scale == 0)
    throw dims::param_error("recovery objective is identically zero");
  int amb = quadrics.empty() ? int(linear_forms.front().size())
                             : int(quadrics.front().rows());
  if (k + 1 > amb)
    throw dims::param_error("subspace dimension exceeds the ambient space");
  const double accept = opts.residual_factor * scale;

  struct Hit {
    Eigen::MatrixXd w;
    double residual;
    int count;
  };
  std::vector<Hit> hits;

  for (int restart = 0; restart < opts.restarts; ++restart) {
    Eigen::MatrixXd w = random_stiefel(k + 1, amb, rng);
    double f = objective(w, linear_forms, quadrics);
    double step = 1.0;
    Eigen::MatrixXd prev_w, prev_grad;
    for (int it = 0; it < opts.max_iterations; ++it) {
      Eigen::MatrixXd egrad = objective_gradient(w, linear_forms, quadrics);
      // Riemannian gradient: project onto the tangent space of the
      // orthonormal-rows manifold.
      Eigen::MatrixXd wg = egrad * w.transpose();
      Eigen::MatrixXd rgrad = egrad - 0.5 * (wg + wg.transpose()) * w;
      double gnorm = rgrad.norm();
      if (gnorm < opts.grad_tol * std::max(1.0, scale)) break;
      // Barzilai-Borwein step with a backtracking safeguard.
      if (it > 0) {
        Eigen::MatrixXd sdiff = w - prev_w;
        Eigen::MatrixXd ydiff = rgrad - prev_grad;
        double sy = (sdiff.array() * ydiff.array()).sum();
        double ss = sdiff.squaredNorm();
        step = (sy > 1e-300) ? ss / sy : 1.0;
        step = std::clamp(step, 1e-12, 1e6);
      } else {
        step = 1.0 / std::max(1.0, gnorm);
      }
      prev_w = w;
      prev_grad = rgrad;
      double fnew;
      Eigen::MatrixXd wnew;
      int bt = 0;
      for (; bt < 60; ++bt) {
        wnew = retract(w - step * rgrad);
        fnew = objective(wnew, linear_forms, quadrics);
        if (fnew <= f - 1e-4 * step * gnorm * gnorm || fnew < f) break;
        step *= 0.5;
      }
      if (bt == 60) break;  // no descent direction left
      w = wnew;
      f = fnew;
      if (f < accept * 1e-6) break;
    }
    if (f >= accept) continue;
    ++result.converged_restarts;
    bool merged = false;
    for (auto& h : hits) {
      if (grass::subspace_distance(h.w, w).chordal < opts.cluster_radius) {
        ++h.count;
        if (f < h.residual) {
          h.residual = f;
          h.w = w;
        }
        merged = true;
        break;
      }
    }
    if (!merged) hits.push_back({w, f, 1});
  }
  std::sort(hits.begin(), hits.end(),
            [](const Hit& a, const Hit& b) { return a.residual < b.residual; });
  for (auto& h : hits)
    result.clusters.push_back({std::move(h.w), h.residual, h.count});
  return result;
}

}  // namespace fanossa::ssa
