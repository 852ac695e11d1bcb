// SPDX-License-Identifier: Apache-2.0
#include "dims.hpp"

namespace fanossa::dims {

MultiDegree::MultiDegree(std::vector<int> degrees) : d_(std::move(degrees)) {
  if (d_.empty()) throw param_error("multidegree must be nonempty");
  for (int di : d_)
    if (di < 2)
      throw param_error("every degree must be >= 2, got " + std::to_string(di));
}

std::string MultiDegree::str() const {
  std::string s = "(";
  for (size_t i = 0; i < d_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(d_[i]);
  }
  return s + ")";
}

FanoParams::FanoParams(int n_, int k_, MultiDegree d_) : n(n_), k(k_), d(std::move(d_)) {
  if (k < 0 || k >= n)
    throw param_error("requires 0 <= k < n, got k=" + std::to_string(k) +
                      ", n=" + std::to_string(n));
}

mpz_class binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), (unsigned long)n, (unsigned long)k);
  return r;
}

mpz_class multidegree_binom(const MultiDegree& d, int k) {
  if (k < -1) throw param_error("multidegree_binom requires k >= -1");
  if (k == -1) return 0;  // C(., -1) = 0
  mpz_class s = 0;
  for (int di : d.degrees()) s += binom(di + k, k);
  return s;
}

mpz_class delta(const FanoParams& p) {
  return mpz_class(p.k + 1) * (p.n - p.k) - multidegree_binom(p.d, p.k);
}

mpz_class delta_strat(const FanoParams& p, int k_prime) {
  if (k_prime < -1 || k_prime > p.k)
    throw param_error("k_prime must lie in [-1, k]");
  return mpz_class(p.k - k_prime) * (p.n - p.k + k_prime + 1) +
         multidegree_binom(p.d, k_prime) - multidegree_binom(p.d, p.k);
}

static void require_not_single_quadric(const MultiDegree& d, const char* what) {
  if (d.is_single_quadric())
    throw unsupported_regime(std::string(what) +
                             " excludes the single quadric d=(2)");
}

std::vector<DifferenceRow> forward_differences(const FanoParams& p) {
  require_not_single_quadric(p.d, "the convexity argument");
  std::vector<DifferenceRow> out;
  for (int kp = -1; kp <= p.k - 1; ++kp) {
    DifferenceRow row;
    row.k_prime = kp;
    // Closed forms: Delta(k') = -2k' - n + 2k - 2 + C(d+k', k'+1),
    //               Delta^2(k') = -2 + C(d+k', k'+2).
    mpz_class d1 = mpz_class(-2 * kp - p.n + 2 * p.k - 2);
    for (int di : p.d.degrees()) d1 += binom(di + kp, kp + 1);
    row.d1 = d1;
    row.has_d2 = kp <= p.k - 2;
    if (row.has_d2) {
      mpz_class d2 = -2;
      for (int di : p.d.degrees()) d2 += binom(di + kp, kp + 2);
      row.d2 = d2;
    }
    out.push_back(std::move(row));
  }
  return out;
}

mpz_class schubert_codim(const std::vector<int>& lambda,
                         std::optional<int> max_part) {
  mpz_class s = 0;
  for (size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < 0) throw param_error("partition parts must be >= 0");
    if (max_part && lambda[i] > *max_part)
      throw param_error("partition part exceeds n-k");
    if (i > 0 && lambda[i] > lambda[i - 1])
      throw param_error("partition must be non-increasing");
    s += lambda[i];
  }
  return s;
}

std::vector<StratRow> stratification_table(const FanoParams& p) {
  std::vector<StratRow> rows;
  const mpz_class cdk = multidegree_binom(p.d, p.k);
  mpz_class cdn = 0;
  for (int di : p.d.degrees()) cdn += binom(di + p.n, p.n);
  for (int kp = -1; kp <= p.k; ++kp) {
    StratRow row;
    row.k_prime = kp;
    row.expected_dim = delta_strat(p, kp);
    int part = p.n - 2 * p.k + kp;
    row.degenerate = kp >= 0 && part < 0;
    if (kp >= 0 && part > 0)
      row.schubert_lambda.assign(size_t(kp + 1), part);
    row.schubert_codim = (kp >= 0 && part > 0) ? mpz_class(kp + 1) * part
                                               : mpz_class(0);
    // dim I_{k,k'} = (k+1)(n-k) - (k'+1)(n-2k+k') + C(d+n,n) - 2 C(d+k,k)
    //               + C(d+k',k') - 1
    row.incidence_dim = mpz_class(p.k + 1) * (p.n - p.k) -
                        mpz_class(kp + 1) * part + cdn - 2 * cdk +
                        multidegree_binom(p.d, kp) - 1;
    rows.push_back(std::move(row));
  }
  return rows;
}

bool identifiable(const FanoParams& p) {
  require_not_single_quadric(p.d, "the identifiability criterion");
  return delta(p) < 0;
}

mpz_class delta_quadrics(int n, int s, int k) {
  return mpz_class(k + 1) * (n - k) - mpz_class(s) * binom(k + 2, 2);
}

bool identifiable_rank_constrained(int n, int s, int k, int r) {
  if (s < 2) throw unsupported_regime("requires at least s=2 quadrics");
  if (r < 2 * k + 2)
    throw unsupported_regime("rank-constrained identifiability requires r >= 2k+2, got r=" +
                             std::to_string(r) + ", k=" + std::to_string(k));
  return delta_quadrics(n, s, k) < 0;
}

static mpz_class ceil_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

EpochThresholds min_epoch_differences(int n, int k) {
  if (k < 0 || k >= n) throw param_error("requires 0 <= k < n");
  EpochThresholds t;
  // smallest s with (k+1)(n-k) < s * C(k+2, 2)
  mpz_class lhs = mpz_class(k + 1) * (n - k);
  mpz_class step = binom(k + 2, 2);
  t.delta_based = lhs / step + 1;
  t.closed_form = ceil_div(2 * mpz_class(n - k), k + 1);
  if (k >= 1) t.coarse = ceil_div(mpz_class(n + 2), k);
  return t;
}

}  // namespace fanossa::dims
