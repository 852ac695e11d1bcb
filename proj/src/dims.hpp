// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fanossa::dims {

struct param_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when parameters fall outside the regime the dimension theory
// covers (single quadric, or quadric rank below 2k+2).
struct unsupported_regime : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Tuple of hypersurface degrees, all >= 2.
class MultiDegree {
 public:
  explicit MultiDegree(std::vector<int> degrees);
  const std::vector<int>& degrees() const { return d_; }
  int size() const { return int(d_.size()); }
  bool is_single_quadric() const { return d_.size() == 1 && d_[0] == 2; }
  std::string str() const;
  bool operator==(const MultiDegree&) const = default;

 private:
  std::vector<int> d_;
};

struct FanoParams {
  int n;
  int k;
  MultiDegree d;
  FanoParams(int n, int k, MultiDegree d);
};

struct StratRow {
  int k_prime;
  mpz_class expected_dim;
  std::vector<int> schubert_lambda;  // zero parts suppressed
  mpz_class schubert_codim;
  mpz_class incidence_dim;
  bool degenerate;  // lambda would need a negative part (n < 2k - k')
};

mpz_class binom(long n, long k);

// Sum_i C(d_i + k, k): codimension of the forms vanishing on a fixed
// k-plane.  C(., -1) = 0.
mpz_class multidegree_binom(const MultiDegree& d, int k);

// Expected dimension (k+1)(n-k) - sum_i C(d_i+k, k).
mpz_class delta(const FanoParams& p);

// Expected dimension of the stratum of Fano planes meeting the fixed
// plane in projective dimension k'.
mpz_class delta_strat(const FanoParams& p, int k_prime);

struct DifferenceRow {
  int k_prime;
  mpz_class d1;  // first forward difference at k_prime
  mpz_class d2;  // second forward difference (valid for k_prime <= k-2)
  bool has_d2;
};

std::vector<DifferenceRow> forward_differences(const FanoParams& p);

// Codimension of a Schubert cell: sum of the partition parts.
// max_part bounds each part (n - k); pass nullopt to skip the bound check.
mpz_class schubert_codim(const std::vector<int>& lambda,
                         std::optional<int> max_part = std::nullopt);

std::vector<StratRow> stratification_table(const FanoParams& p);

// True iff delta < 0 (unique-plane criterion); rejects a single quadric.
bool identifiable(const FanoParams& p);

// Quadric-only criterion (k+1)(n-k) - s*C(k+2,2) < 0, valid for Gram
// rank r >= 2k+2.
bool identifiable_rank_constrained(int n, int s, int k, int r);

mpz_class delta_quadrics(int n, int s, int k);

struct EpochThresholds {
  mpz_class delta_based;  // smallest s with delta(n,s,k) < 0
  mpz_class closed_form;     // ceil(2(n-k)/(k+1))
  std::optional<mpz_class> coarse;  // ceil((n+2)/k), absent when k = 0
};

EpochThresholds min_epoch_differences(int n, int k);

}  // namespace fanossa::dims
