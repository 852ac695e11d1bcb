// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dims.hpp"
#include "forms.hpp"
#include "grass.hpp"

#include <map>

namespace fanossa::fano {

using exactla::Mat;
using forms::PolySystem;
using grass::Plane;

struct contract_violation : std::logic_error {
  using std::logic_error::logic_error;
};

// Linear system cutting out the tangent space of the Fano scheme at a
// plane, in the chart coordinates X_{a,b} (0 <= a <= k, k+1 <= b <= n)
// adapted to that plane.  Column index = a*(n-k) + (b-k-1).
struct TangentSystem {
  Plane base_plane;
  Mat matrix;  // sum_i C(d_i+k, k) rows, (k+1)(n-k) columns
};

// Requires every form of sys to vanish on L0; throws contract_violation
// naming the first offending form otherwise.
TangentSystem tangent_system(const PolySystem& sys, const Plane& L0);

// Direct assembly from the Gram matrices, valid for all-quadric systems;
// row-equivalent to the general expansion path.
TangentSystem tangent_system_quadric_direct(const PolySystem& sys,
                                            const Plane& L0);

// (k+1)(n-k) - rank of the tangent matrix.
int tangent_dim(const PolySystem& sys, const Plane& L0);

enum class Classification {
  UniquePlaneCertifiedLocally,
  ExpectedDimMet,
  TangentExcess,
};

std::string classification_str(Classification c);

struct FanoVerdict {
  mpz_class delta;
  int tangent_dim;
  Classification classification;
};

FanoVerdict verdict(const PolySystem& sys, const Plane& L_prime);

// Every k-plane of P^n(F_q) contained in V(sys), in enumeration order.
// The system's field must be the prime field F_q.
std::vector<Plane> fano_points_fq(const PolySystem& sys, int k,
                                  mpz_class budget = 10000000,
                                  bool override_budget = false);

// Reduces a rational system mod p, first scaling each form to primitive
// integer coefficients (the same hypersurfaces up to scalars).
PolySystem reduce_system_mod(const PolySystem& sys, long p);

// Partition of the Fano points by intersection dimension with L_prime
// (which must itself be a Fano point).  Keys run over [-1, k].
std::map<int, long> stratified_counts(const PolySystem& sys, int k,
                                      const Plane& L_prime, long q,
                                      mpz_class budget = 10000000,
                                      bool override_budget = false);

}  // namespace fanossa::fano
