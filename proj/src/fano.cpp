// SPDX-License-Identifier: Apache-2.0
#include "fano.hpp"

#include <algorithm>

namespace fanossa::fano {

using exactla::FieldDesc;
using forms::Form;

static void require_on_variety(const PolySystem& sys, const Plane& L0) {
  for (size_t i = 0; i < sys.forms.size(); ++i)
    if (!forms::vanishes_on(sys.forms[i], L0))
      throw contract_violation("plane is not contained in V(f), form index " +
                               std::to_string(i));
}

TangentSystem tangent_system(const PolySystem& sys, const Plane& L0) {
  require_on_variety(sys, L0);
  const int n = L0.n(), k = L0.k();
  int total_rows = 0;
  for (const auto& f : sys.forms)
    total_rows += int(dims::binom(f.degree() + k, k).get_si());
  Mat m(sys.field(), total_rows, (k + 1) * (n - k));
  Mat adapted = L0.adapted_basis();

  int row_base = 0;
  for (const auto& f : sys.forms) {
    const int d = f.degree();
    auto basis_d = forms::monomial_basis(k + 1, d);
    std::map<forms::Exponents, int> row_of;
    for (size_t i = 0; i < basis_d.size(); ++i) row_of[basis_d[i]] = int(i);
    for (int b = 0; b < n - k; ++b) {
      // Directional derivative of f along the complement row, restricted
      // to the base plane; column (a,b) then carries t_a * g_b(t).
      Form dir(f.field(), n, d - 1);
      bool any = false;
      for (int j = 0; j <= n; ++j) {
        if (adapted.at(k + 1 + b, j) == 0) continue;
        Form pj = f.derivative(j).scaled(adapted.at(k + 1 + b, j));
        dir = any ? dir + pj : pj;
        any = true;
      }
      if (!any) continue;
      Form g = dir.substitute(L0.basis());
      for (const auto& [e, c] : g.coeffs()) {
        for (int a = 0; a <= k; ++a) {
          forms::Exponents e2 = e;
          e2[a] += 1;
          int row = row_base + row_of.at(e2);
          int col = a * (n - k) + b;
          m.set(row, col, m.fadd(m.at(row, col), c));
        }
      }
    }
    row_base += int(basis_d.size());
  }
  return {L0, std::move(m)};
}

TangentSystem tangent_system_quadric_direct(const PolySystem& sys,
                                            const Plane& L0) {
  require_on_variety(sys, L0);
  const int n = L0.n(), k = L0.k();
  for (const auto& f : sys.forms)
    if (f.degree() != 2)
      throw contract_violation("direct assembly requires an all-quadric system");
  Mat adapted = L0.adapted_basis();
  int rows_per = (k + 1) + k * (k + 1) / 2;
  Mat m(sys.field(), int(sys.forms.size()) * rows_per, (k + 1) * (n - k));
  int row = 0;
  for (const auto& f : sys.forms) {
    Mat g = forms::gram_of(f);
    Mat gw = adapted * g * adapted.transpose();
    for (int u = 0; u <= k; ++u, ++row)
      for (int b = 0; b < n - k; ++b)
        m.set(row, u * (n - k) + b, gw.at(u, k + 1 + b));
    for (int u = 0; u <= k; ++u)
      for (int v = u + 1; v <= k; ++v, ++row)
        for (int b = 0; b < n - k; ++b) {
          m.set(row, v * (n - k) + b, gw.at(u, k + 1 + b));
          m.set(row, u * (n - k) + b,
                m.fadd(m.at(row, u * (n - k) + b), gw.at(v, k + 1 + b)));
        }
  }
  return {L0, std::move(m)};
}

int tangent_dim(const PolySystem& sys, const Plane& L0) {
  TangentSystem ts = tangent_system(sys, L0);
  return ts.matrix.cols() - exactla::rank_exact(ts.matrix);
}

std::string classification_str(Classification c) {
  switch (c) {
    case Classification::UniquePlaneCertifiedLocally:
      return "unique_plane_certified_locally";
    case Classification::ExpectedDimMet: return "expected_dim_met";
    case Classification::TangentExcess: return "tangent_excess";
  }
  return "?";
}

FanoVerdict verdict(const PolySystem& sys, const Plane& L_prime) {
  dims::FanoParams p(L_prime.n(), L_prime.k(),
                     dims::MultiDegree(sys.multidegree()));
  mpz_class d = dims::delta(p);
  int td = tangent_dim(sys, L_prime);
  Classification c;
  if (d < 0 && td == 0)
    c = Classification::UniquePlaneCertifiedLocally;
  else if (d >= 0 && td == d)
    c = Classification::ExpectedDimMet;
  else
    c = Classification::TangentExcess;
  return {std::move(d), td, c};
}

PolySystem reduce_system_mod(const PolySystem& sys, long p) {
  FieldDesc f = FieldDesc::prime(p);
  std::vector<Form> out;
  for (const auto& g : sys.forms) {
    // Scale to primitive integer coefficients first: a nonzero rational
    // multiple cuts the same hypersurface and keeps denominators divisible
    // by p from poisoning the reduction.
    mpz_class lcm = 1, content = 0;
    for (const auto& [e, c] : g.coeffs())
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    for (const auto& [e, c] : g.coeffs()) {
      mpz_class num = mpq_class(c * lcm).get_num();
      mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), num.get_mpz_t());
    }
    if (content == 0) content = 1;
    Form h(f, g.n(), g.degree());
    for (const auto& [e, c] : g.coeffs())
      h.set_coeff(e, mpq_class(c * lcm) / content);
    out.push_back(std::move(h));
  }
  return PolySystem(std::move(out));
}

std::vector<Plane> fano_points_fq(const PolySystem& sys, int k,
                                  mpz_class budget, bool override_budget) {
  const FieldDesc field = sys.field();
  if (field.kind != exactla::FieldKind::Prime)
    throw contract_violation("census requires a prime-field system");
  const long q = field.p;
  const int n = sys.n();
  bool all_quadrics = true;
  for (const auto& f : sys.forms)
    if (f.degree() != 2) all_quadrics = false;

  std::vector<Plane> hits;
  if (all_quadrics) {
    // Fast path: integer Gram arithmetic mod q with early exit.
    std::vector<std::vector<int64_t>> grams;
    for (const auto& f : sys.forms) {
      Mat g = forms::gram_of(f);
      std::vector<int64_t> gi(size_t(n + 1) * (n + 1));
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
          gi[size_t(i) * (n + 1) + j] = g.at(i, j).get_num().get_si();
      grams.push_back(std::move(gi));
    }
    const int rows = k + 1, cols = n + 1;
    const size_t ng = grams.size();
    // The enumeration varies later basis rows fastest, so per-quadric
    // products b_i * G computed for a leading-row prefix stay valid across
    // long runs and make the common rejection O(1).
    std::vector<int64_t> prev(size_t(rows) * cols, -1);
    std::vector<int64_t> version(rows, 0);          // bumped when row i changes
    std::vector<int64_t> tag(ng * rows, -1);        // version at computation
    std::vector<int64_t> gbrow(ng * rows * cols);   // (g,i) -> b_i * G
    std::vector<int64_t> diag(ng * rows);           // (g,i) -> b_i * G * b_i
    grass::enumerate_planes_raw(
        n, k, q,
        [&](const std::vector<int64_t>& b) {
          int p = 0;  // unchanged leading rows
          while (p < rows &&
                 std::equal(b.begin() + p * cols, b.begin() + (p + 1) * cols,
                            prev.begin() + p * cols))
            ++p;
          for (int i = p; i < rows; ++i) ++version[i];
          std::copy(b.begin() + p * cols, b.end(), prev.begin() + p * cols);
          bool on = true;
          for (int i = 0; i < rows && on; ++i) {
            for (size_t g = 0; g < ng; ++g) {
              const int64_t* G = grams[g].data();
              int64_t* gbi = &gbrow[(g * rows + i) * size_t(cols)];
              if (tag[g * rows + i] != version[i]) {
                for (int j = 0; j < cols; ++j) {
                  int64_t acc = 0;
                  for (int t = 0; t < cols; ++t)
                    acc += b[size_t(i) * cols + t] * G[size_t(t) * cols + j];
                  gbi[j] = acc % q;
                }
                int64_t acc = 0;
                for (int t = 0; t < cols; ++t)
                  acc += gbi[t] * b[size_t(i) * cols + t];
                diag[g * rows + i] = acc % q;
                tag[g * rows + i] = version[i];
              }
              if (diag[g * rows + i] != 0) { on = false; break; }
              for (int j = i + 1; j < rows; ++j) {
                int64_t acc = 0;
                for (int t = 0; t < cols; ++t)
                  acc += gbi[t] * b[size_t(j) * cols + t];
                if (acc % q != 0) { on = false; break; }
              }
            }
          }
          if (on) hits.push_back(grass::plane_from_raw(field, n, k, b));
          return true;
        },
        budget, override_budget);
  } else {
    grass::enumerate_planes_raw(
        n, k, q,
        [&](const std::vector<int64_t>& b) {
          Plane L = grass::plane_from_raw(field, n, k, b);
          for (const auto& f : sys.forms)
            if (!forms::vanishes_on(f, L)) return true;
          hits.push_back(std::move(L));
          return true;
        },
        budget, override_budget);
  }
  return hits;
}

std::map<int, long> stratified_counts(const PolySystem& sys, int k,
                                      const Plane& L_prime, long q,
                                      mpz_class budget, bool override_budget) {
  auto points = fano_points_fq(sys, k, budget, override_budget);
  if (std::find(points.begin(), points.end(), L_prime) == points.end())
    throw contract_violation("L_prime is not a point of the Fano scheme");
  std::map<int, long> counts;
  for (int kp = -1; kp <= k; ++kp) counts[kp] = 0;
  for (const auto& L : points)
    counts[grass::intersection_dim(L, L_prime)] += 1;
  return counts;
}

}  // namespace fanossa::fano
