// SPDX-License-Identifier: Apache-2.0
#include "forms.hpp"

#include "dims.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fanossa::forms {

Form::Form(FieldDesc f, int n, int degree)
    : field_(f), n_(n), degree_(degree) {
  if (!f.exact()) throw exactla::field_error("Form requires an exact field");
  if (f.kind == exactla::FieldKind::Prime && f.p == 2)
    throw exactla::field_error("characteristic 2 is rejected module-wide");
  if (n < 0 || degree < 1)
    throw exactla::field_error("Form requires n >= 0, degree >= 1");
}

void Form::set_coeff(const Exponents& e, const mpq_class& c) {
  if (int(e.size()) != n_ + 1)
    throw exactla::field_error("exponent vector length mismatch");
  int s = std::accumulate(e.begin(), e.end(), 0);
  for (int x : e)
    if (x < 0) throw exactla::field_error("negative exponent");
  if (s != degree_)
    throw exactla::field_error("exponents must sum to the degree");
  mpq_class v = exactla::normalize_scalar(field_, c);
  if (v == 0)
    coeffs_.erase(e);
  else
    coeffs_[e] = v;
}

mpq_class Form::coeff(const Exponents& e) const {
  auto it = coeffs_.find(e);
  return it == coeffs_.end() ? mpq_class(0) : it->second;
}

Form Form::operator+(const Form& o) const {
  if (n_ != o.n_ || degree_ != o.degree_ || !(field_ == o.field_))
    throw exactla::field_error("form sum mismatch");
  Form r = *this;
  for (const auto& [e, c] : o.coeffs_) r.set_coeff(e, r.coeff(e) + c);
  return r;
}

Form Form::operator-(const Form& o) const { return *this + o.scaled(-1); }

Form Form::scaled(const mpq_class& c) const {
  Form r(field_, n_, degree_);
  for (const auto& [e, v] : coeffs_) r.set_coeff(e, v * c);
  return r;
}

Form Form::operator*(const Form& o) const {
  if (n_ != o.n_ || !(field_ == o.field_))
    throw exactla::field_error("form product mismatch");
  Form r(field_, n_, degree_ + o.degree_);
  for (const auto& [e1, c1] : coeffs_)
    for (const auto& [e2, c2] : o.coeffs_) {
      Exponents e(e1.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      r.set_coeff(e, r.coeff(e) + c1 * c2);
    }
  return r;
}

Form Form::derivative(int j) const {
  // Degree-0 results have no Form representation, so only degree >= 2
  // may be differentiated.
  if (degree_ < 2)
    throw exactla::field_error("derivative requires degree >= 2");
  Form r(field_, n_, degree_ - 1);
  for (const auto& [e, c] : coeffs_) {
    if (e[j] == 0) continue;
    Exponents e2 = e;
    e2[j] -= 1;
    r.set_coeff(e2, r.coeff(e2) + c * e[j]);
  }
  return r;
}

static void monomials_rec(int vars, int degree, Exponents& cur,
                          std::vector<Exponents>& out) {
  if (int(cur.size()) == vars - 1) {
    cur.push_back(degree);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur.push_back(e);
    monomials_rec(vars, degree - e, cur, out);
    cur.pop_back();
  }
}

std::vector<Exponents> monomial_basis(int vars, int degree) {
  std::vector<Exponents> out;
  Exponents cur;
  monomials_rec(vars, degree, cur, out);
  return out;
}

Form Form::substitute(const Mat& m) const {
  if (m.cols() != n_ + 1)
    throw exactla::field_error("substitution matrix column mismatch");
  int out_vars = m.rows();
  Form result(field_, out_vars - 1, degree_);
  for (const auto& [e, c] : coeffs_) {
    // Expand c * prod_j (sum_a m(a,j) y_a)^{e_j}.
    std::map<Exponents, mpq_class> acc;
    acc[Exponents(out_vars, 0)] = c;
    for (int j = 0; j <= n_; ++j) {
      for (int rep = 0; rep < e[j]; ++rep) {
        std::map<Exponents, mpq_class> next;
        for (const auto& [ex, cv] : acc)
          for (int a = 0; a < out_vars; ++a) {
            if (m.at(a, j) == 0) continue;
            Exponents ex2 = ex;
            ex2[a] += 1;
            next[ex2] += cv * m.at(a, j);
          }
        acc = std::move(next);
      }
    }
    for (const auto& [ex, cv] : acc)
      result.set_coeff(ex, result.coeff(ex) + cv);
  }
  return result;
}

PolySystem::PolySystem(std::vector<Form> fs) : forms(std::move(fs)) {
  if (forms.empty())
    throw exactla::field_error("polynomial system must be nonempty");
  for (const auto& f : forms)
    if (f.n() != forms.front().n() || !(f.field() == forms.front().field()))
      throw exactla::field_error("polynomial system is inconsistent");
}

std::vector<int> PolySystem::multidegree() const {
  std::vector<int> d;
  for (const auto& f : forms) d.push_back(f.degree());
  return d;
}

std::vector<mpq_class> restrict_to_plane(const Form& f, const Plane& L) {
  if (L.n() != f.n())
    throw exactla::field_error("restrict_to_plane: ambient mismatch");
  Form r = f.substitute(L.basis());
  std::vector<mpq_class> out;
  for (const auto& e : monomial_basis(L.k() + 1, f.degree()))
    out.push_back(r.coeff(e));
  return out;
}

bool vanishes_on(const Form& f, const Plane& L) {
  for (const auto& c : restrict_to_plane(f, L))
    if (c != 0) return false;
  return true;
}

int64_t Rng::uniform(int64_t lo, int64_t hi) {
  uint64_t span = uint64_t(hi - lo) + 1;
  uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t v;
  do {
    v = eng_();
  } while (v >= limit);
  return lo + int64_t(v % span);
}

int64_t Rng::nonzero_box(int64_t bound) {
  int64_t v;
  do {
    v = uniform(-bound, bound);
  } while (v == 0);
  return v;
}

int64_t Rng::nonzero_mod(long p) { return uniform(1, p - 1); }

double Rng::gaussian() {
  // Box-Muller; hand-rolled so seeded streams are stable across
  // standard-library implementations.
  double u1 = (double(eng_() >> 11) + 0.5) * 0x1p-53;
  double u2 = (double(eng_() >> 11) + 0.5) * 0x1p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

mpq_class random_nonzero_scalar(const FieldDesc& f, int64_t bound, Rng& rng) {
  if (f.kind == exactla::FieldKind::Prime)
    return mpq_class(long(rng.nonzero_mod(f.p)));
  return mpq_class(long(rng.nonzero_box(bound)));
}

Form random_vanishing_form(FieldDesc f, int n, int d, const Plane& L,
                           int64_t bound, Rng& rng) {
  if (d < 1 || bound < 1)
    throw exactla::field_error("random_vanishing_form requires d >= 1, bound >= 1");
  int k = L.k();
  Form h(f, n, d);
  for (const auto& e : monomial_basis(n + 1, d)) {
    bool on_plane_vars = true;
    for (int j = k + 1; j <= n; ++j)
      if (e[j] != 0) on_plane_vars = false;
    if (on_plane_vars) continue;  // excluded: would survive restriction
    h.set_coeff(e, random_nonzero_scalar(f, bound, rng));
  }
  Mat minv = exactla::inverse(L.adapted_basis());
  return h.substitute(minv);
}

Mat gram_of(const Form& f) {
  if (f.degree() != 2) throw exactla::field_error("gram_of requires degree 2");
  int n = f.n();
  Mat q(f.field(), n + 1, n + 1);
  mpq_class half = q.fdiv(1, 2);
  for (const auto& [e, c] : f.coeffs()) {
    std::vector<int> idx;
    for (int j = 0; j <= n; ++j)
      for (int t = 0; t < e[j]; ++t) idx.push_back(j);
    if (idx[0] == idx[1]) {
      q.set(idx[0], idx[0], c);
    } else {
      q.set(idx[0], idx[1], q.fmul(c, half));
      q.set(idx[1], idx[0], q.fmul(c, half));
    }
  }
  return q;
}

Form form_of(const Mat& q) {
  if (q.rows() != q.cols()) throw exactla::field_error("Gram matrix must be square");
  if (!q.is_symmetric()) throw exactla::field_error("Gram matrix must be symmetric");
  int n = q.rows() - 1;
  Form f(q.field(), n, 2);
  for (int u = 0; u <= n; ++u)
    for (int v = u; v <= n; ++v) {
      Exponents e(n + 1, 0);
      e[u] += 1;
      e[v] += 1;
      f.set_coeff(e, u == v ? q.at(u, u) : q.fadd(q.at(u, v), q.at(u, v)));
    }
  return f;
}

Mat complete_rank_r(const Mat& partial, int r) {
  int n = partial.rows() - 1;
  if (partial.rows() != partial.cols())
    throw exactla::field_error("Gram matrix must be square");
  if (r < 1 || r > n + 1) throw exactla::field_error("invalid rank r");
  std::vector<int> lead(r);
  for (int i = 0; i < r; ++i) lead[i] = i;
  mpq_class lead_minor = exactla::det(partial.submatrix(lead, lead));
  if (lead_minor == 0)
    throw chart_error(
        "leading r x r minor vanishes: outside the completion chart, "
        "resample the free block");
  Mat q = partial;
  for (int u = r; u <= n; ++u)
    for (int v = u; v <= n; ++v) {
      // det of the bordered minor is linear in q_{u,v} with coefficient
      // equal to the leading minor; solve det = 0.
      std::vector<int> ridx = lead, cidx = lead;
      ridx.push_back(u);
      cidx.push_back(v);
      Mat sub = q.submatrix(ridx, cidx);
      sub.set(r, r, 0);
      mpq_class b = exactla::det(sub);
      mpq_class val = q.fdiv(q.fneg(b), lead_minor);
      q.set(u, v, val);
      q.set(v, u, val);
    }
  return q;
}

Mat conjugate_gram_from_adapted(const Mat& gram_adapted, const Plane& L) {
  Mat minv = exactla::inverse(L.adapted_basis());
  return minv * gram_adapted * minv.transpose();
}

Mat random_rank_r_vanishing_quadric(int n, int k, int r, const Plane& L,
                                    int64_t bound, Rng& rng, int max_attempts) {
  if (r < 2 * k + 2)
    throw dims::unsupported_regime(
        "rank-constrained sampling requires r >= 2k+2, got r=" +
        std::to_string(r));
  if (r > n + 1) throw exactla::field_error("rank r exceeds n+1");
  FieldDesc f = L.basis().field();
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Mat g(f, n + 1, n + 1);
    for (int u = 0; u <= n; ++u)
      for (int v = u; v <= n; ++v) {
        if (u <= k && v <= k) continue;         // vanishing on the plane
        if (u >= r && v >= r) continue;         // corner: completed below
        mpq_class c = random_nonzero_scalar(f, bound, rng);
        g.set(u, v, c);
        g.set(v, u, c);
      }
    try {
      Mat completed = complete_rank_r(g, r);
      Mat out = conjugate_gram_from_adapted(completed, L);
      return out;
    } catch (const chart_error&) {
      continue;
    }
  }
  throw chart_error("no sample with invertible leading minor after " +
                    std::to_string(max_attempts) + " attempts");
}

}  // namespace fanossa::forms
