// SPDX-License-Identifier: Apache-2.0
#include "json_io.hpp"

#include <sstream>

namespace fanossa::json_io {

json field_to_json(const exactla::FieldDesc& f) {
  switch (f.kind) {
    case exactla::FieldKind::Rational: return {{"kind", "rational"}};
    case exactla::FieldKind::Prime: return {{"kind", "prime"}, {"p", f.p}};
    case exactla::FieldKind::Float64: return {{"kind", "float64"}};
  }
  throw parse_error("unknown field kind");
}

exactla::FieldDesc field_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "rational") return exactla::FieldDesc::rational();
  if (kind == "prime") return exactla::FieldDesc::prime(j.at("p").get<long>());
  if (kind == "float64") return exactla::FieldDesc::float64();
  throw parse_error("unknown field kind: " + kind);
}

std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

mpq_class rational_from_json(const json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (j.is_string()) {
    mpq_class q;
    if (q.set_str(j.get<std::string>(), 10) != 0)
      throw parse_error("bad rational literal: " + j.get<std::string>());
    q.canonicalize();
    return q;
  }
  throw parse_error("rational must be an integer or a \"num/den\" string");
}

json matrix_to_json(const exactla::Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j)
      row.push_back(rational_to_string(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

exactla::Mat matrix_from_json(const json& j, const exactla::FieldDesc& f) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw parse_error("matrix must be a nonempty array of rows");
  exactla::Mat m(f, int(j.size()), int(j[0].size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != j[0].size()) throw parse_error("ragged matrix rows");
    for (size_t c = 0; c < j[i].size(); ++c)
      m.set(int(i), int(c), rational_from_json(j[i][c]));
  }
  return m;
}

json form_to_json(const forms::Form& f) {
  if (f.degree() == 2) {
    return {{"degree", 2}, {"gram", matrix_to_json(forms::gram_of(f))}};
  }
  json coeffs = json::object();
  for (const auto& [e, c] : f.coeffs()) {
    std::ostringstream key;
    for (size_t i = 0; i < e.size(); ++i) {
      if (i) key << ' ';
      key << e[i];
    }
    coeffs[key.str()] = rational_to_string(c);
  }
  return {{"degree", f.degree()}, {"coeffs", std::move(coeffs)}};
}

forms::Form form_from_json(const json& j, const exactla::FieldDesc& f, int n) {
  int degree = j.at("degree").get<int>();
  if (j.contains("gram")) {
    if (degree != 2) throw parse_error("gram view requires degree 2");
    return forms::form_of(matrix_from_json(j.at("gram"), f));
  }
  forms::Form out(f, n, degree);
  for (const auto& [key, val] : j.at("coeffs").items()) {
    std::istringstream is(key);
    forms::Exponents e;
    int x;
    while (is >> x) e.push_back(x);
    if (int(e.size()) != n + 1)
      throw parse_error("exponent key has wrong length: " + key);
    out.set_coeff(e, rational_from_json(val));
  }
  return out;
}

json plane_to_json(const grass::Plane& p) { return matrix_to_json(p.basis()); }

grass::Plane plane_from_json(const json& j, const exactla::FieldDesc& f) {
  return grass::Plane::from_rows(matrix_from_json(j, f));
}

json instance_to_json(const Instance& inst) {
  json j;
  j["field"] = field_to_json(inst.field);
  j["n"] = inst.n;
  json fs = json::array();
  for (const auto& f : inst.forms) fs.push_back(form_to_json(f));
  j["forms"] = std::move(fs);
  if (inst.plane) j["plane"] = plane_to_json(*inst.plane);
  return j;
}

Instance instance_from_json(const json& j) {
  Instance inst{field_from_json(j.at("field")), j.at("n").get<int>(), {}, {}};
  for (const auto& fj : j.at("forms"))
    inst.forms.push_back(form_from_json(fj, inst.field, inst.n));
  if (j.contains("plane"))
    inst.plane = plane_from_json(j.at("plane"), inst.field);
  return inst;
}

json eigen_matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd eigen_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw parse_error("expected matrix");
  Eigen::MatrixXd m(j.size(), j[0].size());
  for (size_t i = 0; i < j.size(); ++i)
    for (size_t c = 0; c < j[i].size(); ++c)
      m(long(i), long(c)) = j[i][c].get<double>();
  return m;
}

json eigen_vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd eigen_vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(long(i)) = j[i].get<double>();
  return v;
}

json ssa_instance_to_json(const ssa::SsaInstance& inst) {
  json j;
  json means = json::array(), covs = json::array();
  for (const auto& e : inst.epochs) {
    means.push_back(eigen_vector_to_json(e.mean));
    covs.push_back(eigen_matrix_to_json(e.covariance));
  }
  j["means"] = std::move(means);
  j["covariances"] = std::move(covs);
  if (inst.ground_truth.size())
    j["ground_truth"] = eigen_matrix_to_json(inst.ground_truth);
  if (inst.rank_constraint) j["rank_constraint"] = *inst.rank_constraint;
  return j;
}

ssa::SsaInstance ssa_instance_from_json(const json& j) {
  ssa::SsaInstance inst;
  const auto& means = j.at("means");
  const auto& covs = j.at("covariances");
  if (means.size() != covs.size())
    throw parse_error("means/covariances length mismatch");
  for (size_t i = 0; i < means.size(); ++i)
    inst.epochs.push_back(
        {eigen_vector_from_json(means[i]), eigen_matrix_from_json(covs[i])});
  if (j.contains("ground_truth"))
    inst.ground_truth = eigen_matrix_from_json(j.at("ground_truth"));
  if (j.contains("rank_constraint"))
    inst.rank_constraint = j.at("rank_constraint").get<int>();
  return inst;
}

json identifiability_report_to_json(const ssa::IdentifiabilityReport& r) {
  json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["s"] = r.s;
  if (r.r) j["r"] = *r.r;
  j["delta"] = r.delta.get_str();
  j["identifiable"] = r.verdict;
  j["delta_threshold"] = r.delta_threshold.get_str();
  j["closed_form_threshold"] = r.closed_form_threshold.get_str();
  if (r.coarse_threshold) j["coarse_threshold"] = r.coarse_threshold->get_str();
  j["discrepancy_flag"] = r.discrepancy_flag;
  return j;
}

}  // namespace fanossa::json_io
