// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "fano.hpp"
#include "ssa.hpp"

#include <json.hpp>

#include <optional>

namespace fanossa::json_io {

using nlohmann::json;

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json field_to_json(const exactla::FieldDesc& f);
exactla::FieldDesc field_from_json(const json& j);

// Rationals travel as "num/den" strings (den omitted when 1).
std::string rational_to_string(const mpq_class& q);
mpq_class rational_from_json(const json& j);

json matrix_to_json(const exactla::Mat& m);
exactla::Mat matrix_from_json(const json& j, const exactla::FieldDesc& f);

json form_to_json(const forms::Form& f);
forms::Form form_from_json(const json& j, const exactla::FieldDesc& f, int n);

json plane_to_json(const grass::Plane& p);
grass::Plane plane_from_json(const json& j, const exactla::FieldDesc& f);

// Shared instance file: field, ambient dimension, forms, optional plane.
struct Instance {
  exactla::FieldDesc field;
  int n;
  std::vector<forms::Form> forms;
  std::optional<grass::Plane> plane;
};

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

json eigen_matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd eigen_matrix_from_json(const json& j);
json eigen_vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd eigen_vector_from_json(const json& j);

// SSA population instance: means, covariances, optional ground truth.
json ssa_instance_to_json(const ssa::SsaInstance& inst);
ssa::SsaInstance ssa_instance_from_json(const json& j);

json identifiability_report_to_json(const ssa::IdentifiabilityReport& r);

}  // namespace fanossa::json_io
