#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ssn/certification.hpp"
#include "ssn/prox_catalog.hpp"
#include "ssn/residual_maps.hpp"
#include "ssn/ssn_solver.hpp"

namespace ssn {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Problem or report text that does not follow the schema. The message names
/// the offending field or the line/column of a syntax error.
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const ProxSpec& spec);
/// Throws MalformedInput (bad fields) or UnsupportedKind (unknown kind).
ProxSpec prox_spec_from_json(const nlohmann::json& j);

struct ProblemFile {
  int schema_version = kSchemaVersion;
  SymMatrix a;
  Vector b;
  ProxSpec phi;
  double tau = 1.0;
  std::optional<Vector> x0;
  std::optional<Vector> z0;
  std::optional<Vector> at;

  CompositeProblem problem() const;
};

ProblemFile parse_problem(const std::string& text);
nlohmann::json to_json(const ProblemFile& file);

/// Canonical JSON of (f, phi, tau).
nlohmann::json problem_json(const CompositeProblem& p);
/// Hex SHA-256 of a string.
std::string sha256_hex(const std::string& data);
/// SHA-256 of the canonical problem JSON.
std::string problem_hash(const CompositeProblem& p);

nlohmann::json vector_json(const Vector& v);
nlohmann::json matrix_json(const Matrix& m);
/// Number, or the strings "inf" / "-inf".
nlohmann::json real_json(double v);

/// Iteration table (k, residual, step_type, quotient when ref is given).
nlohmann::json to_json(const SolveTrace& trace, const std::optional<Vector>& ref = std::nullopt);
nlohmann::json to_json(const ConditionVerdict& v);
nlohmann::json to_json(const CertificationReport& r);

/// Pretty-printed, newline-terminated.
std::string dump(const nlohmann::json& j);

}  // namespace ssn
