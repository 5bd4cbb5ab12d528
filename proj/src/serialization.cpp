#include "ssn/serialization.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "ssn/errors.hpp"

namespace ssn {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name, const std::string& path) {
  if (!j.is_object() || !j.contains(name)) throw MalformedInput("missing field '" + path + name + "'");
  return j.at(name);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw MalformedInput("field '" + path + "' must be a number");
  return j.get<double>();
}

Eigen::Index integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw MalformedInput("field '" + path + "' must be an integer");
  return j.get<Eigen::Index>();
}

Vector vector_from(const json& j, const std::string& path) {
  if (!j.is_array()) throw MalformedInput("field '" + path + "' must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

std::vector<Vector> vectors_from(const json& j, const std::string& path) {
  if (!j.is_array()) throw MalformedInput("field '" + path + "' must be an array of vectors");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_from(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix matrix_from(const json& j, const std::string& path) {
  const auto rows = vectors_from(j, path);
  if (rows.empty()) throw MalformedInput("field '" + path + "' must be a nonempty matrix");
  const Eigen::Index n = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw MalformedInput("field '" + path + "' has rows of different length");
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return m;
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(real_json(v(i)));
  return a;
}

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
  return a;
}

json real_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json to_json(const ProxSpec& spec) {
  json j;
  j["kind"] = kind_name(spec.kind);
  switch (spec.kind) {
    case ProxKind::zero:
    case ProxKind::indicator_orthant: j["n"] = spec.n; break;
    case ProxKind::l1:
      j["n"] = spec.n;
      j["weight"] = spec.weight;
      break;
    case ProxKind::group_l2:
      j["weight"] = spec.weight;
      j["blocks"] = spec.blocks;
      break;
    case ProxKind::polyhedral_support: {
      json v = json::array();
      for (const auto& x : spec.vertices) v.push_back(vector_json(x));
      json r = json::array();
      for (const auto& x : spec.rays) r.push_back(vector_json(x));
      j["vertices"] = v;
      j["rays"] = r;
      break;
    }
    case ProxKind::indicator_abs_cone:
    case ProxKind::support_arc_segment:
    case ProxKind::support_sharp_cusp: break;
  }
  return j;
}

ProxSpec prox_spec_from_json(const json& j) {
  const std::string p = "phi.";
  const json& kj = field(j, "kind", p);
  if (!kj.is_string()) throw MalformedInput("field 'phi.kind' must be a string");
  const ProxKind kind = kind_from_name(kj.get<std::string>());
  try {
    switch (kind) {
      case ProxKind::zero: return ProxSpec::zero(integer(field(j, "n", p), "phi.n"));
      case ProxKind::indicator_orthant: return ProxSpec::orthant(integer(field(j, "n", p), "phi.n"));
      case ProxKind::l1:
        return ProxSpec::l1(integer(field(j, "n", p), "phi.n"), number(field(j, "weight", p), "phi.weight"));
      case ProxKind::group_l2: {
        const json& bj = field(j, "blocks", p);
        if (!bj.is_array()) throw MalformedInput("field 'phi.blocks' must be an array of index arrays");
        std::vector<std::vector<Eigen::Index>> blocks;
        for (std::size_t i = 0; i < bj.size(); ++i) {
          const std::string bp = "phi.blocks[" + std::to_string(i) + "]";
          if (!bj[i].is_array()) throw MalformedInput("field '" + bp + "' must be an array of indices");
          std::vector<Eigen::Index> blk;
          for (const auto& e : bj[i]) blk.push_back(integer(e, bp));
          blocks.push_back(blk);
        }
        return ProxSpec::group_l2(number(field(j, "weight", p), "phi.weight"), blocks);
      }
      case ProxKind::polyhedral_support: {
        auto verts = vectors_from(field(j, "vertices", p), "phi.vertices");
        std::vector<Vector> rays;
        if (j.contains("rays")) rays = vectors_from(j.at("rays"), "phi.rays");
        return ProxSpec::polyhedral_support(std::move(verts), std::move(rays));
      }
      case ProxKind::indicator_abs_cone: return ProxSpec::abs_cone();
      case ProxKind::support_arc_segment: return ProxSpec::arc_segment();
      case ProxKind::support_sharp_cusp: return ProxSpec::sharp_cusp();
    }
  } catch (const PreconditionError& e) {
    throw MalformedInput(std::string("field 'phi': ") + e.what());
  } catch (const DimensionMismatch& e) {
    throw MalformedInput(std::string("field 'phi': ") + e.what());
  }
  throw UnsupportedKind("unsupported phi kind");
}

CompositeProblem ProblemFile::problem() const { return CompositeProblem::quadratic(a, b, phi, tau); }

ProblemFile parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedInput("syntax error at " + line_col(text, e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw MalformedInput("problem file must be a JSON object");
  ProblemFile f;
  f.schema_version = static_cast<int>(integer(field(j, "schema_version", ""), "schema_version"));
  if (f.schema_version != kSchemaVersion) {
    throw MalformedInput("field 'schema_version': unsupported version " + std::to_string(f.schema_version));
  }
  const json& fj = field(j, "f", "");
  const json& tj = field(fj, "type", "f.");
  if (!tj.is_string() || tj.get<std::string>() != "quadratic") {
    throw MalformedInput("field 'f.type': only \"quadratic\" is supported");
  }
  const Matrix a = matrix_from(field(fj, "A", "f."), "f.A");
  if (a.rows() != a.cols()) throw MalformedInput("field 'f.A' must be square");
  try {
    f.a = SymMatrix(a);
  } catch (const std::exception& e) {
    throw MalformedInput(std::string("field 'f.A': ") + e.what());
  }
  f.b = fj.contains("b") ? vector_from(fj.at("b"), "f.b") : Vector::Zero(a.rows());
  if (f.b.size() != a.rows()) throw MalformedInput("field 'f.b' length does not match f.A");
  f.phi = prox_spec_from_json(field(j, "phi", ""));
  if (f.phi.n != a.rows()) throw MalformedInput("field 'phi': dimension does not match f.A");
  f.tau = number(field(j, "tau", ""), "tau");
  if (!(f.tau > 0.0)) throw MalformedInput("field 'tau' must be positive");
  for (const char* name : {"x0", "z0", "at"}) {
    if (!j.contains(name)) continue;
    Vector v = vector_from(j.at(name), name);
    if (v.size() != a.rows()) throw MalformedInput(std::string("field '") + name + "' has the wrong length");
    (std::string(name) == "x0" ? f.x0 : std::string(name) == "z0" ? f.z0 : f.at) = std::move(v);
  }
  return f;
}

json to_json(const ProblemFile& file) {
  json j;
  j["schema_version"] = file.schema_version;
  j["f"] = {{"type", "quadratic"}, {"A", matrix_json(file.a.mat())}, {"b", vector_json(file.b)}};
  j["phi"] = to_json(file.phi);
  j["tau"] = file.tau;
  if (file.x0) j["x0"] = vector_json(*file.x0);
  if (file.z0) j["z0"] = vector_json(*file.z0);
  if (file.at) j["at"] = vector_json(*file.at);
  return j;
}

json problem_json(const CompositeProblem& p) {
  json j;
  if (p.is_quadratic()) {
    j["f"] = {{"type", "quadratic"}, {"A", matrix_json(p.quadratic_a().mat())}, {"b", vector_json(p.quadratic_b())}};
  } else {
    j["f"] = {{"type", "callbacks"}, {"n", p.dim()}};
  }
  j["phi"] = to_json(p.phi());
  j["tau"] = p.tau();
  return j;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

std::string problem_hash(const CompositeProblem& p) { return sha256_hex(problem_json(p).dump()); }

json to_json(const SolveTrace& trace, const std::optional<Vector>& ref) {
  std::vector<double> quotients;
  if (ref && trace.iterates.size() >= 2) quotients = rate_profile(trace, *ref).quotients;
  json rows = json::array();
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    json row;
    row["k"] = k;
    row["residual"] = real_json(trace.residual_norms[k]);
    row["step_type"] = k == 0 ? json(nullptr) : json(step_type_name(trace.step_types[k - 1]));
    row["quotient"] = (k >= 1 && k - 1 < quotients.size()) ? json(quotients[k - 1]) : json(nullptr);
    rows.push_back(row);
  }
  json j;
  j["converged"] = trace.converged;
  j["iterations"] = trace.iterates.empty() ? 0 : trace.iterates.size() - 1;
  j["final_residual"] = trace.residual_norms.empty() ? json(nullptr) : real_json(trace.residual_norms.back());
  j["solution"] = trace.iterates.empty() ? json(nullptr) : vector_json(trace.iterates.back());
  j["table"] = rows;
  return j;
}

json to_json(const ConditionVerdict& v) {
  json j;
  j["id"] = condition_name(v.id);
  j["status"] = status_name(v.status);
  j["sigma"] = v.sigma ? real_json(*v.sigma) : json(nullptr);
  j["detail"] = v.detail;
  return j;
}

json to_json(const CertificationReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["problem_hash"] = r.problem_hash;
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  j["verdicts"] = verdicts;
  j["consensus"] = {{"status", r.consensus.consistent ? "consistent" : "inconsistent"},
                    {"clashing", r.consensus.clashing},
                    {"notes", r.consensus.notes},
                    {"warnings", r.consensus.warnings}};
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace ssn
