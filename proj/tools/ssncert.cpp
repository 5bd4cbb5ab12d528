// ssncert: solve, certify and probe composite problems from JSON files, or
// replay the built-in worked examples.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ssn/certification.hpp"
#include "ssn/errors.hpp"
#include "ssn/scenarios.hpp"
#include "ssn/serialization.hpp"
#include "ssn/ssn_solver.hpp"

namespace {

using nlohmann::json;

constexpr int kExitMismatch = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitInconsistent = 3;
constexpr int kExitMalformed = 64;
constexpr int kExitUnsupported = 65;

struct Args {
  std::string input;
  double tol = 1e-11;
  int max_iter = 100;
  std::uint64_t seed = 0;
  double radius = 1e-2;
  int pairs = 1000;
  std::string out;
  std::string map = "nor";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ssn::MalformedInput("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const json& report, const Args& a) {
  const std::string text = ssn::dump(report);
  if (a.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + a.out + "'");
  out << text;
}

json provenance(const std::string& input_hash, const Args& a) {
  return {{"input_hash", input_hash}, {"seed", a.seed}, {"version", ssn::kToolVersion}};
}

json base_report(const std::string& command) { return {{"schema_version", ssn::kSchemaVersion}, {"command", command}}; }

ssn::SolverOptions solver_options(const Args& a) {
  ssn::SolverOptions o;
  o.tol = a.tol;
  o.max_iter = a.max_iter;
  o.seed = a.seed;
  o.validate();
  return o;
}

// Solves on the requested map; returns the trace and the point x = prox(z).
std::pair<ssn::SolveTrace, ssn::Vector> run_solve(const ssn::ProblemFile& f, const ssn::CompositeProblem& p,
                                                  const Args& a) {
  const ssn::SolverOptions opts = solver_options(a);
  const Eigen::Index n = p.dim();
  if (a.map == "nat") {
    const ssn::Vector x0 = f.x0 ? *f.x0 : ssn::Vector::Zero(n);
    auto trace = ssn::solve_natural_residual(p, x0, opts);
    ssn::Vector x = trace.iterates.back();
    return {std::move(trace), x};
  }
  const ssn::Vector z0 = f.z0 ? *f.z0 : ssn::Vector::Zero(n);
  auto trace = ssn::solve_normal_map(p, z0, opts);
  ssn::Vector x = ssn::prox_eval(p.phi(), p.tau(), trace.iterates.back());
  return {std::move(trace), x};
}

int cmd_solve(const Args& a) {
  const auto f = ssn::parse_problem(read_file(a.input));
  const auto p = f.problem();
  auto [trace, x] = run_solve(f, p, a);
  json r = base_report("solve");
  r["solve"] = ssn::to_json(trace, trace.converged ? std::optional<ssn::Vector>(trace.iterates.back()) : std::nullopt);
  r["solve"]["map"] = a.map;
  r["solve"]["x"] = ssn::vector_json(x);
  r["provenance"] = provenance(ssn::problem_hash(p), a);
  emit(r, a);
  return trace.converged ? 0 : kExitNotConverged;
}

int cmd_certify(const Args& a) {
  const auto f = ssn::parse_problem(read_file(a.input));
  const auto p = f.problem();
  json r = base_report("certify");
  ssn::Vector x;
  bool converged = true;
  if (f.at) {
    x = *f.at;
  } else {
    auto [trace, xs] = run_solve(f, p, a);
    converged = trace.converged;
    r["solve"] = ssn::to_json(trace);
    r["solve"]["map"] = a.map;
    x = xs;
  }
  if (!converged) {
    r["provenance"] = provenance(ssn::problem_hash(p), a);
    emit(r, a);
    return kExitNotConverged;
  }
  ssn::CrossCheckOptions opts;
  opts.seed = a.seed;
  opts.smr.seed = a.seed;
  opts.smr.radius = a.radius;
  opts.smr.pairs = a.pairs;
  const auto st = ssn::StationaryTriple::from_x(p, x, 1e-8);
  const auto rep = ssn::cross_check(p, st, opts);
  r["certify"] = ssn::to_json(rep);
  r["certify"]["x_bar"] = ssn::vector_json(st.x_bar);
  r["provenance"] = provenance(rep.problem_hash, a);
  emit(r, a);
  return rep.consensus.consistent ? 0 : kExitInconsistent;
}

int cmd_probe_smr(const Args& a) {
  const auto f = ssn::parse_problem(read_file(a.input));
  const auto p = f.problem();
  ssn::Vector x;
  if (f.at) {
    x = *f.at;
  } else {
    auto [trace, xs] = run_solve(f, p, a);
    if (!trace.converged) {
      json r = base_report("probe-smr");
      r["solve"] = ssn::to_json(trace);
      r["provenance"] = provenance(ssn::problem_hash(p), a);
      emit(r, a);
      return kExitNotConverged;
    }
    x = xs;
  }
  const auto st = ssn::StationaryTriple::from_x(p, x, 1e-8);
  ssn::SmrOptions so;
  so.radius = a.radius;
  so.pairs = a.pairs;
  so.seed = a.seed;
  const bool nat = a.map == "nat";
  const auto v = ssn::smr_probe(nat ? ssn::ResidualMapKind::nat : ssn::ResidualMapKind::nor, p,
                                nat ? st.x_bar : st.z_bar, so);
  json r = base_report("probe-smr");
  r["certify"] = {{"map", a.map}, {"verdict", ssn::to_json(v)}};
  r["provenance"] = provenance(ssn::problem_hash(p), a);
  emit(r, a);
  return 0;
}

int cmd_reproduce(const Args& a) {
  const auto res = ssn::reproduce(a.input, a.seed);
  json r = base_report("reproduce");
  r["certify"] = res.report;
  r["provenance"] = provenance(ssn::sha256_hex(a.input), a);
  emit(r, a);
  for (const auto& f : res.failures) std::cerr << "mismatch: " << f << "\n";
  return res.passed ? 0 : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semismooth Newton solver and regularity certifier"};
  app.require_subcommand(1);
  Args a;
  std::string seed_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_text, "random seed (falls back to SSN_CERTIFY_SEED)");
    sub->add_option("--out", a.out, "write the report here instead of stdout");
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--tol", a.tol, "residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", a.max_iter, "iteration limit")->check(CLI::PositiveNumber);
    sub->add_option("--map", a.map, "residual map")->check(CLI::IsMember({"nat", "nor"}));
  };
  auto add_smr = [&](CLI::App* sub) {
    sub->add_option("--radius", a.radius, "probe radius")->check(CLI::PositiveNumber);
    sub->add_option("--pairs", a.pairs, "sampled pairs")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "run semismooth Newton on a problem file");
  solve->add_option("problem", a.input, "problem file")->required();
  add_solver(solve);
  add_common(solve);

  auto* certify = app.add_subcommand("certify", "cross-check the regularity conditions at a solution");
  certify->add_option("problem", a.input, "problem file")->required();
  add_solver(certify);
  add_smr(certify);
  add_common(certify);

  auto* probe = app.add_subcommand("probe-smr", "sample the residual map's lower Lipschitz bound");
  probe->add_option("problem", a.input, "problem file")->required();
  add_solver(probe);
  add_smr(probe);
  add_common(probe);

  auto* repro = app.add_subcommand("reproduce", "replay a built-in worked example");
  repro->add_option("example", a.input, "example id")->required()->check(CLI::IsMember(ssn::scenario_ids()));
  add_common(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitMalformed;
  }

  try {
    if (seed_text.empty()) {
      if (const char* env = std::getenv("SSN_CERTIFY_SEED")) seed_text = env;
    }
    if (!seed_text.empty()) {
      std::size_t used = 0;
      a.seed = std::stoull(seed_text, &used);
      if (used != seed_text.size()) throw std::invalid_argument("bad seed");
    }
  } catch (const std::exception&) {
    std::cerr << "error: seed must be a non-negative integer, got '" << seed_text << "'\n";
    return kExitMalformed;
  }

  try {
    if (*solve) return cmd_solve(a);
    if (*certify) return cmd_certify(a);
    if (*probe) return cmd_probe_smr(a);
    return cmd_reproduce(a);
  } catch (const ssn::UnsupportedKind& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const ssn::MalformedInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
}
