// Command-line front end: JSON matrix I/O, one subcommand per public
// operation, and a `check` command running the full property suite.
//
// Input schema (v1):  {"matrices": [[[number,...],...],...], "weights": [..]?}
// Output: a single ResultEnvelope JSON object on stdout; logs on stderr.
// Exit codes: 0 ok, 2 invalid input, 3 not converged, 4 property failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bures/bures.hpp"

namespace {

using bures::Matrix;
using bures::SpdMatrix;
using bures::Weights;
using json = nlohmann::json;

// ---- envelope serialization (17 significant digits, stable layout) ----

std::string jnum(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".einf") == std::string::npos) s += ".0";
  return s;
}

std::string jstr(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string jmatrix(const Matrix& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += ",";
    out += "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ",";
      out += jnum(m(i, j));
    }
    out += "]";
  }
  return out + "]";
}

std::string jseq(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += jnum(v[i]);
  }
  return out + "]";
}

class JsonObject {
 public:
  JsonObject& field(const std::string& key, std::string raw_value) {
    if (!body_.empty()) body_ += ",";
    body_ += jstr(key) + ":" + std::move(raw_value);
    return *this;
  }
  std::string str() const { return "{" + body_ + "}"; }

 private:
  std::string body_;
};

void emit_envelope(const std::string& command, const std::string& result_raw,
                   std::optional<std::string> diagnostics_raw = std::nullopt) {
  JsonObject env;
  env.field("command", jstr(command));
  env.field("result", result_raw);
  if (diagnostics_raw) env.field("diagnostics", *diagnostics_raw);
  env.field("schema_version", "1");
  std::cout << env.str() << "\n";
}

[[noreturn]] void emit_error(const std::string& command, const std::string& type,
                             const std::string& message, int exit_code) {
  JsonObject err;
  err.field("type", jstr(type));
  err.field("message", jstr(message));
  JsonObject env;
  env.field("command", jstr(command));
  env.field("error", err.str());
  env.field("schema_version", "1");
  std::cout << env.str() << "\n";
  std::exit(exit_code);
}

// ---- input parsing ----

struct ProblemFile {
  std::vector<Matrix> matrices;
  std::optional<std::vector<double>> weights;
};

Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw std::runtime_error("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw std::runtime_error("matrix rows must be nonempty arrays");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw std::runtime_error("matrix rows must all have the same length");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw std::runtime_error("matrix entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

ProblemFile parse_problem(const std::string& text) {
  const json doc = json::parse(text);
  if (!doc.is_object() || !doc.contains("matrices")) {
    throw std::runtime_error("input must be an object with a \"matrices\" field");
  }
  ProblemFile pf;
  for (const json& jm : doc["matrices"]) pf.matrices.push_back(parse_matrix(jm));
  if (pf.matrices.empty()) throw std::runtime_error("\"matrices\" must be nonempty");
  for (const Matrix& m : pf.matrices) {
    if (m.rows() != m.cols() || m.rows() != pf.matrices[0].rows()) {
      throw std::runtime_error("all matrices must be square and of equal dimension");
    }
  }
  if (doc.contains("weights")) {
    pf.weights = doc["weights"].get<std::vector<double>>();
    if (pf.weights->size() != pf.matrices.size()) {
      throw std::runtime_error("\"weights\" length must equal the number of matrices");
    }
  }
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::string text;
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_problem(text);
}

std::vector<SpdMatrix> as_spd(const std::vector<Matrix>& ms,
                              bures::Definiteness def) {
  std::vector<SpdMatrix> out;
  out.reserve(ms.size());
  for (const Matrix& m : ms) out.emplace_back(m, def);
  return out;
}

Weights problem_weights(const ProblemFile& pf) {
  if (pf.weights) return Weights(*pf.weights);
  return Weights::uniform(pf.matrices.size());
}

int classify(const std::exception& e, std::string& type) {
  if (dynamic_cast<const bures::NotConvergedError*>(&e)) { type = "NotConverged"; return 3; }
  if (dynamic_cast<const bures::NotPsdError*>(&e)) { type = "NotPsd"; return 2; }
  if (dynamic_cast<const bures::NotPdError*>(&e)) { type = "NotPd"; return 2; }
  if (dynamic_cast<const bures::DimensionMismatchError*>(&e)) { type = "DimensionMismatch"; return 2; }
  if (dynamic_cast<const bures::ParamOutOfRangeError*>(&e)) { type = "ParamOutOfRange"; return 2; }
  if (dynamic_cast<const bures::NegativeDiscriminantError*>(&e)) { type = "NegativeDiscriminant"; return 2; }
  if (dynamic_cast<const bures::NumericalError*>(&e)) { type = "Numerical"; return 2; }
  type = "Parse";
  return 2;
}

std::string barycenter_diagnostics(const bures::BarycenterSolution& sol) {
  JsonObject d;
  d.field("iterations", std::to_string(sol.iterations));
  d.field("converged", sol.converged ? "true" : "false");
  d.field("residual", jnum(sol.residual));
  d.field("stationarity_defect", jnum(sol.stationarity_defect));
  d.field("trace_sequence", jseq(sol.trace_sequence));
  d.field("variance_sequence", jseq(sol.variance_sequence));
  d.field("step_distances", jseq(sol.step_distances));
  d.field("conditioning_warning", sol.conditioning_warning ? "true" : "false");
  return d.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bures-Wasserstein geometry on positive definite matrices"};
  app.require_subcommand(1);

  std::string input_path;
  double t_param = 0.5;
  double tol = 1e-10;
  int max_iter = 500;
  std::string initial_spec;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
  int trials = 50;
  std::string mc_mode = "auto";

  auto add_input = [&](CLI::App* cmd, bool required = false) {
    auto* opt = cmd->add_option("input", input_path,
                                "path to a problem JSON file ('-' or omitted: stdin)");
    if (required) opt->required();
  };

  auto* dist = app.add_subcommand("dist", "Bures-Wasserstein distance between matrices[0] and matrices[1]");
  add_input(dist);
  auto* fid = app.add_subcommand("fidelity", "fidelity F(A,B)");
  add_input(fid);
  auto* mean = app.add_subcommand("mean", "Wasserstein mean of matrices[0] and matrices[1]");
  add_input(mean);
  auto* geo = app.add_subcommand("geodesic", "geodesic point gamma(t)");
  add_input(geo);
  geo->add_option("--t", t_param, "geodesic parameter in [0,1]")->default_val(0.5);
  auto* bary = app.add_subcommand("barycenter", "Wasserstein barycentre of the ensemble");
  add_input(bary);
  bary->add_option("--tol", tol)->default_val(1e-10);
  bary->add_option("--max-iter", max_iter)->default_val(500);
  bary->add_option("--initial", initial_spec,
                   "initial iterate: index into matrices, or a JSON file");
  auto* couple = app.add_subcommand("couple", "optimal m-coupling maps and value");
  add_input(couple);
  couple->add_option("--tol", tol)->default_val(1e-10);
  couple->add_option("--max-iter", max_iter)->default_val(500);
  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of the pair cost or coupling value");
  add_input(mc);
  mc->add_option("--samples", samples)->default_val(1000000);
  mc->add_option("--seed", seed)->default_val(0);
  mc->add_option("--mode", mc_mode, "pair | coupling | auto")->default_val("auto");
  auto* check = app.add_subcommand("check", "run the property suite on the input or on random ensembles");
  check->add_option("input", input_path, "optional problem JSON file");
  check->add_option("--trials", trials)->default_val(50);
  check->add_option("--seed", seed)->default_val(0);

  CLI11_PARSE(app, argc, argv);
  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();

  try {
    if (name == "dist" || name == "fidelity" || name == "mean" || name == "geodesic") {
      const ProblemFile pf = load_problem(input_path);
      if (pf.matrices.size() < 2) {
        throw bures::DimensionMismatchError(name + " requires at least two matrices");
      }
      // distance and fidelity are defined on PSD inputs; the geodesic needs PD
      const bool need_pd = (name == "mean" || name == "geodesic");
      const auto def = need_pd ? bures::Definiteness::kPositiveDefinite
                               : bures::Definiteness::kPositiveSemidefinite;
      const SpdMatrix a(pf.matrices[0], def);
      const SpdMatrix b(pf.matrices[1], def);
      if (name == "dist") {
        const bures::DistanceReport rep = bures::bures_distance(a, b);
        JsonObject diag;
        diag.field("fidelity", jnum(rep.fidelity));
        diag.field("trace_a", jnum(rep.trace_a));
        diag.field("trace_b", jnum(rep.trace_b));
        emit_envelope(name, jnum(rep.d), diag.str());
      } else if (name == "fidelity") {
        emit_envelope(name, jnum(bures::fidelity(a, b)));
      } else if (name == "mean") {
        emit_envelope(name, jmatrix(bures::wasserstein_mean(a, b).matrix()));
      } else {
        const bures::GeodesicPath path(a, b);
        JsonObject diag;
        diag.field("t", jnum(t_param));
        emit_envelope(name, jmatrix(path.evaluate(t_param).matrix()), diag.str());
      }
      return 0;
    }

    if (name == "barycenter") {
      const ProblemFile pf = load_problem(input_path);
      const std::vector<SpdMatrix> as =
          as_spd(pf.matrices, bures::Definiteness::kPositiveDefinite);
      bures::BarycenterConfig cfg;
      cfg.tol = tol;
      cfg.max_iter = max_iter;
      if (!initial_spec.empty()) {
        if (initial_spec.find_first_not_of("0123456789") == std::string::npos) {
          const std::size_t idx = std::stoul(initial_spec);
          if (idx >= as.size()) throw bures::ParamOutOfRangeError("--initial index out of range");
          cfg.initial = as[idx];
        } else {
          const ProblemFile init = load_problem(initial_spec);
          cfg.initial = SpdMatrix(init.matrices[0]);
        }
      }
      const bures::BarycenterSolution sol =
          bures::barycenter(as, problem_weights(pf), cfg);
      emit_envelope(name, jmatrix(sol.omega.matrix()), barycenter_diagnostics(sol));
      return 0;
    }

    if (name == "couple") {
      const ProblemFile pf = load_problem(input_path);
      const std::vector<SpdMatrix> as =
          as_spd(pf.matrices, bures::Definiteness::kPositiveDefinite);
      bures::BarycenterConfig cfg;
      cfg.tol = tol;
      cfg.max_iter = max_iter;
      const bures::CouplingPlan plan =
          bures::build_coupling(as, problem_weights(pf), cfg);
      std::string r_maps = "[";
      for (std::size_t j = 0; j < plan.r_maps.size(); ++j) {
        if (j) r_maps += ",";
        r_maps += jmatrix(plan.r_maps[j].matrix());
      }
      r_maps += "]";
      std::string pair_maps = "[";
      for (std::size_t j = 0; j < plan.pair_maps.size(); ++j) {
        if (j) pair_maps += ",";
        pair_maps += jmatrix(plan.pair_maps[j]);
      }
      pair_maps += "]";
      JsonObject result;
      result.field("optimal_value", jnum(plan.optimal_value));
      result.field("omega", jmatrix(plan.omega.matrix()));
      result.field("r_maps", r_maps);
      result.field("pair_maps", pair_maps);
      emit_envelope(name, result.str());
      return 0;
    }

    if (name == "mc") {
      const ProblemFile pf = load_problem(input_path);
      std::string mode = mc_mode;
      if (mode == "auto") mode = pf.matrices.size() == 2 ? "pair" : "coupling";
      bures::McEstimate est;
      if (mode == "pair") {
        if (pf.matrices.size() < 2) {
          throw bures::DimensionMismatchError("mc pair mode requires two matrices");
        }
        est = bures::mc_pair_cost(SpdMatrix(pf.matrices[0]), SpdMatrix(pf.matrices[1]),
                                  samples, seed);
      } else if (mode == "coupling") {
        const std::vector<SpdMatrix> as =
            as_spd(pf.matrices, bures::Definiteness::kPositiveDefinite);
        const Weights w = problem_weights(pf);
        const bures::CouplingPlan plan = bures::build_coupling(as, w);
        est = bures::mc_coupling_value(plan, w, samples, seed);
      } else {
        throw bures::ParamOutOfRangeError("--mode must be pair, coupling or auto");
      }
      JsonObject diag;
      diag.field("std_error", jnum(est.std_error));
      diag.field("samples", std::to_string(est.samples));
      diag.field("seed", std::to_string(est.seed));
      diag.field("mode", jstr(mode));
      emit_envelope(name, jnum(est.mean), diag.str());
      return 0;
    }

    if (name == "check") {
      std::optional<bures::CheckSuite> suite;
      if (!input_path.empty()) {
        const ProblemFile pf = load_problem(input_path);
        suite = bures::CheckSuite::from_input(
            as_spd(pf.matrices, bures::Definiteness::kPositiveDefinite),
            problem_weights(pf), trials, seed);
      } else {
        suite = bures::CheckSuite::from_random(trials, seed);
      }
      const std::vector<bures::PropertyResult> results = suite->run();
      int failed = 0;
      std::string props = "[";
      for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        if (!r.pass()) ++failed;
        std::cerr << (r.pass() ? "[PASS] " : "[FAIL] ") << r.name
                  << " (trials=" << r.trials << ", failures=" << r.failures << ")";
        if (!r.note.empty()) std::cerr << " -- " << r.note;
        std::cerr << "\n";
        if (i) props += ",";
        JsonObject pr;
        pr.field("name", jstr(r.name));
        pr.field("pass", r.pass() ? "true" : "false");
        pr.field("trials", std::to_string(r.trials));
        pr.field("failures", std::to_string(r.failures));
        pr.field("worst_defect", jnum(r.worst_defect));
        if (!r.note.empty()) pr.field("note", jstr(r.note));
        props += pr.str();
      }
      props += "]";
      JsonObject result;
      result.field("passed", std::to_string(static_cast<int>(results.size()) - failed));
      result.field("failed", std::to_string(failed));
      result.field("properties", props);
      JsonObject diag;
      diag.field("seed", std::to_string(seed));
      diag.field("trials", std::to_string(trials));
      emit_envelope(name, result.str(), diag.str());
      return failed == 0 ? 0 : 4;
    }
  } catch (const std::exception& e) {
    std::string type;
    const int code = classify(e, type);
    std::cerr << "error: " << e.what() << "\n";
    emit_error(name, type, e.what(), code);
  }
  return 2;
}
