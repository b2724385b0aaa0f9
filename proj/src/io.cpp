#include "adaprox/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace adaprox {

namespace {

using nlohmann::json;

std::string fmt(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double parse_double(const std::string& token, long line, const char* what) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParseError(line, std::string("bad ") + what + " '" + token + "'");
  }
  return value;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown config key '" + prefix + item.key() + "'");
    }
  }
}

double require_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError("config key '" + path + "' must be a number");
  return value.get<double>();
}

}  // namespace

const char* const kTraceCsvHeader =
    "k,gamma,rho,ell,L,c,residual,best_residual,objective,gamma_cumavg,branch";

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const StepRecord& rec : trace.records) {
    out << rec.k << ',' << fmt(rec.gamma) << ',' << fmt(rec.rho) << ',' << fmt(rec.ell)
        << ',' << fmt(rec.big_l) << ',' << fmt(rec.c) << ',' << fmt(rec.residual) << ','
        << fmt(rec.best_residual) << ',' << fmt(rec.objective) << ','
        << fmt(rec.gamma_cumavg) << ',' << branch_name(rec.branch) << '\n';
  }
}

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  write_trace_csv(trace, out);
  if (!out) throw Error("write failed for '" + path + "'");
  if (trace.has_snapshots && !trace.records.empty() && trace.records.front().snapshot) {
    write_snapshots_csv(trace, path + ".snapshots");
  }
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  Trace trace;
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty trace file '" + path + "'");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceCsvHeader) {
    throw ParseError(1, "unexpected trace header '" + line + "'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != 11) {
      throw ParseError(line_no, "expected 11 fields, found " + std::to_string(fields.size()));
    }
    StepRecord rec;
    rec.k = static_cast<long>(parse_double(fields[0], line_no, "iteration index"));
    rec.gamma = parse_double(fields[1], line_no, "gamma");
    rec.rho = parse_double(fields[2], line_no, "rho");
    rec.ell = parse_double(fields[3], line_no, "ell");
    rec.big_l = parse_double(fields[4], line_no, "L");
    rec.c = parse_double(fields[5], line_no, "c");
    rec.residual = parse_double(fields[6], line_no, "residual");
    rec.best_residual = parse_double(fields[7], line_no, "best_residual");
    rec.objective = parse_double(fields[8], line_no, "objective");
    rec.gamma_cumavg = parse_double(fields[9], line_no, "gamma_cumavg");
    rec.branch = branch_from_name(fields[10]);
    if (rec.k != static_cast<long>(trace.records.size()) + 1) {
      throw ParseError(line_no, "iteration indices must increase by 1 from 1");
    }
    if (!(rec.gamma > 0.0)) throw ParseError(line_no, "gamma must be positive");
    trace.records.push_back(std::move(rec));
  }
  const std::string snapshot_path = path + ".snapshots";
  if (std::filesystem::exists(snapshot_path)) {
    read_snapshots_csv(trace, snapshot_path);
  }
  if (!trace.records.empty()) {
    trace.final_objective = trace.records.back().objective;
  }
  return trace;
}

void write_snapshots_csv(const Trace& trace, const std::string& path) {
  if (trace.x0.size() == 0) throw MissingIteratesError("trace has no initial point to write");
  std::ofstream out = open_out(path);
  out << "k,objective";
  for (Eigen::Index i = 0; i < trace.x0.size(); ++i) out << ",x" << i;
  out << '\n';
  out << 0 << ',' << fmt(trace.phi0);
  for (Eigen::Index i = 0; i < trace.x0.size(); ++i) out << ',' << fmt(trace.x0[i]);
  out << '\n';
  for (const StepRecord& rec : trace.records) {
    if (!rec.snapshot) {
      throw MissingIteratesError("iterate snapshot missing at row " + std::to_string(rec.k));
    }
    out << rec.k << ',' << fmt(rec.objective);
    for (Eigen::Index i = 0; i < rec.snapshot->size(); ++i) out << ',' << fmt((*rec.snapshot)[i]);
    out << '\n';
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

void read_snapshots_csv(Trace& trace, const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty snapshot file '" + path + "'");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv(line);
  if (header.size() < 3 || header[0] != "k" || header[1] != "objective") {
    throw ParseError(1, "unexpected snapshot header");
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(header.size()) - 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (static_cast<Eigen::Index>(fields.size()) != dim + 2) {
      throw ParseError(line_no, "snapshot row width does not match header");
    }
    const long k = static_cast<long>(parse_double(fields[0], line_no, "iteration index"));
    const double objective = parse_double(fields[1], line_no, "objective");
    Vector x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      x[i] = parse_double(fields[static_cast<size_t>(i) + 2], line_no, "coordinate");
    }
    if (k == 0) {
      trace.x0 = x;
      trace.phi0 = objective;
    } else if (k >= 1 && k <= trace.iterations()) {
      trace.records[static_cast<size_t>(k - 1)].snapshot = std::move(x);
      if (k == 1) trace.x1 = *trace.records[0].snapshot;
    } else {
      throw ParseError(line_no, "snapshot row " + std::to_string(k) +
                                    " has no matching trace row");
    }
  }
  trace.has_snapshots = true;
  if (trace.iterations() > 0 && trace.records.back().snapshot) {
    trace.x_final = *trace.records.back().snapshot;
  }
}

LibsvmData read_libsvm(std::istream& in, const std::string& origin) {
  std::vector<double> labels;
  std::vector<std::vector<std::pair<int, double>>> rows;
  int max_index = 0;

  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream stream(line);
    std::string token;
    if (!(stream >> token)) continue;  // blank or comment-only line

    labels.push_back(parse_double(token, line_no, "label"));
    rows.emplace_back();
    int prev_index = 0;
    while (stream >> token) {
      const size_t colon = token.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == token.size()) {
        throw ParseError(line_no, "expected <index>:<value>, found '" + token + "'");
      }
      const std::string idx_str = token.substr(0, colon);
      const std::string val_str = token.substr(colon + 1);
      const double idx_d = parse_double(idx_str, line_no, "feature index");
      const int idx = static_cast<int>(idx_d);
      if (idx_d != static_cast<double>(idx) || idx < 1) {
        throw ParseError(line_no, "feature index '" + idx_str + "' must be a positive integer");
      }
      if (idx <= prev_index) {
        throw ParseError(line_no, "feature indices must be strictly increasing");
      }
      const double value = parse_double(val_str, line_no, "feature value");
      if (!std::isfinite(value)) {
        throw ParseError(line_no, "feature value must be finite");
      }
      rows.back().emplace_back(idx - 1, value);
      prev_index = idx;
      max_index = std::max(max_index, idx);
    }
  }
  (void)origin;

  LibsvmData data;
  data.a = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), max_index);
  data.labels = Vector(static_cast<Eigen::Index>(labels.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    data.labels[static_cast<Eigen::Index>(i)] = labels[i];
    for (const auto& [j, value] : rows[i]) {
      data.a(static_cast<Eigen::Index>(i), j) = value;
    }
  }
  return data;
}

LibsvmData read_libsvm(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_libsvm(in, path);
}

void write_libsvm(const Matrix& a, const Vector& labels, const std::string& path) {
  if (a.rows() != labels.size()) throw DimensionError("design rows and label size differ");
  std::ofstream out = open_out(path);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out << fmt(labels[i]);
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) out << ' ' << (j + 1) << ':' << fmt(a(i, j));
    }
    out << '\n';
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_optimum_json(const ReferenceOptimum& ref, const std::string& path) {
  json doc;
  doc["objective"] = ref.objective;
  doc["x"] = std::vector<double>(ref.x.data(), ref.x.data() + ref.x.size());
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

ReferenceOptimum read_optimum_json(const std::string& path) {
  std::ifstream in = open_in(path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("objective") || !doc.contains("x")) {
    throw ConfigError("optimum file '" + path + "' needs keys 'objective' and 'x'");
  }
  ReferenceOptimum ref;
  ref.objective = require_number(doc["objective"], "objective");
  if (!doc["x"].is_array()) throw ConfigError("optimum key 'x' must be an array");
  const auto values = doc["x"].get<std::vector<double>>();
  ref.x = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  return ref;
}

RunSpec parse_run_spec_json(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse '" + origin + "': " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(doc, {"problem", "solver", "output", "parallel_runs"}, "");

  RunSpec spec;
  if (!doc.contains("problem") || !doc["problem"].is_object()) {
    throw ConfigError("config needs a 'problem' object");
  }
  const json& problem = doc["problem"];
  reject_unknown(problem,
                 {"family", "data", "rows", "cols", "seed", "lambda", "sparsity", "noise",
                  "cubic_m", "p"},
                 "problem.");
  if (!problem.contains("family") || !problem["family"].is_string()) {
    throw ConfigError("config key 'problem.family' (string) is required");
  }
  spec.family = family_from_name(problem["family"].get<std::string>());
  if (problem.contains("data")) {
    if (!problem["data"].is_string()) throw ConfigError("'problem.data' must be a string");
    spec.data_path = problem["data"].get<std::string>();
  }
  if (problem.contains("rows")) {
    spec.instance.rows = static_cast<int>(require_number(problem["rows"], "problem.rows"));
  }
  if (problem.contains("cols")) {
    spec.instance.cols = static_cast<int>(require_number(problem["cols"], "problem.cols"));
  }
  if (problem.contains("seed")) {
    const double seed = require_number(problem["seed"], "problem.seed");
    if (seed < 0) throw ConfigError("'problem.seed' must be nonnegative");
    spec.instance.seed = problem["seed"].get<std::uint64_t>();
  }
  if (problem.contains("lambda")) {
    spec.instance.lambda = require_number(problem["lambda"], "problem.lambda");
    if (spec.instance.lambda < 0) throw ConfigError("'problem.lambda' must be >= 0");
  }
  if (problem.contains("sparsity")) {
    spec.instance.sparsity = require_number(problem["sparsity"], "problem.sparsity");
    if (spec.instance.sparsity <= 0 || spec.instance.sparsity > 1) {
      throw ConfigError("'problem.sparsity' must lie in (0, 1]");
    }
  }
  if (problem.contains("noise")) {
    spec.instance.noise = require_number(problem["noise"], "problem.noise");
    if (spec.instance.noise < 0) throw ConfigError("'problem.noise' must be >= 0");
  }
  if (problem.contains("cubic_m")) {
    spec.instance.cubic_m = require_number(problem["cubic_m"], "problem.cubic_m");
    if (spec.instance.cubic_m <= 0) throw ConfigError("'problem.cubic_m' must be > 0");
  }
  if (problem.contains("p")) {
    spec.instance.p = require_number(problem["p"], "problem.p");
    if (!(spec.instance.p > 1.0 && spec.instance.p <= 2.0)) {
      throw ConfigError("'problem.p' must lie in (1, 2]");
    }
  }
  if (spec.data_path.empty() && (spec.instance.rows < 1 || spec.instance.cols < 1)) {
    throw ConfigError("synthetic instances need positive 'problem.rows' and 'problem.cols'");
  }

  if (doc.contains("solver")) {
    if (!doc["solver"].is_object()) throw ConfigError("'solver' must be an object");
    const json& solver = doc["solver"];
    reject_unknown(solver,
                   {"rule", "pi", "nu", "memory", "gamma0", "tol", "max_iters", "aa_nu_mode"},
                   "solver.");
    if (solver.contains("rule")) {
      if (!solver["rule"].is_string()) throw ConfigError("'solver.rule' must be a string");
      spec.solver.rule = rule_from_name(solver["rule"].get<std::string>());
    }
    if (solver.contains("pi")) {
      spec.solver.pi = require_number(solver["pi"], "solver.pi");
      if (!(spec.solver.pi >= 1.0 && spec.solver.pi <= 2.0)) {
        throw ConfigError("'solver.pi' must lie in [1, 2]");
      }
    }
    if (solver.contains("nu")) {
      spec.solver.nu = require_number(solver["nu"], "solver.nu");
      if (!(spec.solver.nu > 0.0 && spec.solver.nu <= 1.0)) {
        throw ConfigError("'solver.nu' must lie in (0, 1]");
      }
      spec.nu_explicit = true;
    }
    if (solver.contains("memory")) {
      spec.solver.memory = static_cast<int>(require_number(solver["memory"], "solver.memory"));
      if (spec.solver.memory < 1) throw ConfigError("'solver.memory' must be >= 1");
    }
    if (solver.contains("gamma0")) {
      spec.solver.gamma0 = require_number(solver["gamma0"], "solver.gamma0");
    }
    if (solver.contains("tol")) {
      spec.solver.tol = require_number(solver["tol"], "solver.tol");
      if (spec.solver.tol < 0) throw ConfigError("'solver.tol' must be >= 0");
    }
    if (solver.contains("max_iters")) {
      spec.solver.max_iters =
          static_cast<long>(require_number(solver["max_iters"], "solver.max_iters"));
      if (spec.solver.max_iters < 1) throw ConfigError("'solver.max_iters' must be >= 1");
    }
    if (solver.contains("aa_nu_mode")) {
      if (!solver["aa_nu_mode"].is_string()) {
        throw ConfigError("'solver.aa_nu_mode' must be a string");
      }
      const std::string mode = solver["aa_nu_mode"].get<std::string>();
      if (mode == "aggregate") {
        spec.solver.aa_nu_mode = AaNuMode::Aggregate;
      } else if (mode == "per-pair") {
        spec.solver.aa_nu_mode = AaNuMode::PerPair;
      } else {
        throw ConfigError("'solver.aa_nu_mode' must be 'aggregate' or 'per-pair'");
      }
    }
  }

  if (doc.contains("output")) {
    if (!doc["output"].is_object()) throw ConfigError("'output' must be an object");
    const json& output = doc["output"];
    reject_unknown(output, {"path", "snapshots"}, "output.");
    if (output.contains("path")) {
      if (!output["path"].is_string()) throw ConfigError("'output.path' must be a string");
      spec.output_path = output["path"].get<std::string>();
    }
    if (output.contains("snapshots")) {
      if (!output["snapshots"].is_boolean()) {
        throw ConfigError("'output.snapshots' must be a boolean");
      }
      spec.snapshots = output["snapshots"].get<bool>();
      spec.solver.record_snapshots = spec.snapshots;
    }
  }

  if (doc.contains("parallel_runs")) {
    spec.parallel_runs = static_cast<int>(require_number(doc["parallel_runs"], "parallel_runs"));
    if (spec.parallel_runs < 1) throw ConfigError("'parallel_runs' must be >= 1");
  }
  return spec;
}

RunSpec read_run_spec_json(const std::string& path) {
  std::ifstream in = open_in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_spec_json(buffer.str(), path);
}

CompositeProblem instantiate_problem(const RunSpec& spec, std::string* warning) {
  const double lambda = spec.instance.lambda;
  if (spec.data_path.empty()) {
    return make_problem(spec.family, spec.instance);
  }
  LibsvmData data = read_libsvm(spec.data_path);
  if (data.a.rows() == 0) throw ConfigError("dataset '" + spec.data_path + "' is empty");
  switch (spec.family) {
    case ProblemFamily::Lasso:
      return make_lasso(data.a, data.labels, lambda);
    case ProblemFamily::Logreg:
    case ProblemFamily::Cubic: {
      bool valid = true;
      for (Eigen::Index i = 0; i < data.labels.size(); ++i) {
        if (data.labels[i] != 1.0 && data.labels[i] != -1.0) {
          valid = false;
          break;
        }
      }
      if (!valid) {
        const double lo = data.labels.minCoeff();
        for (Eigen::Index i = 0; i < data.labels.size(); ++i) {
          data.labels[i] = data.labels[i] == lo ? -1.0 : 1.0;
        }
        if (warning) {
          *warning = "labels in '" + spec.data_path + "' remapped to {-1, +1} (minimum label " +
                     fmt(lo) + " -> -1)";
        }
      }
      if (spec.family == ProblemFamily::Logreg) {
        return make_logistic(data.a, data.labels, lambda);
      }
      const Matrix h = 0.25 * (data.a.transpose() * data.a);
      const Vector bvec = -0.5 * (data.a.transpose() * data.labels);
      return make_cubic(h, bvec, spec.instance.cubic_m);
    }
    case ProblemFamily::Pnorm:
      return make_pnorm(data.a, data.labels, spec.instance.p, lambda);
  }
  throw ConfigError("unhandled problem family");
}

double effective_nu(const RunSpec& spec, const CompositeProblem& problem) {
  return spec.nu_explicit ? spec.solver.nu : problem.holder_exponent_hint;
}

}  // namespace adaprox
