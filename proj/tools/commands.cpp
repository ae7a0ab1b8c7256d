// Copyright 2026 The projconj Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "projconj/conjugacy.hpp"
#include "projconj/error.hpp"
#include "projconj/flow.hpp"
#include "projconj/invariants.hpp"

namespace projconj::cli {
namespace {

using nlohmann::json;

[[noreturn]] void bad_input(const std::string& msg) {
  throw Error(ErrorCode::kInvalidInput, msg);
}

// Values this small in a basis are rounding noise; print them as zero.
double snap(double v) { return std::abs(v) <= 1e-13 ? 0.0 : v; }

json vec_json(const Vec& v, bool snap_tiny = false) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(snap_tiny ? snap(v(i)) : v(i));
  return out;
}

json basis_json(const Subspace& s) {
  json out = json::array();
  for (Eigen::Index c = 0; c < s.basis().cols(); ++c) {
    out.push_back(vec_json(s.basis().col(c), true));
  }
  return out;
}

json dense_json(const Mat& m) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(snap(m(r, c)));
  }
  return {{"dense", {{"dim", m.rows()}, {"entries", entries}}}};
}

json cells_json(const SigmaStructure& s) {
  json out = json::array();
  for (const auto& c : s.canonical().cells) out.push_back({{"omega", c.omega}, {"size", c.size}});
  return out;
}

// 1-based coordinates that vanish on the whole subspace.
json zero_coordinates(const Subspace& s) {
  json out = json::array();
  for (Eigen::Index i = 0; i < s.basis().rows(); ++i) {
    if (s.basis().row(i).cwiseAbs().maxCoeff() <= 1e-9) out.push_back(i + 1);
  }
  return out;
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) bad_input(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad_input(where + ": expected a finite number");
  return x;
}

int int_at(const json& v, const std::string& where) {
  if (!v.is_number_integer()) bad_input(where + ": expected an integer");
  return v.get<int>();
}

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad_input("cannot open '" + path + "'");
  return read_all(in);
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << origin << ":" << line << ":" << col << ": malformed JSON (" << e.what() << ")";
    bad_input(msg.str());
  }
}

Mat matrix_of(const MatrixInput& in) { return in.matrix; }

LyapunovStructure structure_of(const MatrixInput& in, double eps) {
  if (in.blocks) return structure_from_blocks(*in.blocks);
  return analyze_structure(in.matrix, eps);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0' || !std::isfinite(v)) {
      bad_input(what + ": cannot read '" + token + "' as a number");
    }
    out.push_back(v);
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == ';') {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  return out;
}

json verdict_json(const Verdict& v, const LyapunovStructure& la, const LyapunovStructure& lb) {
  json out;
  out["conjugate"] = v.conjugate;
  json profiles = {{"a", json::array()}, {"b", json::array()}};
  for (const auto& s : reduced_profile(la)) profiles["a"].push_back(describe(s));
  for (const auto& s : reduced_profile(lb)) profiles["b"].push_back(describe(s));
  out["profiles"] = profiles;
  if (v.pairing) {
    json pairs = json::array();
    for (const auto& [i, k] : *v.pairing) pairs.push_back({i + 1, k + 1});
    out["pairing"] = pairs;
  }
  if (v.obstruction) {
    const auto& o = *v.obstruction;
    json ob = {{"invariant", std::string(to_string(o.kind))}, {"a", o.a_value}, {"b", o.b_value}};
    ob["block"] = o.block < 0 ? json(nullptr) : json(o.block + 1);
    out["obstruction"] = ob;
  }
  return out;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotConjugate: return kExitNotConjugate;
    case ErrorCode::kDimensionMismatch: return kExitDimensionMismatch;
    case ErrorCode::kInternal: return kExitInternal;
    default: return kExitInputError;
  }
}

std::uint64_t seed_from_env() {
  const char* env = std::getenv("PROJCONJ_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') bad_input("PROJCONJ_SEED must be a non-negative integer");
  return v;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MatrixInput parse_matrix_input(const json& doc) {
  if (!doc.is_object()) bad_input("matrix input: expected a JSON object");
  const bool has_dense = doc.contains("dense");
  const bool has_blocks = doc.contains("blocks");
  if (has_dense == has_blocks) {
    bad_input("matrix input: exactly one of \"dense\" or \"blocks\" is required");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "dense" && key != "blocks") bad_input("matrix input: unknown field \"" + key + "\"");
  }
  MatrixInput out;
  out.source = doc;
  if (has_dense) {
    const json& d = doc["dense"];
    if (!d.is_object()) bad_input("dense: expected an object");
    if (!d.contains("dim")) bad_input("dense.dim: missing");
    if (!d.contains("entries")) bad_input("dense.entries: missing");
    const int n = int_at(d["dim"], "dense.dim");
    if (n < 1) bad_input("dense.dim: must be positive");
    const json& e = d["entries"];
    if (!e.is_array()) bad_input("dense.entries: expected an array");
    if (e.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
      bad_input("dense.entries: expected " + std::to_string(n * n) + " entries, found " +
                std::to_string(e.size()));
    }
    out.matrix.resize(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const auto idx = static_cast<std::size_t>(r * n + c);
        out.matrix(r, c) = number_at(e[idx], "dense.entries[" + std::to_string(idx) + "]");
      }
    }
    return out;
  }
  const json& bl = doc["blocks"];
  if (!bl.is_array()) bad_input("blocks: expected an array");
  std::vector<BlockSpec> blocks;
  for (std::size_t i = 0; i < bl.size(); ++i) {
    const std::string where = "blocks[" + std::to_string(i) + "]";
    const json& b = bl[i];
    if (!b.is_object()) bad_input(where + ": expected an object");
    if (!b.contains("lambda")) bad_input(where + ".lambda: missing");
    if (!b.contains("cells")) bad_input(where + ".cells: missing");
    BlockSpec spec;
    spec.lambda = number_at(b["lambda"], where + ".lambda");
    const json& cells = b["cells"];
    if (!cells.is_array()) bad_input(where + ".cells: expected an array");
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const std::string cw = where + ".cells[" + std::to_string(k) + "]";
      const json& c = cells[k];
      if (!c.is_object()) bad_input(cw + ": expected an object");
      if (!c.contains("size")) bad_input(cw + ".size: missing");
      JordanCell cell;
      cell.omega = c.contains("omega") ? number_at(c["omega"], cw + ".omega") : 0.0;
      cell.size = int_at(c["size"], cw + ".size");
      spec.cells.push_back(cell);
    }
    blocks.push_back(std::move(spec));
  }
  validate_blocks(blocks);
  out.matrix = materialize(blocks);
  out.blocks = std::move(blocks);
  return out;
}

MatrixInput load_matrix_input(const std::string& arg) {
  std::size_t first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') {
    return parse_matrix_input(parse_json_text(arg, "<inline>"));
  }
  if (arg == "-") return parse_matrix_input(parse_json_text(read_all(std::cin), "<stdin>"));
  return parse_matrix_input(parse_json_text(read_file(arg), arg));
}

Vec parse_point(const std::string& text) {
  const std::vector<double> v = parse_numbers(text, "point");
  if (v.empty()) bad_input("point: no coordinates given");
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<Vec> load_points(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<Vec> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r,;") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto nums = parse_numbers(line, path + ":" + std::to_string(lineno));
    out.push_back(Eigen::Map<const Vec>(nums.data(), static_cast<Eigen::Index>(nums.size())));
  }
  return out;
}

CommandResult cmd_analyze(const MatrixInput& in, double eps) {
  const LyapunovStructure ls = structure_of(in, eps);
  const Mat& a = in.matrix;
  json blocks = json::array();
  json morse = json::array();
  const MorseDecomposition md = morse_decomposition(ls);
  for (std::size_t i = 0; i < ls.blocks.size(); ++i) {
    const auto& b = ls.blocks[i];
    const Mat sigma =
        restrict_to(a, b.space) - b.lambda * Mat::Identity(b.space.dim(), b.space.dim());
    const RecurrenceProfile rp = recurrence_profile(sigma, b.sigma);
    const Subspace recurrent = Subspace::from_orthonormal(b.space.basis() * rp.e_space.basis());
    json filtration = json::array();
    for (const auto& r : rp.r_filtration) filtration.push_back(r.dim());
    blocks.push_back({
        {"index", i + 1},
        {"lambda", b.lambda},
        {"dim", b.space.dim()},
        {"cells", cells_json(b.sigma)},
        {"sigma", describe(b.sigma)},
        {"basis", basis_json(b.space)},
        {"profile",
         {{"s_max", rp.profile.s_max},
          {"d", rp.profile.d},
          {"stable_dims", rp.stable_dims},
          {"strata_dims", rp.strata_dims},
          {"filtration_dims", filtration}}},
        {"recurrent_subspace",
         {{"dim", recurrent.dim()},
          {"basis", basis_json(recurrent)},
          {"zero_coordinates", zero_coordinates(recurrent)}}},
    });
    morse.push_back({{"index", i + 1},
                     {"lambda", md.sets[i].lambda},
                     {"proj_dim", md.sets[i].proj_dim}});
  }
  json result = {{"dim", ls.ambient_dim},
                 {"spectral_radius", ls.spectral_radius},
                 {"exact_structure", in.blocks.has_value()},
                 {"blocks", blocks},
                 {"morse_sets", morse}};
  // Flow order: the last Morse set attracts, the first repels.
  json order = json::array();
  for (std::size_t i = ls.blocks.size(); i >= 1; --i) order.push_back(i);
  result["morse_order"] = order;
  return {result, kExitOk};
}

CommandResult cmd_decide(const MatrixInput& a, const MatrixInput& b, double eps) {
  if (a.matrix.rows() != b.matrix.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "A is " + std::to_string(a.matrix.rows()) + "-dimensional, B is " +
                    std::to_string(b.matrix.rows()) + "-dimensional");
  }
  const LyapunovStructure la = structure_of(a, eps);
  const LyapunovStructure lb = structure_of(b, eps);
  const Verdict v = decide(la, lb, eps);
  return {verdict_json(v, la, lb), v.conjugate ? kExitOk : kExitNotConjugate};
}

CommandResult cmd_conjugate(const MatrixInput& a, const MatrixInput& b,
                            const ConjugateOptions& opts,
                            std::vector<std::pair<Vec, Vec>>* images) {
  CommandResult decided = cmd_decide(a, b, opts.eps);
  if (decided.exit_code != kExitOk) return decided;

  const ConjugacyChain chain = build_chain(matrix_of(a), matrix_of(b), opts.eps);
  json result = decided.result;
  result["lambdas"] = chain.lambdas;
  result["mus"] = chain.mus;
  result["gammas"] = chain.gammas;
  json stages = json::array();
  for (const auto& s : chain.stages) {
    stages.push_back({{"j", s.j}, {"gamma", s.gamma}, {"delta", s.delta},
                      {"w_dim", s.w_space.dim()}, {"z_dim", s.z_space.dim()}});
  }
  result["stages"] = stages;
  result["block_residual"] = chain.block_residual;
  result["target"] = dense_json(chain.target);

  json imgs = json::array();
  const auto n = chain.source.rows();
  for (const Vec& x : opts.points) {
    if (x.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "point has " + std::to_string(x.size()) + " coordinates, expected " +
                      std::to_string(n));
    }
    const ProjPoint p = proj_point(x);
    const ProjPoint q = eval_chain(chain, p);
    imgs.push_back({{"point_in", vec_json(p.rep())}, {"point_out", vec_json(q.rep())}});
    if (images != nullptr) images->emplace_back(p.rep(), q.rep());
  }
  result["images"] = imgs;

  int code = kExitOk;
  if (opts.verify > 0) {
    const VerificationReport r = verify_chain(chain, opts.verify, opts.times, opts.tol, opts.seed);
    result["verification"] = {
        {"points", r.n_points},
        {"times", opts.times},
        {"tol", r.tol},
        {"seed", r.seed},
        {"max_violation", r.max_violation},
        {"worst_point", vec_json(r.worst_point.rep())},
        {"worst_time", r.worst_time},
        {"guard_band_points", r.boundary_points},
        {"injective", r.injective},
        {"min_separation_ratio", r.min_separation_ratio},
        {"boundary_fixed", r.boundary_fixed},
        {"max_boundary_displacement", r.max_boundary_displacement},
        {"passed", r.passed},
    };
    if (!r.passed) code = kExitVerificationFailed;
  }
  return {result, code};
}

std::string cmd_simulate(const MatrixInput& in, const SimulateOptions& opts) {
  const Mat& a = in.matrix;
  if (opts.point.size() != a.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "point has " + std::to_string(opts.point.size()) + " coordinates, expected " +
                    std::to_string(a.rows()));
  }
  if (opts.steps < 1) bad_input("steps must be at least 1");
  if (!std::isfinite(opts.t_max)) bad_input("t-max must be finite");
  const ProjPoint start = proj_point(opts.point);  // rejects the zero vector
  Vec x = opts.point / opts.point.norm();
  const double dt = opts.t_max / opts.steps;

  std::ostringstream out;
  out << "t";
  for (Eigen::Index i = 0; i < a.rows(); ++i) out << ",x" << i;
  out << "\n";
  for (int k = 0; k <= opts.steps; ++k) {
    if (k > 0) x = sphere_flow(a, dt, x);
    const Vec shown = opts.canonical ? proj_point(x).rep() : x;
    out << format_double(k * dt);
    for (Eigen::Index i = 0; i < shown.size(); ++i) out << "," << format_double(shown(i));
    out << "\n";
  }
  (void)start;
  return out.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological conjugacy of projective linear flows", "projconj"};
  app.require_subcommand(1);

  double eps = kDefaultEps;
  std::string in_a;
  std::string in_b;

  auto* analyze = app.add_subcommand("analyze", "Lyapunov blocks, Morse sets and recurrence");
  analyze->add_option("input", in_a, "matrix JSON: file path, '-' or inline")->required();
  analyze->add_option("--eps", eps, "clustering and rank tolerance");

  auto* decide_cmd = app.add_subcommand("decide", "decide whether two flows are conjugate");
  decide_cmd->add_option("a", in_a, "matrix JSON for A")->required();
  decide_cmd->add_option("b", in_b, "matrix JSON for B")->required();
  decide_cmd->add_option("--eps", eps, "clustering and rank tolerance");

  ConjugateOptions copts;
  std::string times_text;
  std::vector<std::string> point_texts;
  std::string points_file;
  std::string images_csv;
  std::uint64_t seed = 0;
  auto* conj = app.add_subcommand("conjugate", "build and check the conjugating homeomorphism");
  conj->add_option("a", in_a, "matrix JSON for A")->required();
  conj->add_option("b", in_b, "matrix JSON for B")->required();
  conj->add_option("--eps", eps, "clustering and rank tolerance");
  conj->add_option("--tol", copts.tol, "verification tolerance on projective distance");
  conj->add_option("--verify", copts.verify, "number of random points to verify");
  conj->add_option("--times", times_text, "comma-separated verification times");
  auto* seed_opt = conj->add_option("--seed", seed, "random seed (default: $PROJCONJ_SEED)");
  conj->add_option("--point", point_texts, "point to map, comma-separated; repeatable");
  conj->add_option("--points", points_file, "file with one point per line");
  conj->add_option("--images-csv", images_csv, "write point_in/point_out pairs as CSV");

  SimulateOptions sopts;
  std::string sim_point;
  std::string output;
  auto* sim = app.add_subcommand("simulate", "sample a projective trajectory as CSV");
  sim->add_option("input", in_a, "matrix JSON")->required();
  sim->add_option("--point", sim_point, "start point, comma-separated")->required();
  sim->add_option("--t-max", sopts.t_max, "final time");
  sim->add_option("--steps", sopts.steps, "number of time steps");
  sim->add_flag("--canonical", sopts.canonical, "print canonical projective representatives");
  sim->add_option("--output", output, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "projconj: " << e.what() << "\n";
    return kExitInputError;
  }

  const auto start = std::chrono::steady_clock::now();
  std::string command;
  if (analyze->parsed()) command = "analyze";
  if (decide_cmd->parsed()) command = "decide";
  if (conj->parsed()) command = "conjugate";
  if (sim->parsed()) command = "simulate";

  json report = {{"command", command}};
  try {
    if (!(eps > 0.0)) {
      throw Error(ErrorCode::kInvalidTolerance, "--eps must be positive");
    }
    if (command == "simulate") {
      const MatrixInput in = load_matrix_input(in_a);
      sopts.point = parse_point(sim_point);
      const std::string csv = cmd_simulate(in, sopts);
      if (output.empty()) {
        out << csv;
      } else {
        std::ofstream f(output);
        if (!f) bad_input("cannot write '" + output + "'");
        f << csv;
      }
      return kExitOk;
    }

    const MatrixInput a = load_matrix_input(in_a);
    std::optional<MatrixInput> b;
    if (command != "analyze") b = load_matrix_input(in_b);
    std::string digest_src = a.source.dump();
    if (b) digest_src += "\n" + b->source.dump();
    report["input_digest"] = fnv1a_hex(digest_src);

    CommandResult res;
    json tolerances = {{"eps", eps}};
    if (command == "analyze") {
      res = cmd_analyze(a, eps);
    } else if (command == "decide") {
      res = cmd_decide(a, *b, eps);
    } else {
      copts.eps = eps;
      if (!(copts.tol > 0.0)) throw Error(ErrorCode::kInvalidTolerance, "--tol must be positive");
      if (copts.verify < 0) bad_input("--verify must be non-negative");
      if (!times_text.empty()) copts.times = parse_numbers(times_text, "--times");
      copts.seed = seed_opt->count() > 0 ? seed : seed_from_env();
      for (const auto& t : point_texts) copts.points.push_back(parse_point(t));
      if (!points_file.empty()) {
        for (auto& p : load_points(points_file)) copts.points.push_back(std::move(p));
      }
      std::vector<std::pair<Vec, Vec>> images;
      res = cmd_conjugate(a, *b, copts, &images);
      tolerances["tol"] = copts.tol;
      report["parameters"] = {{"seed", copts.seed}, {"verify", copts.verify},
                              {"times", copts.times}};
      if (!images_csv.empty()) {
        std::ofstream f(images_csv);
        if (!f) bad_input("cannot write '" + images_csv + "'");
        const auto n = a.matrix.rows();
        for (Eigen::Index i = 0; i < n; ++i) f << (i ? "," : "") << "in_x" << i;
        for (Eigen::Index i = 0; i < n; ++i) f << ",out_x" << i;
        f << "\n";
        for (const auto& [pin, pout] : images) {
          for (Eigen::Index i = 0; i < n; ++i) f << (i ? "," : "") << format_double(pin(i));
          for (Eigen::Index i = 0; i < n; ++i) f << "," << format_double(pout(i));
          f << "\n";
        }
      }
    }
    report["result"] = res.result;
    report["tolerances"] = tolerances;
    report["wall_time_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    out << report.dump(2) << "\n";
    return res.exit_code;
  } catch (const Error& e) {
    report["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (command != "simulate") out << report.dump(2) << "\n";
    err << "projconj: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    report["error"] = {{"code", "internal"}, {"message", e.what()}};
    if (command != "simulate") out << report.dump(2) << "\n";
    err << "projconj: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace projconj::cli
