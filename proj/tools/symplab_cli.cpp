// symplab command-line front end.
//
//   symplab verify <suite> [--config file] [--seed n] [--out dir] [--set key=value ...]
//   symplab figures [--out dir]
//   symplab pipeline --d n [--seed n] [--out dir]
//   symplab splitting check <file> [--d n]
//   symplab splitting generate --d n [--nodes m] [--out file]
//
// Config precedence: suite defaults < config file < --set < --seed/--out flags.
// SYMPLAB_OUT_DIR supplies the output directory when --out is not given.
// Exit status: 0 pass, 1 verdict fail, 2 usage or parameter error.

#include "symplab/symplab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using symplab::json;

std::string default_out_dir() {
  const char* env = std::getenv("SYMPLAB_OUT_DIR");
  return env && *env ? env : "symplab_out";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw symplab::SuiteError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw symplab::SuiteError(path + ": " + e.what());
  }
}

/// "key=value" with value parsed as JSON when possible, else kept as a string.
void apply_set(json& params, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw symplab::SuiteError("--set expects key=value, got '" + kv + "'");
  const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
  json parsed = json::parse(value, nullptr, false);
  params[key] = parsed.is_discarded() ? json(value) : parsed;
}

void print_summary(const symplab::SuiteResult& r) {
  for (const symplab::Check& c : r.checks) {
    std::cout << (c.report.pass ? "  ok   " : "  FAIL ") << c.id << "  [" << c.report.quantity << " " << c.report.predicate
              << ", min " << c.report.min << ", max " << c.report.max << ", tol " << c.report.tol << "]\n";
  }
  std::cout << r.suite << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.checks.size() << " checks, "
            << static_cast<long>(r.wall_ms) << " ms)\n";
}

int run_verify(const std::string& suite, const std::string& config_path, std::optional<std::uint64_t> seed,
               std::string out, const std::vector<std::string>& sets) {
  symplab::SuiteConfig cfg;
  cfg.suite = suite;
  if (!config_path.empty()) {
    const json file = read_json_file(config_path);
    if (!file.is_object()) throw symplab::SuiteError(config_path + ": expected a JSON object");
    for (auto it = file.begin(); it != file.end(); ++it) {
      if (it.key() != "params" && it.key() != "seed" && it.key() != "out" && it.key() != "suite") {
        throw symplab::SuiteError(config_path + ": unknown key '" + it.key() + "'");
      }
    }
    if (file.contains("suite") && file.at("suite") != suite) {
      throw symplab::SuiteError(config_path + ": config is for suite " + file.at("suite").dump());
    }
    if (file.contains("params")) cfg.params = file.at("params");
    if (file.contains("seed")) cfg.seed = file.at("seed").get<std::uint64_t>();
    if (file.contains("out")) cfg.out_dir = file.at("out").get<std::string>();
  }
  for (const std::string& kv : sets) apply_set(cfg.params, kv);
  if (seed) cfg.seed = seed;
  if (!out.empty()) cfg.out_dir = out;
  if (cfg.out_dir.empty()) cfg.out_dir = default_out_dir();

  const symplab::SuiteResult r = symplab::run_suite(cfg);
  print_summary(r);
  std::cout << "report: " << (std::filesystem::path(cfg.out_dir) / (suite + ".json")).string() << "\n";
  return r.pass ? 0 : 1;
}

int run_pipeline(int d, std::uint64_t seed, std::string out) {
  if (out.empty()) out = default_out_dir();
  const symplab::SuiteResult r = symplab::pipeline_check(d, seed, out);
  for (const json& st : r.notes.at("stages")) {
    std::cout << "  stage " << st.at("id").get<std::string>() << ": " << st.at("status").get<std::string>();
    if (st.at("nodes").get<int>() > 0) std::cout << " (" << st.at("nodes").get<int>() << " nodes)";
    std::cout << "\n";
  }
  print_summary(r);
  return r.pass ? 0 : 1;
}

int run_splitting_check(const std::string& path, std::optional<int> d) {
  const symplab::SplittingInput in = symplab::splitting_from_json(read_json_file(path));
  const symplab::CutDecomposition cut = symplab::cut_along(in.surface, in.multicurve);
  // Without an explicit d, the target is the number of pieces the cut produces.
  const int target = d ? *d : in.d ? *in.d : static_cast<int>(cut.components.size());
  const symplab::SplittingCertificate cert = symplab::verify_splitting(cut, target);
  std::cout << symplab::certificate_to_json(cert).dump(2) << "\n";
  return cert.pass ? 0 : 1;
}

int run_splitting_generate(int d, int nodes, const std::string& out) {
  const symplab::ModelSplitting m = symplab::build_model_splitting(d, nodes);
  const std::string body = symplab::splitting_to_json(m).dump(2) + "\n";
  if (out.empty()) {
    std::cout << body;
  } else {
    symplab::svg::write_file(out, body);
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suites for explicit symplectic surface models"};
  app.require_subcommand(1);

  std::string suite, config_path, out;
  std::uint64_t seed = 0;
  std::vector<std::string> sets;
  auto* verify = app.add_subcommand("verify", "run a verification suite and write its JSON report");
  verify->add_option("suite", suite, "model1, model2, model3, orth, moser, splitting, homology or pipeline")->required();
  verify->add_option("--config", config_path, "JSON file with {params, seed, out}");
  auto* seed_opt = verify->add_option("--seed", seed, "seed for randomized suites");
  verify->add_option("--out", out, "output directory");
  verify->add_option("--set", sets, "parameter override key=value (repeatable)");

  std::string fig_out;
  auto* figures = app.add_subcommand("figures", "write the slice, deformation, gamma and density figures");
  figures->add_option("--out", fig_out, "output directory");

  int pipe_d = 0;
  std::uint64_t pipe_seed = 1;
  std::string pipe_out;
  auto* pipeline = app.add_subcommand("pipeline", "chain the per-node constructions for degree d");
  pipeline->add_option("--d", pipe_d, "degree, 2..8")->required();
  pipeline->add_option("--seed", pipe_seed, "seed for the random plane families (default 1)");
  pipeline->add_option("--out", pipe_out, "output directory");

  auto* splitting = app.add_subcommand("splitting", "check or generate splitting systems");
  splitting->require_subcommand(1);
  std::string check_file;
  int check_d = 0;
  auto* check = splitting->add_subcommand("check", "verify a multicurve on a polygon-schema surface");
  check->add_option("file", check_file, "JSON {faces, curves, [retained], [d]}")->required();
  auto* check_d_opt = check->add_option("--d", check_d, "expected number of pieces");
  int gen_d = 0, gen_nodes = 0;
  std::string gen_out;
  auto* generate = splitting->add_subcommand("generate", "emit the model splitting system for degree d");
  generate->add_option("--d", gen_d, "degree")->required();
  generate->add_option("--nodes", gen_nodes, "number of retained nodes");
  generate->add_option("--out", gen_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      return run_verify(suite, config_path, seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt, out, sets);
    }
    if (*figures) {
      for (const std::string& f : symplab::emit_figures(fig_out.empty() ? default_out_dir() : fig_out)) {
        std::cout << "wrote " << f << "\n";
      }
      return 0;
    }
    if (*pipeline) return run_pipeline(pipe_d, pipe_seed, pipe_out);
    if (*check) return run_splitting_check(check_file, check_d_opt->count() ? std::optional<int>(check_d) : std::nullopt);
    if (*generate) return run_splitting_generate(gen_d, gen_nodes, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
