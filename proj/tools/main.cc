// Copyright 2026 The DRGL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// drgl: distributionally robust graph learning experiments.
//
//   drgl train       --config cfg.json --out run/
//   drgl eval        --config cfg.json --out run/
//   drgl sweep       --config cfg.json --out run/
//   drgl export-viz  --config cfg.json --out run/
//   drgl selftest
//
// Exit codes: 0 success, 1 other failure, 2 config error, 3 solver failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drgl/classify.h"
#include "drgl/dro_grad.h"
#include "drgl/encoder.h"
#include "drgl/experiment.h"
#include "drgl/lfd.h"
#include "drgl/random.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw drgl::Error("cannot write " + path.string());
  out << text;
}

std::string jsonl(const std::vector<json>& lines) {
  std::string out;
  for (const auto& line : lines) out += line.dump() + "\n";
  return out;
}

void write_tables(const fs::path& out, const drgl::ExperimentResult& result) {
  write_file(out / "table.md", drgl::emit_table(result.table, drgl::TableFormat::kMarkdown));
  write_file(out / "table.csv", drgl::emit_table(result.table, drgl::TableFormat::kCsv));
  write_file(out / "table.json", drgl::emit_table(result.table, drgl::TableFormat::kJson));
  write_file(out / "report.jsonl", jsonl(result.report_lines));
  write_file(out / "timing.jsonl", jsonl(result.timing_lines));
  write_file(out / "metadata.json", result.metadata.dump(2) + "\n");
}

void write_run(const fs::path& out, const drgl::RunArtifacts& run) {
  std::vector<json> lines, timing;
  for (const auto& rec : run.report.epochs) {
    lines.push_back(drgl::to_json(rec));
    timing.push_back(drgl::timing_to_json(rec));
  }
  write_file(out / "report.jsonl", jsonl(lines));
  write_file(out / "timing.jsonl", jsonl(timing));
  write_file(out / "predictions.csv", drgl::predictions_csv(run.predictions));
  const auto viz = drgl::export_embeddings_2d(run.embeddings, run.predictions, run.noisy.labels);
  write_file(out / "viz.csv", viz.csv);
  if (viz.degenerate) std::cerr << "warning: embeddings are rank-deficient; viz.csv uses raw coordinates\n";
}

drgl::RunArtifacts single_run(const drgl::ExperimentConfig& cfg) {
  const drgl::Dataset dataset = drgl::load_dataset(cfg.dataset);
  return drgl::run_single(dataset, cfg, cfg.mode, cfg.noise, 0);
}

// Quick built-in checks that need no data.
int selftest() {
  int failures = 0;
  auto report = [&](const char* name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  drgl::Rng rng(7);
  Eigen::MatrixXd support(6, 3);
  for (Eigen::Index i = 0; i < support.size(); ++i) support.data()[i] = rng.normal();
  const std::vector<std::int32_t> labels = {0, 1, 0, 1, 0, 1};
  const auto phat = drgl::empirical_distributions(labels, 2);
  const Eigen::MatrixXd costs = drgl::pairwise_costs(support, drgl::CostKind::kEuclidean);
  drgl::DroConfig dro;

  const auto zero = drgl::solve_lfd(costs, phat, Eigen::VectorXd::Zero(2), dro);
  report("zero radius keeps the empirical distributions",
         (zero.lfd - phat.weights).cwiseAbs().maxCoeff() <= 1e-10);
  report("zero radius margin is 1 + total variation",
         std::abs(zero.total_margin - 1.0 -
                  drgl::total_variation(phat.weights.row(0).transpose(),
                                        phat.weights.row(1).transpose())) <= 1e-10);
  const auto full = drgl::solve_lfd(costs, phat, Eigen::VectorXd::Constant(2, costs.maxCoeff()), dro);
  report("saturated radius margin is 1", std::abs(full.total_margin - 1.0) <= 1e-6);

  const auto mid = drgl::solve_lfd(costs, phat, drgl::resolve_radii(costs, dro, 2), dro);
  const auto res = drgl::lfd_residuals(mid, costs, phat);
  report("median radius solution satisfies its constraints",
         res.column_marginal <= 1e-6 && res.row_marginal <= 1e-6 &&
             res.budget_excess <= 1e-6 && res.min_weight >= -1e-9);

  report("entropy of uniform over 3 is ln 3",
         std::abs(drgl::entropy(Eigen::VectorXd::Constant(3, 1.0 / 3.0)) - std::log(3.0)) <= 1e-12);

  drgl::Graph g;
  g.features = drgl::FeatureMatrix::Random(5, 4);
  g.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  const auto adj = drgl::normalize_adjacency(g);
  const Eigen::MatrixXd x = drgl::dense_features(g);
  const auto params = drgl::init_encoder(4, 3, 2, 11);
  auto fwd = drgl::forward(params, adj, x, false, 0);
  const Eigen::MatrixXd upstream = Eigen::MatrixXd::Ones(5, 2);
  const auto grads = drgl::backward(params, fwd.tape, upstream);
  const double h = 1e-6;
  auto p_plus = params, p_minus = params;
  p_plus.w2(0, 0) += h;
  p_minus.w2(0, 0) -= h;
  const double fd = (drgl::forward(p_plus, adj, x, false, 0).embeddings.sum() -
                     drgl::forward(p_minus, adj, x, false, 0).embeddings.sum()) / (2 * h);
  report("encoder gradient matches finite difference",
         std::abs(fd - grads.w2(0, 0)) <= 1e-6 * std::max(1.0, std::abs(fd)));

  std::cout << (failures == 0 ? "selftest passed" : "selftest failed") << "\n";
  return failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributionally robust graph learning experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "run";

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Experiment configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Run directory")->capture_default_str();
  };
  CLI::App* train_cmd = app.add_subcommand(
      "train", "Train one encoder (repetition 0) and write its checkpoint");
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Run the configured cell over all repetitions and write tables");
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Run the sweep grid (modes x classifiers x noise) and write tables");
  CLI::App* viz_cmd = app.add_subcommand(
      "export-viz", "Train repetition 0 and export 2D embeddings and predictions");
  CLI::App* self_cmd = app.add_subcommand("selftest", "Run built-in sanity checks");
  for (auto* sub : {train_cmd, eval_cmd, sweep_cmd, viz_cmd}) add_run_options(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  fs::path out = out_dir;
  try {
    if (self_cmd->parsed()) return selftest();

    const drgl::ExperimentConfig cfg = drgl::load_config(config_path);
    fs::create_directories(out);
    write_file(out / "config.json", drgl::to_json(cfg).dump(2) + "\n");

    if (train_cmd->parsed()) {
      const auto run = single_run(cfg);
      drgl::save_checkpoint(out / "checkpoint.bin", run.params);
      write_run(out, run);
      std::cout << "test accuracy " << run.accuracy << "%\n";
    } else if (viz_cmd->parsed()) {
      write_run(out, single_run(cfg));
    } else {
      const auto result =
          eval_cmd->parsed() ? drgl::run_experiment(cfg) : drgl::run_sweep(cfg);
      write_tables(out, result);
      std::cout << drgl::emit_table(result.table, drgl::TableFormat::kMarkdown);
    }
    return kExitOk;
  } catch (const drgl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const drgl::LfdSolveError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    try {
      fs::create_directories(out);
      write_file(out / "lfd_failure.txt", e.dump());
      std::cerr << "instance dump written to " << (out / "lfd_failure.txt").string() << "\n";
    } catch (const std::exception&) {
    }
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
