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

#include "drgl/experiment.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "drgl/projection.h"
#include "drgl/random.h"

namespace drgl {

using nlohmann::json;
using Eigen::Index;

const char* to_string(Mode mode) {
  return mode == Mode::kVanilla ? "vanilla" : "drgl";
}

const char* to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kSoftmax: return "softmax";
    case ClassifierKind::kKnn: return "knn";
    case ClassifierKind::kKde: return "kde";
    case ClassifierKind::kLabelPropagation: return "label_propagation";
  }
  return "unknown";
}

namespace {

// Stream tags for per-repetition seeds.
enum SeedStream : std::uint64_t {
  kFewShotStream = 1,
  kNoiseStream = 2,
  kInitStream = 3,
  kPretrainStream = 4,
  kDrglStream = 5,
  kHeadStream = 6,
};

// ---- config parsing -------------------------------------------------------

class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  // Rejects keys outside `known`, which catches misspelled options.
  void only(std::initializer_list<const char*> known) const {
    for (const auto& [key, _] : obj_.items()) {
      if (std::none_of(known.begin(), known.end(),
                       [&](const char* k) { return key == k; }))
        throw ConfigError(where_ + ": unknown key '" + key + "'");
    }
  }

  bool has(const char* key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

  template <typename T>
  T get(const char* key, T fallback) const {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError("");
      } else {
        if (!v.is_string()) throw ConfigError("");
      }
      return v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type");
    }
  }

  Reader child(const char* key) const { return Reader(obj_.at(key), where_ + "." + key); }
  const json& raw(const char* key) const { return obj_.at(key); }
  const std::string& where() const { return where_; }

 private:
  const json& obj_;
  std::string where_;
};

Mode parse_mode(const std::string& s, const std::string& where) {
  if (s == "vanilla") return Mode::kVanilla;
  if (s == "drgl") return Mode::kDrgl;
  throw ConfigError(where + ": mode must be 'vanilla' or 'drgl'");
}

ClassifierKind parse_classifier(const std::string& s, const std::string& where) {
  if (s == "softmax") return ClassifierKind::kSoftmax;
  if (s == "knn") return ClassifierKind::kKnn;
  if (s == "kde") return ClassifierKind::kKde;
  if (s == "label_propagation") return ClassifierKind::kLabelPropagation;
  throw ConfigError(where + ": unknown classifier '" + s + "'");
}

NoiseSpec parse_noise(const Reader& r) {
  r.only({"sigma_multiplier", "edge_removal_rate"});
  NoiseSpec n;
  n.sigma_multiplier = r.get("sigma_multiplier", 0.0);
  n.edge_removal_rate = r.get("edge_removal_rate", 0.0);
  try {
    validate(n);
  } catch (const InvalidArgument& e) {
    throw ConfigError(r.where() + ": " + e.what());
  }
  return n;
}

SbmSpec parse_sbm(const Reader& r) {
  r.only({"nodes", "classes", "p_in", "p_out", "feature_dim", "feature_shift",
          "test_fraction", "seed"});
  SbmSpec s;
  s.num_nodes = r.get("nodes", s.num_nodes);
  s.num_classes = r.get("classes", s.num_classes);
  s.p_in = r.get("p_in", s.p_in);
  s.p_out = r.get("p_out", s.p_out);
  s.feature_dim = r.get("feature_dim", s.feature_dim);
  s.feature_shift = r.get("feature_shift", s.feature_shift);
  s.test_fraction = r.get("test_fraction", s.test_fraction);
  s.seed = r.get<std::uint64_t>("seed", s.seed);
  return s;
}

DroConfig parse_dro(const Reader& r) {
  r.only({"radius_rule", "rho", "radii", "cost_kind", "solver_tolerance",
          "max_iterations"});
  DroConfig d;
  const auto rule = r.get<std::string>("radius_rule", "median_fraction");
  if (rule == "median_fraction") d.radius_rule = RadiusRule::kMedianFraction;
  else if (rule == "absolute") d.radius_rule = RadiusRule::kAbsolute;
  else throw ConfigError(r.where() + ".radius_rule: unknown rule '" + rule + "'");
  const auto cost = r.get<std::string>("cost_kind", "euclidean");
  if (cost == "euclidean") d.cost_kind = CostKind::kEuclidean;
  else if (cost == "squared_euclidean") d.cost_kind = CostKind::kSquaredEuclidean;
  else throw ConfigError(r.where() + ".cost_kind: unknown cost '" + cost + "'");
  d.rho = r.get("rho", d.rho);
  d.solver_tolerance = r.get("solver_tolerance", d.solver_tolerance);
  d.max_iterations = r.get("max_iterations", d.max_iterations);
  if (r.has("radii")) {
    const json& radii = r.raw("radii");
    if (!radii.is_array()) throw ConfigError(r.where() + ".radii: expected an array");
    for (const auto& v : radii) {
      if (!v.is_number()) throw ConfigError(r.where() + ".radii: expected numbers");
      d.radii.push_back(v.get<double>());
    }
  }
  if (d.radius_rule == RadiusRule::kAbsolute && d.radii.empty())
    throw ConfigError(r.where() + ": absolute radius rule needs 'radii'");
  try {
    validate(d);
  } catch (const InvalidArgument& e) {
    throw ConfigError(r.where() + ": " + e.what());
  }
  return d;
}

json dro_to_json(const DroConfig& d) {
  return {{"radius_rule", to_string(d.radius_rule)},
          {"rho", d.rho},
          {"radii", d.radii},
          {"cost_kind", to_string(d.cost_kind)},
          {"solver_tolerance", d.solver_tolerance},
          {"max_iterations", d.max_iterations}};
}

json noise_to_json(const NoiseSpec& n) {
  return {{"sigma_multiplier", n.sigma_multiplier},
          {"edge_removal_rate", n.edge_removal_rate}};
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

// ---- pipeline -------------------------------------------------------------

struct PreparedRun {
  Dataset noisy;
  NormalizedAdjacency adjacency;
  Eigen::MatrixXd features;
  EncoderParams warm;
};

PreparedRun prepare(const Dataset& dataset, const ExperimentConfig& cfg,
                    const NoiseSpec& noise, std::uint64_t rep_seed, bool need_encoder) {
  PreparedRun run;
  run.noisy.labels =
      sample_few_shot(dataset.labels, cfg.shots, derive_seed(rep_seed, kFewShotStream));
  NoiseSpec spec = noise;
  spec.seed = derive_seed(rep_seed, kNoiseStream);
  run.noisy.graph = apply_noise(dataset.graph, spec);
  run.adjacency = normalize_adjacency(run.noisy.graph);
  if (!need_encoder) return run;
  run.features = dense_features(run.noisy.graph);
  run.warm = init_encoder(run.noisy.graph.feature_dim(), cfg.encoder.hidden,
                          cfg.encoder.embedding, derive_seed(rep_seed, kInitStream),
                          cfg.encoder.dropout);
  PretrainConfig pre = cfg.pretrain;
  pre.seed = derive_seed(rep_seed, kPretrainStream);
  run.warm = pretrain_supervised(run.noisy.graph, run.noisy.labels, run.warm, pre);
  return run;
}

TrainResult train_drgl(const PreparedRun& run, const ExperimentConfig& cfg,
                       std::uint64_t rep_seed) {
  TrainConfig tc = cfg.train;
  tc.seed = derive_seed(rep_seed, kDrglStream);
  return train(run.noisy.graph, run.noisy.labels, run.warm, tc);
}

Eigen::MatrixXd observed_rows(const Eigen::MatrixXd& embeddings, const LabelSet& labels,
                              std::vector<std::int32_t>* y) {
  Eigen::MatrixXd out(static_cast<Index>(labels.observed.size()), embeddings.cols());
  if (y) y->clear();
  for (std::size_t k = 0; k < labels.observed.size(); ++k) {
    out.row(static_cast<Index>(k)) = embeddings.row(labels.observed[k].node);
    if (y) y->push_back(labels.observed[k].label);
  }
  return out;
}

PredictionSet classify_all(ClassifierKind kind, const PreparedRun& run,
                           const Eigen::MatrixXd& embeddings,
                           const ExperimentConfig& cfg, std::uint64_t rep_seed) {
  const LabelSet& labels = run.noisy.labels;
  std::vector<std::int32_t> all(static_cast<std::size_t>(run.noisy.graph.num_nodes()));
  std::iota(all.begin(), all.end(), 0);
  switch (kind) {
    case ClassifierKind::kSoftmax: {
      HeadConfig hc = cfg.head;
      hc.seed = derive_seed(rep_seed, kHeadStream);
      const SoftmaxHead head = train_softmax_head(embeddings, labels, hc);
      return predict(head, embeddings, all);
    }
    case ClassifierKind::kKnn: {
      std::vector<std::int32_t> y;
      const Eigen::MatrixXd train_points = observed_rows(embeddings, labels, &y);
      const int k = std::min<int>(cfg.knn_k, static_cast<int>(y.size()));
      return knn_predict(train_points, y, embeddings, all, k, labels.num_classes);
    }
    case ClassifierKind::kKde: {
      std::vector<std::int32_t> y;
      const Eigen::MatrixXd support = observed_rows(embeddings, labels, &y);
      const Eigen::MatrixXd costs = pairwise_costs(support, cfg.train.dro.cost_kind);
      const LfdSolution sol = solve_lfd(
          costs, empirical_distributions(y, labels.num_classes), cfg.train.dro);
      const double bandwidth =
          cfg.kde_bandwidth ? *cfg.kde_bandwidth : silverman_bandwidth(support);
      return kde_lfd_predict(sol, support, embeddings, all, bandwidth);
    }
    case ClassifierKind::kLabelPropagation:
      return label_propagation(run.adjacency, labels, cfg.lp_iterations);
  }
  throw InvalidArgument("unknown classifier");
}

double test_accuracy(const PredictionSet& all, const LabelSet& labels) {
  PredictionSet test;
  test.nodes = labels.test;
  for (auto node : labels.test) test.predicted.push_back(all.predicted[node]);
  return accuracy_percent(test, labels.truth);
}

std::string model_name(Mode mode, ClassifierKind kind) {
  if (kind == ClassifierKind::kLabelPropagation) return "LP";
  return mode == Mode::kVanilla ? "GCN" : "GCN_DRGL";
}

std::string classifier_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kSoftmax: return "Softmax";
    case ClassifierKind::kKnn: return "k-NN";
    case ClassifierKind::kKde: return "KDE";
    case ClassifierKind::kLabelPropagation: return "";
  }
  return "";
}

}  // namespace

// ---- public API -----------------------------------------------------------

ExperimentConfig parse_config(const json& doc) {
  const Reader root(doc, "config");
  root.only({"dataset", "K", "noise", "train", "pretrain", "encoder", "classifier",
             "head", "knn", "kde", "label_propagation", "repetitions", "base_seed",
             "mode", "sweep"});
  ExperimentConfig cfg;

  if (!root.has("dataset")) throw ConfigError("config.dataset: required");
  const json& ds = root.raw("dataset");
  if (ds.is_string()) {
    cfg.dataset.path = ds.get<std::string>();
  } else {
    const Reader r = root.child("dataset");
    r.only({"path", "synthetic"});
    if (r.has("synthetic")) cfg.dataset.synthetic = parse_sbm(r.child("synthetic"));
    else cfg.dataset.path = r.get<std::string>("path", "");
    if (!cfg.dataset.synthetic && cfg.dataset.path.empty())
      throw ConfigError("config.dataset: need 'path' or 'synthetic'");
  }

  cfg.shots = root.get("K", cfg.shots);
  if (cfg.shots < 1) throw ConfigError("config.K: must be >= 1");
  if (root.has("noise")) cfg.noise = parse_noise(root.child("noise"));

  if (root.has("train")) {
    const Reader r = root.child("train");
    r.only({"learning_rate", "epochs", "miniset_size", "objective_sign",
            "differentiate_radius", "fixed_partition", "adam", "dro"});
    TrainConfig& t = cfg.train;
    t.learning_rate = r.get("learning_rate", t.learning_rate);
    t.epochs = r.get("epochs", t.epochs);
    t.miniset_size = r.get("miniset_size", t.miniset_size);
    t.objective_sign = r.get("objective_sign", t.objective_sign);
    t.differentiate_radius = r.get("differentiate_radius", t.differentiate_radius);
    t.fixed_partition = r.get("fixed_partition", t.fixed_partition);
    if (r.has("adam")) {
      const Reader a = r.child("adam");
      a.only({"beta1", "beta2", "epsilon"});
      t.adam.beta1 = a.get("beta1", t.adam.beta1);
      t.adam.beta2 = a.get("beta2", t.adam.beta2);
      t.adam.epsilon = a.get("epsilon", t.adam.epsilon);
    }
    if (r.has("dro")) t.dro = parse_dro(r.child("dro"));
    if (!(t.learning_rate >= 0.0)) throw ConfigError("config.train.learning_rate: must be >= 0");
    if (t.epochs < 1) throw ConfigError("config.train.epochs: must be >= 1");
    if (t.miniset_size < 0) throw ConfigError("config.train.miniset_size: must be >= 0");
    if (t.objective_sign != 1 && t.objective_sign != -1)
      throw ConfigError("config.train.objective_sign: must be 1 or -1");
  }
  if (root.has("pretrain")) {
    const Reader r = root.child("pretrain");
    r.only({"epochs", "learning_rate", "weight_decay"});
    cfg.pretrain.epochs = r.get("epochs", cfg.pretrain.epochs);
    cfg.pretrain.learning_rate = r.get("learning_rate", cfg.pretrain.learning_rate);
    cfg.pretrain.weight_decay = r.get("weight_decay", cfg.pretrain.weight_decay);
    if (cfg.pretrain.epochs < 0) throw ConfigError("config.pretrain.epochs: must be >= 0");
  }
  if (root.has("encoder")) {
    const Reader r = root.child("encoder");
    r.only({"hidden", "embedding", "dropout"});
    cfg.encoder.hidden = r.get("hidden", cfg.encoder.hidden);
    cfg.encoder.embedding = r.get("embedding", cfg.encoder.embedding);
    cfg.encoder.dropout = r.get("dropout", cfg.encoder.dropout);
    if (cfg.encoder.hidden < 1 || cfg.encoder.embedding < 1)
      throw ConfigError("config.encoder: dimensions must be >= 1");
    if (!(cfg.encoder.dropout >= 0.0 && cfg.encoder.dropout < 1.0))
      throw ConfigError("config.encoder.dropout: must lie in [0, 1)");
  }
  cfg.classifier =
      parse_classifier(root.get<std::string>("classifier", "softmax"), "config.classifier");
  if (root.has("head")) {
    const Reader r = root.child("head");
    r.only({"hidden", "epochs", "learning_rate"});
    cfg.head.hidden = r.get("hidden", cfg.head.hidden);
    cfg.head.epochs = r.get("epochs", cfg.head.epochs);
    cfg.head.learning_rate = r.get("learning_rate", cfg.head.learning_rate);
    if (cfg.head.hidden < 1 || cfg.head.epochs < 0)
      throw ConfigError("config.head: hidden must be >= 1 and epochs >= 0");
  }
  if (root.has("knn")) {
    const Reader r = root.child("knn");
    r.only({"k"});
    cfg.knn_k = r.get("k", cfg.knn_k);
    if (cfg.knn_k < 1) throw ConfigError("config.knn.k: must be >= 1");
  }
  if (root.has("kde")) {
    const Reader r = root.child("kde");
    r.only({"bandwidth"});
    if (r.has("bandwidth")) {
      cfg.kde_bandwidth = r.get("bandwidth", 1.0);
      if (!(*cfg.kde_bandwidth > 0.0)) throw ConfigError("config.kde.bandwidth: must be > 0");
    }
  }
  if (root.has("label_propagation")) {
    const Reader r = root.child("label_propagation");
    r.only({"iterations"});
    cfg.lp_iterations = r.get("iterations", cfg.lp_iterations);
    if (cfg.lp_iterations < 1)
      throw ConfigError("config.label_propagation.iterations: must be >= 1");
  }
  cfg.repetitions = root.get("repetitions", cfg.repetitions);
  if (cfg.repetitions < 1) throw ConfigError("config.repetitions: must be >= 1");
  cfg.base_seed = root.get<std::uint64_t>("base_seed", cfg.base_seed);
  cfg.mode = parse_mode(root.get<std::string>("mode", "drgl"), "config.mode");

  if (root.has("sweep")) {
    const Reader r = root.child("sweep");
    r.only({"modes", "classifiers", "noise"});
    auto strings = [&](const char* key) {
      std::vector<std::string> out;
      if (!r.has(key)) return out;
      const json& arr = r.raw(key);
      if (!arr.is_array()) throw ConfigError(r.where() + "." + key + ": expected an array");
      for (const auto& v : arr) {
        if (!v.is_string()) throw ConfigError(r.where() + "." + key + ": expected strings");
        out.push_back(v.get<std::string>());
      }
      return out;
    };
    for (const auto& s : strings("modes"))
      cfg.sweep_modes.push_back(parse_mode(s, r.where() + ".modes"));
    for (const auto& s : strings("classifiers"))
      cfg.sweep_classifiers.push_back(parse_classifier(s, r.where() + ".classifiers"));
    if (r.has("noise")) {
      const json& arr = r.raw("noise");
      if (!arr.is_array()) throw ConfigError(r.where() + ".noise: expected an array");
      for (std::size_t k = 0; k < arr.size(); ++k)
        cfg.sweep_noise.push_back(
            parse_noise(Reader(arr[k], r.where() + ".noise[" + std::to_string(k) + "]")));
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json dataset;
  if (c.dataset.synthetic) {
    const SbmSpec& s = *c.dataset.synthetic;
    dataset = {{"synthetic",
                {{"nodes", s.num_nodes},
                 {"classes", s.num_classes},
                 {"p_in", s.p_in},
                 {"p_out", s.p_out},
                 {"feature_dim", s.feature_dim},
                 {"feature_shift", s.feature_shift},
                 {"test_fraction", s.test_fraction},
                 {"seed", s.seed}}}};
  } else {
    dataset = {{"path", c.dataset.path}};
  }
  json doc = {
      {"dataset", dataset},
      {"K", c.shots},
      {"noise", noise_to_json(c.noise)},
      {"train",
       {{"learning_rate", c.train.learning_rate},
        {"epochs", c.train.epochs},
        {"miniset_size", c.train.miniset_size},
        {"objective_sign", c.train.objective_sign},
        {"differentiate_radius", c.train.differentiate_radius},
        {"fixed_partition", c.train.fixed_partition},
        {"adam",
         {{"beta1", c.train.adam.beta1},
          {"beta2", c.train.adam.beta2},
          {"epsilon", c.train.adam.epsilon}}},
        {"dro", dro_to_json(c.train.dro)}}},
      {"pretrain",
       {{"epochs", c.pretrain.epochs},
        {"learning_rate", c.pretrain.learning_rate},
        {"weight_decay", c.pretrain.weight_decay}}},
      {"encoder",
       {{"hidden", c.encoder.hidden},
        {"embedding", c.encoder.embedding},
        {"dropout", c.encoder.dropout}}},
      {"classifier", to_string(c.classifier)},
      {"head",
       {{"hidden", c.head.hidden},
        {"epochs", c.head.epochs},
        {"learning_rate", c.head.learning_rate}}},
      {"knn", {{"k", c.knn_k}}},
      {"kde", {{"bandwidth", c.kde_bandwidth ? json(*c.kde_bandwidth) : json(nullptr)}}},
      {"label_propagation", {{"iterations", c.lp_iterations}}},
      {"repetitions", c.repetitions},
      {"base_seed", c.base_seed},
      {"mode", to_string(c.mode)},
  };
  if (!c.sweep_modes.empty() || !c.sweep_classifiers.empty() || !c.sweep_noise.empty()) {
    json sweep = json::object();
    json modes = json::array(), classifiers = json::array(), noise = json::array();
    for (auto m : c.sweep_modes) modes.push_back(to_string(m));
    for (auto k : c.sweep_classifiers) classifiers.push_back(to_string(k));
    for (const auto& n : c.sweep_noise) noise.push_back(noise_to_json(n));
    sweep["modes"] = modes;
    sweep["classifiers"] = classifiers;
    sweep["noise"] = noise;
    doc["sweep"] = sweep;
  }
  return doc;
}

Dataset load_dataset(const DatasetSource& source) {
  if (source.synthetic) {
    SyntheticDataset s = make_sbm(*source.synthetic);
    return {std::move(s.graph), std::move(s.labels)};
  }
  LoadedGraph loaded = load_graph(source.path);
  return {std::move(loaded.graph), std::move(loaded.labels)};
}

LabelSet sample_few_shot(const LabelSet& labels, int shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidArgument("few-shot: K must be >= 1");
  std::vector<std::vector<LabeledNode>> by_class(labels.num_classes);
  for (const auto& x : labels.observed) by_class[x.label].push_back(x);
  Rng rng(seed);
  LabelSet out = labels;
  out.observed.clear();
  for (int m = 0; m < labels.num_classes; ++m) {
    auto& pool = by_class[m];
    if (static_cast<int>(pool.size()) < shots)
      throw InvalidArgument("few-shot: class " + std::to_string(m) + " has only " +
                            std::to_string(pool.size()) + " observed nodes (K = " +
                            std::to_string(shots) + ")");
    rng.shuffle(pool);
    out.observed.insert(out.observed.end(), pool.begin(), pool.begin() + shots);
  }
  // Nodes dropped from the pool are neither trained on nor scored.
  out.unobserved.clear();
  return out;
}

std::string noise_label(const NoiseSpec& noise) {
  std::string out;
  if (noise.sigma_multiplier > 0.0)
    out += "sigma=" + format_fixed(noise.sigma_multiplier, 1) + "x";
  if (noise.edge_removal_rate > 0.0) {
    if (!out.empty()) out += ",";
    out += "r=" + format_fixed(100.0 * noise.edge_removal_rate, 0) + "%";
  }
  return out.empty() ? "clean" : out;
}

std::string emit_table(const ResultTable& table, TableFormat format) {
  if (table.rows.empty()) throw InvalidArgument("emit_table: empty table");
  std::ostringstream out;
  switch (format) {
    case TableFormat::kCsv: {
      std::size_t runs = 0;
      for (const auto& row : table.rows) runs = std::max(runs, row.runs.size());
      out << "model,classifier,setting,mean";
      for (std::size_t r = 0; r < runs; ++r) out << ",run_" << r;
      out << "\n";
      for (const auto& row : table.rows) {
        out << row.model << ',' << row.classifier << ",\"" << row.setting << "\","
            << format_fixed(row.mean, 4);
        for (std::size_t r = 0; r < runs; ++r)
          out << ',' << (r < row.runs.size() ? format_fixed(row.runs[r], 4) : "");
        out << "\n";
      }
      break;
    }
    case TableFormat::kMarkdown: {
      std::vector<std::string> settings = table.settings;
      for (const auto& row : table.rows)
        if (std::find(settings.begin(), settings.end(), row.setting) == settings.end())
          settings.push_back(row.setting);
      std::vector<std::string> models;
      std::map<std::pair<std::string, std::string>, double> cells;
      for (const auto& row : table.rows) {
        const std::string name =
            row.classifier.empty() ? row.model : row.model + " + " + row.classifier;
        if (std::find(models.begin(), models.end(), name) == models.end())
          models.push_back(name);
        cells[{name, row.setting}] = row.mean;
      }
      out << "| Models |";
      for (const auto& s : settings) out << ' ' << s << " |";
      out << "\n|---|";
      for (std::size_t k = 0; k < settings.size(); ++k) out << "---|";
      out << "\n";
      for (const auto& name : models) {
        out << "| " << name << " |";
        for (const auto& s : settings) {
          const auto it = cells.find({name, s});
          out << ' ' << (it == cells.end() ? "-" : format_fixed(it->second, 2)) << " |";
        }
        out << "\n";
      }
      break;
    }
    case TableFormat::kJson: {
      json rows = json::array();
      for (const auto& row : table.rows)
        rows.push_back({{"model", row.model},
                        {"classifier", row.classifier},
                        {"setting", row.setting},
                        {"mean", row.mean},
                        {"runs", row.runs}});
      out << json{{"rows", rows}}.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

RunArtifacts run_single(const Dataset& dataset, const ExperimentConfig& config,
                        Mode mode, const NoiseSpec& noise, int repetition) {
  const std::uint64_t rep_seed = config.base_seed + static_cast<std::uint64_t>(repetition);
  const bool needs_encoder = config.classifier != ClassifierKind::kLabelPropagation;
  PreparedRun run = prepare(dataset, config, noise, rep_seed, true);
  RunArtifacts out;
  out.params = run.warm;
  if (mode == Mode::kDrgl && needs_encoder) {
    TrainResult trained = train_drgl(run, config, rep_seed);
    out.params = std::move(trained.params);
    out.report = std::move(trained.report);
  }
  out.embeddings = forward(out.params, run.adjacency, run.features, false, 0).embeddings;
  out.predictions = classify_all(config.classifier, run, out.embeddings, config, rep_seed);
  out.accuracy = test_accuracy(out.predictions, run.noisy.labels);
  out.noisy = std::move(run.noisy);
  return out;
}

ExperimentResult run_grid(const ExperimentConfig& config, const std::vector<Mode>& modes,
                          const std::vector<ClassifierKind>& classifiers,
                          const std::vector<NoiseSpec>& noise) {
  if (modes.empty() || classifiers.empty() || noise.empty())
    throw InvalidArgument("run_grid: empty grid");
  const Dataset dataset = load_dataset(config.dataset);
  const bool any_encoder =
      std::any_of(classifiers.begin(), classifiers.end(),
                  [](ClassifierKind k) { return k != ClassifierKind::kLabelPropagation; });
  const bool any_drgl = std::find(modes.begin(), modes.end(), Mode::kDrgl) != modes.end();
  const bool any_lp =
      std::find(classifiers.begin(), classifiers.end(),
                ClassifierKind::kLabelPropagation) != classifiers.end();

  ExperimentResult result;
  // Row order follows the published tables: LP, then vanilla, then DRGL.
  std::vector<std::pair<Mode, ClassifierKind>> cells;
  if (any_lp) cells.emplace_back(modes.front(), ClassifierKind::kLabelPropagation);
  for (Mode mode : modes)
    for (ClassifierKind kind : classifiers)
      if (kind != ClassifierKind::kLabelPropagation) cells.emplace_back(mode, kind);

  json seeds = json::array();
  for (int r = 0; r < config.repetitions; ++r) seeds.push_back(config.base_seed + r);
  int replicated = 0;

  for (const NoiseSpec& spec : noise) {
    const std::string setting = noise_label(spec);
    result.table.settings.push_back(setting);
    std::vector<ResultRow> rows;
    for (const auto& [mode, kind] : cells)
      rows.push_back({model_name(mode, kind), classifier_name(kind), setting, {}, 0.0});

    for (int r = 0; r < config.repetitions; ++r) {
      const std::uint64_t rep_seed = config.base_seed + static_cast<std::uint64_t>(r);
      const PreparedRun run = prepare(dataset, config, spec, rep_seed, any_encoder);
      EncoderParams drgl_params;
      if (any_drgl && any_encoder) {
        TrainResult trained = train_drgl(run, config, rep_seed);
        for (const auto& rec : trained.report.epochs) {
          json line = {{"setting", setting}, {"rep", r}};
          line.update(to_json(rec));
          result.report_lines.push_back(std::move(line));
          json timing = {{"setting", setting}, {"rep", r}};
          timing.update(timing_to_json(rec));
          result.timing_lines.push_back(std::move(timing));
        }
        if (!trained.report.epochs.empty())
          replicated += trained.report.epochs.back().replicated;
        drgl_params = std::move(trained.params);
      }
      std::map<Mode, Eigen::MatrixXd> embeddings;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto [mode, kind] = cells[c];
        if (kind != ClassifierKind::kLabelPropagation && !embeddings.count(mode)) {
          const EncoderParams& p = mode == Mode::kDrgl ? drgl_params : run.warm;
          embeddings[mode] = forward(p, run.adjacency, run.features, false, 0).embeddings;
        }
        const Eigen::MatrixXd& xi =
            kind == ClassifierKind::kLabelPropagation ? run.features : embeddings[mode];
        const PredictionSet predictions = classify_all(kind, run, xi, config, rep_seed);
        rows[c].runs.push_back(test_accuracy(predictions, run.noisy.labels));
      }
    }
    for (auto& row : rows) {
      double sum = 0.0;
      for (double v : row.runs) sum += v;
      row.mean = sum / static_cast<double>(row.runs.size());
      result.table.rows.push_back(std::move(row));
    }
  }

  result.metadata = {
      {"test_split", config.dataset.synthetic ? "generated test split"
                                              : "splits.json test split"},
      {"noise_resampled_per_repetition", true},
      {"repetition_seeds", seeds},
      {"replicated_miniset_samples", replicated},
      {"nodes", dataset.graph.num_nodes()},
      {"undirected_edges", dataset.graph.edges.size()},
      {"classes", dataset.labels.num_classes},
  };
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return run_grid(config, {config.mode}, {config.classifier}, {config.noise});
}

ExperimentResult run_sweep(const ExperimentConfig& config) {
  return run_grid(
      config,
      config.sweep_modes.empty() ? std::vector<Mode>{config.mode} : config.sweep_modes,
      config.sweep_classifiers.empty() ? std::vector<ClassifierKind>{config.classifier}
                                       : config.sweep_classifiers,
      config.sweep_noise.empty() ? std::vector<NoiseSpec>{config.noise}
                                 : config.sweep_noise);
}

VizExport export_embeddings_2d(const Eigen::MatrixXd& embeddings,
                               const PredictionSet& predictions,
                               const LabelSet& labels) {
  const Projection2d proj = project_2d(embeddings);
  std::vector<Index> row_of(static_cast<std::size_t>(embeddings.rows()), -1);
  for (std::size_t k = 0; k < predictions.size(); ++k)
    row_of[predictions.nodes[k]] = static_cast<Index>(k);
  std::vector<char> observed(row_of.size(), 0);
  for (const auto& x : labels.observed) observed[x.node] = 1;

  std::ostringstream out;
  out.precision(9);
  out << "node,x,y,true_label,predicted,probability,entropy,observed\n";
  for (Index i = 0; i < embeddings.rows(); ++i) {
    const Index k = row_of[i];
    const int truth = static_cast<std::size_t>(i) < labels.truth.size() ? labels.truth[i] : -1;
    out << i << ',' << proj.coords(i, 0) << ',' << proj.coords(i, 1) << ',' << truth << ',';
    if (k >= 0) {
      out << predictions.predicted[k] << ',' << predictions.probabilities.row(k).maxCoeff()
          << ',' << predictions.entropy[k];
    } else {
      out << ",,";
    }
    out << ',' << int(observed[i]) << '\n';
  }
  return {out.str(), proj.degenerate};
}

std::string predictions_csv(const PredictionSet& predictions) {
  std::ostringstream out;
  out.precision(9);
  out << "node,predicted";
  for (Index m = 0; m < predictions.probabilities.cols(); ++m) out << ",p_" << m;
  out << ",entropy\n";
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    out << predictions.nodes[k] << ',' << predictions.predicted[k];
    for (Index m = 0; m < predictions.probabilities.cols(); ++m)
      out << ',' << predictions.probabilities(static_cast<Index>(k), m);
    out << ',' << predictions.entropy[static_cast<Index>(k)] << '\n';
  }
  return out.str();
}

}  // namespace drgl
