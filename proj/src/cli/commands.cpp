#include "expose/cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <stdexcept>

#include "expose/cli/csv.hpp"
#include "expose/cli/model_file.hpp"
#include "expose/cli/stream_spec_json.hpp"
#include "expose/evalstats.hpp"
#include "expose/kernels.hpp"
#include "expose/model.hpp"
#include "expose/protocols.hpp"
#include "expose/streamgen.hpp"

namespace expose::cli {

namespace {

constexpr std::size_t kDefaultRksExpansions = 2000;
constexpr std::size_t kDefaultNystroemLandmarks = 500;
constexpr std::size_t kMedianHeuristicPoints = 1000;
constexpr std::size_t kStreamConfigurationPrefix = 100;

// Output goes to the named file, or to `fallback` when the name is empty.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::trunc);
      if (!file_) throw std::runtime_error("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw std::runtime_error("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

double resolve_sigma(const MapOptions& options, const Dataset& config) {
  if (options.sigma == "auto") return median_pairwise_distance(config, kMedianHeuristicPoints, options.seed);
  const auto value = parse_double(options.sigma);
  if (!value || !(*value > 0.0) || !std::isfinite(*value)) {
    throw std::invalid_argument("--sigma must be a positive number or 'auto'");
  }
  return *value;
}

std::shared_ptr<const FeatureMap> build_map(const MapOptions& options, const Dataset& config, std::ostream& log) {
  const double sigma = resolve_sigma(options, config);
  if (options.map == "rks") {
    const std::size_t r = options.features.value_or(kDefaultRksExpansions);
    log << "feature map: rks, r=" << r << ", sigma=" << format_double(sigma) << ", seed=" << options.seed << '\n';
    return std::make_shared<const FeatureMap>(RksProjection::fit(config.dim(), r, sigma, options.seed));
  }
  if (options.map == "nystroem") {
    const std::size_t r = options.features.value_or(kDefaultNystroemLandmarks);
    auto map = NystroemMap::fit(select_landmarks(config, r, options.seed), sigma);
    log << "feature map: nystroem, landmarks=" << map.landmarks().size() << ", kept=" << map.kept()
        << ", sigma=" << format_double(sigma) << ", seed=" << options.seed << '\n';
    return std::make_shared<const FeatureMap>(std::move(map));
  }
  throw std::invalid_argument("--map must be 'rks' or 'nystroem'");
}

UpdateMode parse_mode(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw std::invalid_argument("--mode requires a value");
  const std::string& kind = tokens.front();
  if (kind == "online") {
    if (tokens.size() != 1) throw std::invalid_argument("--mode online takes no parameter");
    return OnlineMode{};
  }
  if (tokens.size() != 2) throw std::invalid_argument("--mode " + kind + " requires one parameter");
  const auto value = parse_double(tokens[1]);
  if (!value) throw std::invalid_argument("--mode " + kind + ": parameter is not a number");
  if (kind == "window") {
    if (*value < 1.0 || *value != std::floor(*value)) throw std::invalid_argument("--mode window L: L must be a positive integer");
    return WindowMode(static_cast<std::size_t>(*value));
  }
  if (kind == "decay") return DecayMode(*value);
  throw std::invalid_argument("--mode must be 'online', 'window L' or 'decay G'");
}

void write_score_row(std::ostream& out, std::size_t index, double raw, double normalized,
                     const std::optional<Label>& cls) {
  out << index << ',' << format_double(raw) << ',' << format_double(normalized);
  if (cls) out << ',' << to_string(*cls);
  out << '\n';
}

double normalized_or_nan(const ScoredInstance& s, const WeightSnapshot& w) {
  return w.squared_norm > 0.0 ? s.raw / w.squared_norm : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void cmd_fit(const FitOptions& options, std::ostream& log) {
  if (options.out.empty()) throw std::invalid_argument("--out is required");
  if (options.threads == 0) throw std::invalid_argument("--threads must be >= 1");
  const CsvDataset csv = read_csv_file(options.input);
  auto map = build_map(options.map, csv.data, log);
  const ExposeModel model = fit_batch(csv.data, map, options.threads);
  save_model(options.out, model, model.normalizes_by_default());
  log << "fitted " << csv.data.size() << " rows into " << model.dim() << " weights -> " << options.out << '\n';
}

void cmd_score(const ScoreOptions& options, std::ostream& out) {
  const ModelFile file = load_model(options.model);
  const CsvDataset csv = read_csv_file(options.input);
  require_same_dim(file.model.feature_map().input_dim(), csv.data.dim(), "score input vs model");
  const bool normalize = options.normalize || file.normalize;
  const auto weights = file.model.snapshot();

  OutputTarget target(options.out, out);
  auto& os = target.get();
  os << "index,raw,normalized" << (options.theta ? ",class" : "") << '\n';
  for (std::size_t i = 0; i < csv.data.size(); ++i) {
    ScoredInstance s = file.model.score(csv.data[i], false);
    const double normalized = normalized_or_nan(s, *weights);
    std::optional<Label> cls;
    if (options.theta) {
      if (normalize) {
        if (std::isnan(normalized)) throw std::domain_error("cannot normalize: model weights are zero");
        s.normalized = normalized;
      }
      cls = classify(s, *options.theta);
    }
    write_score_row(os, i, s.raw, normalized, cls);
  }
  target.finish();
}

void cmd_stream(const StreamOptions& options, std::ostream& out) {
  if (options.input.empty() == options.generate.empty()) {
    throw std::invalid_argument("give exactly one of an input CSV or --generate SPEC");
  }
  std::optional<StreamSpec> spec;
  std::vector<LabeledInstance> stream;
  bool labeled = true;
  if (!options.generate.empty()) {
    spec = load_stream_spec(options.generate);
    stream = generate(*spec);
  } else {
    CsvDataset csv = read_csv_file(options.input);
    labeled = csv.labels.has_value();
    if (!labeled) {
      if (!options.eval.empty()) throw std::invalid_argument("--eval needs a label column in the input");
      csv.labels = std::vector<Label>(csv.data.size(), Label::normal);
    }
    stream = to_instances(csv);
  }
  if (stream.empty()) throw std::invalid_argument("stream is empty");

  const UpdateMode mode = parse_mode(options.mode);
  Dataset config(stream.front().x.size());
  const std::size_t prefix = std::min(stream.size(), std::max(kStreamConfigurationPrefix, options.map.features.value_or(0)));
  for (std::size_t i = 0; i < prefix; ++i) config.push_back(stream[i].x);
  auto map = build_map(options.map, config, std::cerr);
  ExposeModel model(map, mode);

  OutputTarget target(options.out, out);
  auto& os = target.get();
  if (options.eval.empty()) {
    os << "index,raw,normalized" << (options.theta ? ",class" : "") << '\n';
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t t = 0; t < stream.size(); ++t) {
      if (model.count() == 0) {
        write_score_row(os, t, nan, nan, options.theta ? std::optional<Label>(Label::normal) : std::nullopt);
      } else {
        const auto weights = model.snapshot();
        ScoredInstance s = model.score(stream[t].x, false);
        const double normalized = normalized_or_nan(s, *weights);
        std::optional<Label> cls;
        if (options.theta) {
          if (model.normalizes_by_default()) s.normalized = normalized;
          cls = classify(s, *options.theta);
        }
        write_score_row(os, t, s.raw, normalized, cls);
      }
      model.update(stream[t].x);
    }
  } else {
    if (!options.theta) throw std::invalid_argument("--eval needs --theta");
    std::vector<EvalRecord> records;
    if (options.eval == "prequential") {
      PrequentialOptions po;
      po.theta = *options.theta;
      po.trailing_window = options.trailing_window;
      records = prequential_eval(stream, model, po);
    } else if (options.eval.rfind("holdout:", 0) == 0) {
      const auto every = parse_double(options.eval.substr(8));
      if (!every || *every < 1.0 || *every != std::floor(*every)) {
        throw std::invalid_argument("--eval holdout:EVERY needs a positive integer period");
      }
      HoldoutOptions ho;
      ho.theta = *options.theta;
      ho.every = static_cast<std::size_t>(*every);
      std::map<std::size_t, std::vector<LabeledInstance>> holdouts;
      IntervalOf interval_of;
      if (spec) {
        for (std::size_t c = 0; c < spec->concepts.size(); ++c) {
          holdouts[c] = holdout_for_concept(*spec, c, options.holdout_size, options.holdout_size, spec->seed + 1 + c);
        }
        interval_of = [&spec](std::size_t t) { return nominal_concept(*spec, t); };
      } else {
        if (options.holdout.empty()) throw std::invalid_argument("--eval holdout with CSV input needs --holdout FILE");
        const CsvDataset h = read_csv_file(options.holdout);
        holdouts[0] = to_instances(h);
        interval_of = [](std::size_t) { return std::size_t{0}; };
      }
      records = holdout_eval(stream, model, holdouts, ho, interval_of);
    } else {
      throw std::invalid_argument("--eval must be 'prequential' or 'holdout:EVERY'");
    }
    write_records(os, records);
  }
  target.finish();
  if (!options.model_out.empty()) save_model(options.model_out, model, model.normalizes_by_default());
}

void cmd_grid(const GridOptions& options, std::ostream& out) {
  const ModelFile file = load_model(options.model);
  if (file.model.feature_map().input_dim() != 2) throw std::invalid_argument("grid needs a 2-dimensional model");
  if (options.bounds.size() != 4 || !(options.bounds[0] < options.bounds[1]) || !(options.bounds[2] < options.bounds[3])) {
    throw std::invalid_argument("--bounds must be x1_min,x1_max,x2_min,x2_max with min < max");
  }
  if (options.resolution < 2) throw std::invalid_argument("--resolution must be >= 2");
  const double step1 = (options.bounds[1] - options.bounds[0]) / static_cast<double>(options.resolution - 1);
  const double step2 = (options.bounds[3] - options.bounds[2]) / static_cast<double>(options.resolution - 1);

  OutputTarget target(options.out, out);
  auto& os = target.get();
  os << "x1,x2,score\n";
  for (std::size_t iy = 0; iy < options.resolution; ++iy) {
    const double x2 = options.bounds[2] + step2 * static_cast<double>(iy);
    for (std::size_t ix = 0; ix < options.resolution; ++ix) {
      const double x1 = options.bounds[0] + step1 * static_cast<double>(ix);
      const double z[2] = {x1, x2};
      os << format_double(x1) << ',' << format_double(x2) << ','
         << format_double(*file.model.score(z, true).normalized) << '\n';
    }
  }
  target.finish();
}

void cmd_compare(const CompareOptions& options, std::ostream& out) {
  std::ifstream in(options.input);
  if (!in) throw std::runtime_error("cannot open '" + options.input + "'");
  std::vector<std::string> names;
  const Matrix metrics = read_metric_matrix(in, names);
  if (names.size() != metrics.cols()) throw std::runtime_error("header names do not match column count");

  const RankMatrix ranks = rank_rows(metrics);
  const double chi2 = friedman_chi2(ranks);
  std::string ff;
  try {
    ff = format_double(iman_davenport(chi2, ranks.datasets(), ranks.algorithms()));
  } catch (const SaturatedStatistic&) {
    ff = "inf";
  }
  const CdDiagram cd = cd_diagram_data(ranks, options.alpha);
  const std::size_t m = ranks.datasets();
  const std::size_t k = ranks.algorithms();

  OutputTarget target(options.out, out);
  auto& os = target.get();
  os << "statistic,value\n"
     << "datasets," << m << '\n'
     << "algorithms," << k << '\n'
     << "chi2_f," << format_double(chi2) << '\n'
     << "iman_davenport_f," << ff << '\n'
     << "df_numerator," << (k - 1) << '\n'
     << "df_denominator," << (k - 1) * (m - 1) << '\n'
     << "alpha," << format_double(options.alpha) << '\n'
     << "critical_difference," << format_double(cd.critical_difference) << '\n'
     << '\n'
     << "algorithm,average_rank,group_id\n";
  for (std::size_t g = 0; g < cd.groups.size(); ++g)
    for (std::size_t a : cd.groups[g]) os << names[a] << ',' << format_double(cd.average_ranks[a]) << ',' << g << '\n';
  target.finish();
}

void cmd_generate(const GenerateOptions& options, std::ostream& out) {
  const StreamSpec spec = load_stream_spec(options.spec);
  const auto stream = generate(spec);
  OutputTarget target(options.out, out);
  write_instances(target.get(), stream);
  target.finish();
}

namespace {

void add_map_options(CLI::App* cmd, MapOptions& map) {
  cmd->add_option("--map", map.map, "Feature map: rks or nystroem")->check(CLI::IsMember({"rks", "nystroem"}));
  cmd->add_option("--features", map.features, "RKS expansions r (2r features) or Nystroem landmarks")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sigma", map.sigma, "Kernel bandwidth, or 'auto' for the median heuristic");
  cmd->add_option("--seed", map.seed, "Random seed");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel mean embedding anomaly detection"};
  app.name("expose");
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a batch model from a CSV file");
  fit_cmd->add_option("input", fit.input, "Training CSV")->required();
  add_map_options(fit_cmd, fit.map);
  fit_cmd->add_option("--threads", fit.threads, "Concurrent partial-sum workers")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--out", fit.out, "Model file to write")->required();

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Score CSV rows with a stored model");
  score_cmd->add_option("model", score.model, "Model file")->required();
  score_cmd->add_option("input", score.input, "CSV to score")->required();
  score_cmd->add_option("--theta", score.theta, "Threshold; adds a class column");
  score_cmd->add_flag("--normalize", score.normalize, "Classify on normalized scores");
  score_cmd->add_option("--out", score.out, "Output file (default: standard output)");

  StreamOptions stream;
  auto* stream_cmd = app.add_subcommand("stream", "Score-then-update over a stream");
  stream_cmd->add_option("input", stream.input, "Stream CSV");
  stream_cmd->add_option("--generate", stream.generate, "Stream spec JSON instead of a CSV");
  stream_cmd->add_option("--mode", stream.mode, "online | window L | decay G")->expected(1, 2);
  add_map_options(stream_cmd, stream.map);
  stream_cmd->add_option("--theta", stream.theta, "Decision threshold");
  stream_cmd->add_option("--eval", stream.eval, "prequential | holdout:EVERY");
  stream_cmd->add_option("--holdout", stream.holdout, "Labeled holdout CSV (CSV input)");
  stream_cmd->add_option("--holdout-size", stream.holdout_size, "Holdout instances per class (generated input)")
      ->check(CLI::PositiveNumber);
  stream_cmd->add_option("--trailing", stream.trailing_window, "Prequential trailing window")->check(CLI::PositiveNumber);
  stream_cmd->add_option("--out", stream.out, "Records or scores (default: standard output)");
  stream_cmd->add_option("--model-out", stream.model_out, "Write the final model here");

  GridOptions grid;
  auto* grid_cmd = app.add_subcommand("grid", "Normalized scores on a regular 2-D grid");
  grid_cmd->add_option("model", grid.model, "Model file")->required();
  grid_cmd->add_option("--bounds", grid.bounds, "x1_min,x1_max,x2_min,x2_max")->delimiter(',')->required();
  grid_cmd->add_option("--resolution", grid.resolution, "Points per axis");
  grid_cmd->add_option("--out", grid.out, "Output file (default: standard output)");

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Friedman / Nemenyi comparison of algorithms");
  compare_cmd->add_option("input", compare.input, "Metric matrix CSV (datasets x algorithms)")->required();
  compare_cmd->add_option("--alpha", compare.alpha, "Significance level: 0.05 or 0.10");
  compare_cmd->add_option("--out", compare.out, "Output file (default: standard output)");

  GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic stream as labeled CSV");
  gen_cmd->add_option("spec", gen.spec, "Stream spec JSON")->required();
  gen_cmd->add_option("--out", gen.out, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*fit_cmd) cmd_fit(fit, err);
    else if (*score_cmd) cmd_score(score, out);
    else if (*stream_cmd) cmd_stream(stream, out);
    else if (*grid_cmd) cmd_grid(grid, out);
    else if (*compare_cmd) cmd_compare(compare, out);
    else if (*gen_cmd) cmd_generate(gen, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace expose::cli
