#include "expose/cli/model_file.hpp"

#include <fstream>
#include <stdexcept>

namespace expose::cli {

using nlohmann::json;

namespace {

std::vector<std::vector<double>> rows_of(const Matrix& m) {
  std::vector<std::vector<double>> rows(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows[r].assign(m.row(r).begin(), m.row(r).end());
  return rows;
}

std::vector<std::vector<double>> rows_of(const Dataset& d) {
  std::vector<std::vector<double>> rows(d.size());
  for (std::size_t r = 0; r < d.size(); ++r) rows[r].assign(d[r].begin(), d[r].end());
  return rows;
}

// Window ring buffer, oldest feature vector first.
std::vector<std::vector<double>> window_oldest_first(const ExposeModel& model) {
  const auto& buf = model.window_buffer();
  std::vector<std::vector<double>> out;
  out.reserve(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out.push_back(buf[(model.window_head() + i) % buf.size()]);
  return out;
}

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw std::runtime_error(std::string("model file: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

json feature_map_to_json(const FeatureMap& map) {
  if (const auto* rks = map.as_rks()) {
    return {{"kind", "rks"},
            {"input_dim", rks->input_dim()},
            {"expansions", rks->expansions()},
            {"sigma", rks->sigma()},
            {"seed", rks->seed()}};
  }
  const auto& nys = *map.as_nystroem();
  return {{"kind", "nystroem"},
          {"sigma", nys.sigma()},
          {"landmarks", rows_of(nys.landmarks())},
          {"eigenvalues", nys.eigenvalues()},
          {"eigenvectors", rows_of(nys.eigenvectors())}};
}

FeatureMap feature_map_from_json(const json& j) {
  const auto kind = require(j, "kind").get<std::string>();
  if (kind == "rks") {
    return RksProjection::fit(require(j, "input_dim").get<std::size_t>(), require(j, "expansions").get<std::size_t>(),
                              require(j, "sigma").get<double>(), require(j, "seed").get<std::uint64_t>());
  }
  if (kind == "nystroem") {
    const auto landmarks = require(j, "landmarks").get<std::vector<std::vector<double>>>();
    const auto vectors = require(j, "eigenvectors").get<std::vector<std::vector<double>>>();
    auto values = require(j, "eigenvalues").get<std::vector<double>>();
    Matrix eigenvectors = vectors.empty() ? Matrix(landmarks.size(), 0) : Matrix::from_rows(vectors);
    return NystroemMap::from_parts(Dataset::from_rows(landmarks), require(j, "sigma").get<double>(), std::move(values),
                                   std::move(eigenvectors));
  }
  throw std::runtime_error("model file: unknown feature map kind '" + kind + "'");
}

json model_to_json(const ExposeModel& model, bool normalize) {
  const auto snap = model.snapshot();
  json j;
  j["format"] = "expose-model";
  j["format_version"] = kModelFormatVersion;
  j["map"] = feature_map_to_json(model.feature_map());
  std::visit(
      [&](const auto& mode) {
        using M = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<M, BatchMode>) {
          j["mode"] = {{"kind", "batch"}};
        } else if constexpr (std::is_same_v<M, OnlineMode>) {
          j["mode"] = {{"kind", "online"}};
        } else if constexpr (std::is_same_v<M, WindowMode>) {
          j["mode"] = {{"kind", "window"}, {"length", mode.length}};
        } else {
          j["mode"] = {{"kind", "decay"}, {"gamma", mode.gamma}};
        }
      },
      model.mode());
  j["normalize"] = normalize;
  j["count"] = snap->count;
  j["weights"] = snap->weights;
  if (std::holds_alternative<OnlineMode>(model.mode())) {
    j["running_sum"] = {{"sum", model.running_sum().sum}, {"carry", model.running_sum().carry}};
  }
  if (std::holds_alternative<WindowMode>(model.mode())) j["window_buffer"] = window_oldest_first(model);
  return j;
}

ModelFile model_from_json(const json& j) {
  if (j.value("format", std::string{}) != "expose-model") throw std::runtime_error("not an expose model file");
  const int version = require(j, "format_version").get<int>();
  if (version != kModelFormatVersion) {
    throw std::runtime_error("model file: unsupported format_version " + std::to_string(version));
  }
  auto map = std::make_shared<const FeatureMap>(feature_map_from_json(require(j, "map")));

  const json& mode_j = require(j, "mode");
  const auto kind = require(mode_j, "kind").get<std::string>();
  UpdateMode mode = BatchMode{};
  if (kind == "online") {
    mode = OnlineMode{};
  } else if (kind == "window") {
    mode = WindowMode(require(mode_j, "length").get<std::size_t>());
  } else if (kind == "decay") {
    mode = DecayMode(require(mode_j, "gamma").get<double>());
  } else if (kind != "batch") {
    throw std::runtime_error("model file: unknown mode '" + kind + "'");
  }

  const auto count = require(j, "count").get<std::uint64_t>();
  auto weights = require(j, "weights").get<std::vector<double>>();
  std::optional<PartialSum> running;
  if (kind == "online") {
    const json& r = require(j, "running_sum");
    running = PartialSum{require(r, "sum").get<std::vector<double>>(), require(r, "carry").get<std::vector<double>>(), count};
  }
  std::vector<std::vector<double>> window;
  if (kind == "window") window = require(j, "window_buffer").get<std::vector<std::vector<double>>>();

  ExposeModel model = ExposeModel::restore(std::move(map), mode, std::move(weights), count, std::move(running),
                                           std::move(window));
  return ModelFile{std::move(model), require(j, "normalize").get<bool>()};
}

void save_model(const std::filesystem::path& path, const ExposeModel& model, bool normalize) {
  const std::string text = model_to_json(model, normalize).dump(1);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << text << '\n';
    if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("model file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const json::exception& e) {
    throw std::runtime_error("model file '" + path.string() + "': " + e.what());
  }
}

}  // namespace expose::cli
