#pragma once

#include <filesystem>

#include <json.hpp>

#include "expose/model.hpp"

namespace expose::cli {

inline constexpr int kModelFormatVersion = 1;

/// A model as persisted: the estimator plus its default score normalization.
struct ModelFile {
  ExposeModel model;
  bool normalize = false;
};

nlohmann::json feature_map_to_json(const FeatureMap& map);
FeatureMap feature_map_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const ExposeModel& model, bool normalize);
ModelFile model_from_json(const nlohmann::json& j);

/// Writes through a temporary file so a failed write never leaves a
/// partial model behind.
void save_model(const std::filesystem::path& path, const ExposeModel& model, bool normalize);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace expose::cli
