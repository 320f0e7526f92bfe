#pragma once

#include <filesystem>

#include <json.hpp>

#include "expose/streamgen.hpp"

namespace expose::cli {

// {
//   "seed": 7,
//   "anomaly_rate": 0.01,
//   "concepts": [{"components": [{"mean": [0, 0], "scale": 1, "weight": 1}]}, ...],
//   "lengths": [1000, 1000],
//   "transitions": [{"type": "smooth", "width": 100}],     // or {"type": "sudden"}
//   "anomaly_box": {"lower": [...], "upper": [...]}         // optional
// }
StreamSpec stream_spec_from_json(const nlohmann::json& j);
nlohmann::json stream_spec_to_json(const StreamSpec& spec);
StreamSpec load_stream_spec(const std::filesystem::path& path);

}  // namespace expose::cli
