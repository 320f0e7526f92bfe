#include "expose/cli/stream_spec_json.hpp"

#include <fstream>
#include <stdexcept>

namespace expose::cli {

using nlohmann::json;

StreamSpec stream_spec_from_json(const json& j) {
  StreamSpec spec;
  try {
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.anomaly_rate = j.value("anomaly_rate", 0.0);
    for (const auto& cj : j.at("concepts")) {
      Concept c;
      for (const auto& comp : cj.at("components")) {
        c.components.push_back(
            {comp.at("mean").get<std::vector<double>>(), comp.value("scale", 1.0), comp.value("weight", 1.0)});
      }
      spec.concepts.push_back(std::move(c));
    }
    spec.lengths = j.at("lengths").get<std::vector<std::size_t>>();
    if (j.contains("transitions")) {
      for (const auto& tj : j.at("transitions")) {
        const auto type = tj.at("type").get<std::string>();
        if (type == "sudden") {
          spec.transitions.emplace_back(SuddenDrift{});
        } else if (type == "smooth") {
          spec.transitions.emplace_back(SmoothDrift{tj.at("width").get<std::size_t>()});
        } else {
          throw std::invalid_argument("stream spec: unknown transition type '" + type + "'");
        }
      }
    } else {
      spec.transitions.assign(spec.concepts.empty() ? 0 : spec.concepts.size() - 1, SuddenDrift{});
    }
    if (j.contains("anomaly_box")) {
      const auto& b = j.at("anomaly_box");
      spec.anomaly_box = AnomalyBox{b.at("lower").get<std::vector<double>>(), b.at("upper").get<std::vector<double>>()};
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("stream spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

json stream_spec_to_json(const StreamSpec& spec) {
  json j;
  j["seed"] = spec.seed;
  j["anomaly_rate"] = spec.anomaly_rate;
  j["concepts"] = json::array();
  for (const auto& c : spec.concepts) {
    json comps = json::array();
    for (const auto& comp : c.components) comps.push_back({{"mean", comp.mean}, {"scale", comp.scale}, {"weight", comp.weight}});
    j["concepts"].push_back({{"components", comps}});
  }
  j["lengths"] = spec.lengths;
  j["transitions"] = json::array();
  for (const auto& t : spec.transitions) {
    if (const auto* s = std::get_if<SmoothDrift>(&t)) {
      j["transitions"].push_back({{"type", "smooth"}, {"width", s->width}});
    } else {
      j["transitions"].push_back({{"type", "sudden"}});
    }
  }
  if (spec.anomaly_box) j["anomaly_box"] = {{"lower", spec.anomaly_box->lower}, {"upper", spec.anomaly_box->upper}};
  return j;
}

StreamSpec load_stream_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream spec '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("stream spec '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return stream_spec_from_json(j);
}

}  // namespace expose::cli
