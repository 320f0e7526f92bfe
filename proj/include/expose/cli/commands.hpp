#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace expose::cli {

struct MapOptions {
  std::string map = "rks";          ///< rks | nystroem
  std::optional<std::size_t> features;  ///< RKS expansions or Nystroem landmarks
  std::string sigma = "auto";       ///< positive number or "auto"
  std::uint64_t seed = 0;
};

struct FitOptions {
  std::string input;
  MapOptions map;
  std::size_t threads = 1;
  std::string out;
};

struct ScoreOptions {
  std::string model;
  std::string input;
  std::optional<double> theta;
  bool normalize = false;
  std::string out;  ///< empty = standard output
};

struct StreamOptions {
  std::string input;     ///< CSV, or empty when `generate` is set
  std::string generate;  ///< stream spec JSON
  std::vector<std::string> mode{"online"};
  MapOptions map;
  std::optional<double> theta;
  std::string eval;     ///< "", "prequential" or "holdout:EVERY"
  std::string holdout;  ///< holdout CSV for CSV input
  std::size_t holdout_size = 500;
  std::size_t trailing_window = 100;
  std::string out;
  std::string model_out;
};

struct GridOptions {
  std::string model;
  std::vector<double> bounds;  ///< x1_min, x1_max, x2_min, x2_max
  std::size_t resolution = 50;
  std::string out;
};

struct CompareOptions {
  std::string input;
  double alpha = 0.05;
  std::string out;
};

struct GenerateOptions {
  std::string spec;
  std::string out;
};

/// Each command throws on failure; `run_cli` maps that to exit status 1.
void cmd_fit(const FitOptions& options, std::ostream& log);
void cmd_score(const ScoreOptions& options, std::ostream& out);
void cmd_stream(const StreamOptions& options, std::ostream& out);
void cmd_grid(const GridOptions& options, std::ostream& out);
void cmd_compare(const CompareOptions& options, std::ostream& out);
void cmd_generate(const GenerateOptions& options, std::ostream& out);

/// Parses arguments and dispatches. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace expose::cli
