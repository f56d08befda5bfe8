#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace discwitness::cli {

enum class Command { Profile, Moments, Asymptotics, Inscribed, Identities, Residuals, Optimize, Report };
enum class Format { Csv, Json };

struct RunConfig {
  Command command = Command::Profile;
  std::filesystem::path shape;
  std::optional<std::filesystem::path> out;  ///< stdout when empty
  std::optional<Format> format;              ///< per-command default when empty
  double frame_deg = 0.0;
  int n_max = 40;
  std::vector<int> n_list;  ///< overrides n_max when non-empty
  std::vector<int> m_list{50, 100, 200, 400};
  std::string method = "all";  ///< chord | green | area | all
  double tol = 1e-6;
  int samples = 1000;
  double step = 1e-4;
  std::uint64_t seed = 1;
  // optimize
  std::string objective = "kl";  ///< kl | bracket
  int max_iter = 5000;
  int harmonics = 8;
  int restarts = 4;
  bool free_translation = false;
  std::optional<std::filesystem::path> shape_out;
};

/// Parses argv. Returns the exit status instead when parsing ends the run
/// (help, version, or a usage error reported on `err`).
struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = 0;
};
ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs one subcommand. 0 on success, 2 on validation errors, 1 on numerical failures.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace discwitness::cli
