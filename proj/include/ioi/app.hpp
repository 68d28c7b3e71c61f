#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "ioi/fiducial.hpp"

namespace ioi {

inline constexpr const char* kEngineName = "ioi";
inline constexpr const char* kEngineVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitAnalogyRejected = 2,
  kExitValidation = 3,
  kExitNumerical = 4,
};

/// Reads a single-column CSV with header "value" and summarises it. The
/// known variance is supplied by the caller. Throws ValidationError with the
/// offending row number for non-numeric cells, and for an empty file.
DataSummary ingest_csv(const std::filesystem::path& path, double sigma2);

/// Command-line overrides applied on top of the config file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

/// A parsed, validated analysis configuration.
struct AnalysisConfig {
  std::string mode;
  nlohmann::json raw;                  // effective config (overrides applied)
  std::filesystem::path base_dir;      // directory relative paths resolve from
  std::filesystem::path output_path;
  std::optional<std::uint64_t> seed;
};

/// Parses and validates `config_path`. Throws ValidationError.
AnalysisConfig load_config(const std::filesystem::path& config_path,
                           const RunOverrides& overrides = {});

/// Runs the analysis and returns the report that `run` would write.
nlohmann::json analyse(const AnalysisConfig& config);

/// Writes `contents` to `path` via a temporary file in the same directory
/// followed by a rename.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

/// Full `ioi run` behaviour: load, analyse, write the report (and the draws
/// CSV in gibbs mode). Errors go to `err` as one JSON record; the return
/// value is the process exit code.
int run(const std::filesystem::path& config_path, const RunOverrides& overrides,
        std::ostream& err);

/// `ioi validate`: load the config and check its data inputs without
/// running the engines.
int validate(const std::filesystem::path& config_path, std::ostream& out,
             std::ostream& err);

/// Exit code for an exception escaping the engines.
int exit_code_for(const std::exception& e);

}  // namespace ioi
