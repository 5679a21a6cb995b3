#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "muntz/scalar.hpp"

namespace muntz::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kOutDirEnv = "MUNTZ_OUT_DIR";

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2 };

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string started_at;
  std::string finished_at;
  std::string tool_version = kToolVersion;
  PrecisionPolicy policy;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const;
};

/// Writes via a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& body);

/// CSV body: header plus rows, comma separated, LF line endings.
std::string csv_body(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

/// Fixed-point formatting used for log10 columns.
std::string format_fixed(double v, int decimals = 6);

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace muntz::cli
