#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dox/metric.hpp"

namespace dox::cli {

enum ExitCode : int {
  kOk = 0,
  kGateFailed = 1,
  kConfigError = 2,
  kBackendError = 3,
  kIoError = 4,
};

// One phrase per line; '#' starts a comment. Throws ConfigError naming
// `flag` when the file cannot be read.
std::vector<Aspect> load_aspect_file(const std::filesystem::path& path,
                                     const std::string& flag = "--aspects");

// Noun chunks of a free-text explanandum description, deduplicated by key.
std::vector<Aspect> derive_aspects(const std::string& description);

// Entry point behind the `dox` binary. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dox::cli
