#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace oge {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_io_error = 2;

/// Entry point for `run`, `ablate` and `list`. Returns the process exit code.
int run_cli (int argc, char const * const * argv, std::ostream & out, std::ostream & err);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_atomic (std::filesystem::path const & path, std::string const & contents);
}
