#pragma once

#include <oge/identity_registry.hpp>
#include <oge/types.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace oge::test {

/// Error code thrown by `f`, or nothing when it returns normally.
template <typename F>
std::optional<Errc> error_of (F && f)
{
	try
	{
		f ();
	}
	catch (Error const & e)
	{
		return e.code ();
	}
	return std::nullopt;
}

inline BiometricSeed seed (std::uint64_t index)
{
	return make_seed (0x5eed, "test", 0, index);
}

inline std::string read_text (std::filesystem::path const & path)
{
	std::ifstream file (path, std::ios::binary);
	std::ostringstream buffer;
	buffer << file.rdbuf ();
	return buffer.str ();
}

inline std::filesystem::path fixture (std::string const & name)
{
	return std::filesystem::path (OGE_TEST_FIXTURES) / name;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir (std::string const & name)
{
	auto dir = std::filesystem::temp_directory_path () / ("oge_test_" + name);
	std::filesystem::remove_all (dir);
	std::filesystem::create_directories (dir);
	return dir;
}
}
