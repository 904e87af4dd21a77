#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace oge {

/// 256-bit hash output.
struct Digest
{
	std::array<std::uint8_t, 32> bytes{};

	auto operator<=> (Digest const &) const = default;
	std::string hex () const;
	bool is_zero () const;
};

/// Identifier of the hash function, recorded in run metadata.
inline constexpr std::string_view hash_function_id = "sha256";

Digest sha256 (std::span<std::uint8_t const> data);

/**
 * Incremental SHA-256 over length-prefixed fields, so concatenations of
 * different field splits never collide.
 */
class Hasher
{
public:
	Hasher ();
	~Hasher ();
	Hasher (Hasher const &) = delete;
	Hasher & operator= (Hasher const &) = delete;

	Hasher & add (std::span<std::uint8_t const> data);
	Hasher & add (Digest const & digest);
	Hasher & add (std::string_view text);
	Hasher & add (std::uint64_t value);
	Digest finish ();

private:
	void * ctx_;
};
}
