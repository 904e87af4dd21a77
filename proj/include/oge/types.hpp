#pragma once

#include <oge/hash.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace oge {

using Tick = std::int64_t;
using AgentId = std::uint32_t;
using AssetId = std::uint64_t;
using ClassId = std::uint32_t;

/// Error codes shared by every module. The step loop turns them into events.
enum class Errc {
	duplicate_identity,
	unknown_identity,
	unattested_seed,
	invalid_proof,
	time_regression,
	empty_active_set,
	insufficient_effort,
	time_lock_active,
	lapsed_identity,
	self_transfer,
	foreign_asset,
	unknown_asset,
	non_positive_amount,
	insufficient_balance,
	insufficient_materials,
	not_owner,
	already_listed,
	no_human_players,
	parse_error,
	validation_error,
	io_error,
};

std::string_view to_string (Errc code);

class Error : public std::runtime_error
{
public:
	Error (Errc code, std::string const & what) :
	std::runtime_error (what),
	code_ (code)
	{
	}
	explicit Error (Errc code) :
	Error (code, std::string (to_string (code)))
	{
	}
	Errc code () const
	{
		return code_;
	}

private:
	Errc code_;
};

/// Pseudo-anonymous account identifier. Derived from the seed commitment.
struct PseudoId
{
	Digest value{};
	auto operator<=> (PseudoId const &) const = default;
	std::string short_hex () const
	{
		return value.hex ().substr (0, 16);
	}
};

/**
 * Fixed-point quantity with one million units per whole. Ledger arithmetic
 * is done on the integer units so supply sums are exact.
 */
template <typename Tag>
struct Fixed
{
	static constexpr std::int64_t scale = 1'000'000;
	std::int64_t units{ 0 };

	static constexpr Fixed from_units (std::int64_t u)
	{
		return Fixed{ u };
	}
	static Fixed from_double (double value);
	double to_double () const
	{
		return static_cast<double> (units) / static_cast<double> (scale);
	}
	/// Exact decimal rendering, trailing zeros trimmed.
	std::string to_string () const;

	auto operator<=> (Fixed const &) const = default;
	Fixed & operator+= (Fixed other)
	{
		units += other.units;
		return *this;
	}
	Fixed & operator-= (Fixed other)
	{
		units -= other.units;
		return *this;
	}
	friend Fixed operator+ (Fixed a, Fixed b)
	{
		return Fixed{ a.units + b.units };
	}
	friend Fixed operator- (Fixed a, Fixed b)
	{
		return Fixed{ a.units - b.units };
	}
	Fixed operator* (std::int64_t n) const
	{
		return Fixed{ units * n };
	}
};

struct TokenTag
{
};
struct MaterialTag
{
};
using Tokens = Fixed<TokenTag>;
using Materials = Fixed<MaterialTag>;

/// Mechanism switches forming the ablation matrix.
struct MechanismToggles
{
	bool identity_enforced{ true };
	bool asymmetric_decay{ true };
	bool single_slot{ true };
	bool entropy_enabled{ true };
	bool supply_scaled_entropy{ true };

	bool operator== (MechanismToggles const &) const = default;

	static MechanismToggles all_on ()
	{
		return {};
	}
	static MechanismToggles all_off ()
	{
		return { false, false, false, false, false };
	}
};

std::string format_double (double value);
}
