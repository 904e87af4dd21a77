#include <oge/types.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace oge {

std::string_view to_string (Errc code)
{
	switch (code)
	{
		case Errc::duplicate_identity:
			return "DuplicateIdentity";
		case Errc::unknown_identity:
			return "UnknownIdentity";
		case Errc::unattested_seed:
			return "UnattestedSeed";
		case Errc::invalid_proof:
			return "InvalidProof";
		case Errc::time_regression:
			return "TimeRegression";
		case Errc::empty_active_set:
			return "EmptyActiveSet";
		case Errc::insufficient_effort:
			return "InsufficientEffort";
		case Errc::time_lock_active:
			return "TimeLockActive";
		case Errc::lapsed_identity:
			return "LapsedIdentity";
		case Errc::self_transfer:
			return "SelfTransfer";
		case Errc::foreign_asset:
			return "ForeignAsset";
		case Errc::unknown_asset:
			return "UnknownAsset";
		case Errc::non_positive_amount:
			return "NonPositiveAmount";
		case Errc::insufficient_balance:
			return "InsufficientBalance";
		case Errc::insufficient_materials:
			return "InsufficientMaterials";
		case Errc::not_owner:
			return "NotOwner";
		case Errc::already_listed:
			return "AlreadyListed";
		case Errc::no_human_players:
			return "NoHumanPlayers";
		case Errc::parse_error:
			return "ParseError";
		case Errc::validation_error:
			return "ValidationError";
		case Errc::io_error:
			return "IoError";
	}
	return "Unknown";
}

template <typename Tag>
Fixed<Tag> Fixed<Tag>::from_double (double value)
{
	return Fixed{ std::llround (value * static_cast<double> (scale)) };
}

template <typename Tag>
std::string Fixed<Tag>::to_string () const
{
	auto magnitude = units < 0 ? -units : units;
	std::string out = units < 0 ? "-" : "";
	out += std::to_string (magnitude / scale);
	auto frac = magnitude % scale;
	if (frac != 0)
	{
		std::string digits = std::to_string (frac);
		digits.insert (0, 6 - digits.size (), '0');
		while (digits.back () == '0')
		{
			digits.pop_back ();
		}
		out += '.';
		out += digits;
	}
	return out;
}

template struct Fixed<TokenTag>;
template struct Fixed<MaterialTag>;

std::string format_double (double value)
{
	if (std::isnan (value))
	{
		return "nan";
	}
	std::array<char, 64> buf{};
	auto [end, ec] = std::to_chars (buf.data (), buf.data () + buf.size (), value);
	if (ec != std::errc{})
	{
		std::abort ();
	}
	return std::string (buf.data (), end);
}
}
