#pragma once

#include <oge/types.hpp>

#include <cstdint>
#include <limits>
#include <string_view>

namespace oge {

/// Identifier of the generator, recorded in run metadata.
inline constexpr std::string_view rng_id = "splitmix64-counter";

inline constexpr std::uint64_t splitmix64 (std::uint64_t x)
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

/**
 * Counter-based stream keyed by (run seed, agent, tick). Draw i is a pure
 * function of the key and i, so streams of different agents never interact.
 */
class Substream
{
public:
	using result_type = std::uint64_t;

	Substream (std::uint64_t seed, AgentId agent, Tick tick) :
	key_ (splitmix64 (splitmix64 (splitmix64 (seed) ^ agent) ^ static_cast<std::uint64_t> (tick)))
	{
	}

	result_type operator() ()
	{
		return splitmix64 (key_ ^ splitmix64 (++counter_));
	}

	/// Uniform on [0, 1) with 53 bits of resolution.
	double uniform ()
	{
		return static_cast<double> ((*this) () >> 11) * 0x1.0p-53;
	}

	std::uint64_t draws () const
	{
		return counter_;
	}

	static constexpr result_type min ()
	{
		return 0;
	}
	static constexpr result_type max ()
	{
		return std::numeric_limits<result_type>::max ();
	}

private:
	std::uint64_t key_;
	std::uint64_t counter_{ 0 };
};
}
