#include "support.hpp"

#include <oge/metrics.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace oge;
using oge::test::error_of;
using oge::test::seed;

namespace {
double pairwise_gini (std::vector<double> const & v)
{
	double sum = 0.0;
	double total = 0.0;
	for (auto a : v)
	{
		total += a;
		for (auto b : v)
		{
			sum += std::abs (a - b);
		}
	}
	if (total == 0.0)
	{
		return 0.0;
	}
	auto n = static_cast<double> (v.size ());
	return (sum / (n * n)) / (2.0 * total / n);
}

std::vector<double> random_vector (std::mt19937_64 & rng)
{
	std::uniform_real_distribution<double> unit (0.0, 1.0);
	std::vector<double> v (1 + rng () % 40);
	for (auto & x : v)
	{
		x = rng () % 5 == 0 ? 0.0 : 1000.0 * unit (rng);
	}
	return v;
}
}

TEST (metrics, gini_examples)
{
	ASSERT_EQ (0.0, gini (std::vector<double>{ 5, 5, 5, 5 }));
	ASSERT_NEAR (0.75, gini (std::vector<double>{ 0, 0, 0, 1 }), 1e-12);
	ASSERT_NEAR (pairwise_gini ({ 0, 0, 0, 1 }), 0.75, 1e-12);
	ASSERT_EQ (0.0, gini (std::vector<double>{ 0, 0, 0 }));
	ASSERT_EQ (0.0, gini (std::vector<double>{}));
}

// Against the O(n^2) pairwise definition
TEST (metrics, gini_pairwise_oracle)
{
	std::mt19937_64 rng (21);
	for (int i = 0; i < 1000; ++i)
	{
		auto v = random_vector (rng);
		auto g = gini (v);
		ASSERT_NEAR (pairwise_gini (v), g, 1e-12);
		ASSERT_GE (g, 0.0);
		ASSERT_LT (g, 1.0);
	}
}

TEST (metrics, gini_scale_invariant)
{
	std::mt19937_64 rng (22);
	std::uniform_real_distribution<double> scale (1e-3, 1e3);
	for (int i = 0; i < 1000; ++i)
	{
		auto v = random_vector (rng);
		auto c = scale (rng);
		auto scaled = v;
		for (auto & x : scaled)
		{
			x *= c;
		}
		ASSERT_NEAR (gini (v), gini (scaled), 1e-12);
	}
}

TEST (metrics, spiral_monotone_crash)
{
	std::vector<double> price;
	std::vector<double> liquidity;
	for (int t = 0; t < 40; ++t)
	{
		price.push_back (1.0 - 0.95 * t / 39.0);
		liquidity.push_back (1000.0 * (1.0 - 0.99 * t / 39.0));
	}
	ASSERT_NEAR (0.05, price.back (), 1e-12);
	// Only three ticks sit below the drawdown threshold so far
	ASSERT_FALSE (death_spiral (price, liquidity));
	for (int t = 0; t < 7; ++t)
	{
		price.push_back (0.05);
		liquidity.push_back (10.0);
	}
	ASSERT_TRUE (death_spiral (price, liquidity));
}

TEST (metrics, spiral_flat)
{
	std::vector<double> price (100, 1.0);
	std::vector<double> liquidity (100, 1000.0);
	ASSERT_FALSE (death_spiral (price, liquidity));
}

// An 85% drawdown with a drained pool does not fire; 90% does
TEST (metrics, spiral_drawdown_boundary)
{
	auto series = [] (double floor) {
		std::vector<double> price{ 1.0 };
		std::vector<double> liquidity{ 1000.0 };
		for (int t = 0; t < 20; ++t)
		{
			price.push_back (floor);
			liquidity.push_back (1.0);
		}
		return std::pair{ price, liquidity };
	};
	auto [p85, l85] = series (0.15);
	ASSERT_FALSE (death_spiral (p85, l85));
	auto [p90, l90] = series (0.0999);
	ASSERT_TRUE (death_spiral (p90, l90));
}

// Price collapse alone is not a spiral, and the condition must last the full window
TEST (metrics, spiral_needs_both_and_window)
{
	std::vector<double> price{ 1.0 };
	std::vector<double> liquidity{ 1000.0 };
	for (int t = 0; t < 9; ++t)
	{
		price.push_back (0.01);
		liquidity.push_back (1.0);
	}
	ASSERT_FALSE (death_spiral (price, liquidity));
	price.push_back (0.01);
	liquidity.push_back (1.0);
	ASSERT_TRUE (death_spiral (price, liquidity));
	std::vector<double> full (liquidity.size (), 1000.0);
	ASSERT_FALSE (death_spiral (price, full));
}

// Loosening either threshold never turns a detection off
TEST (metrics, spiral_threshold_monotone)
{
	std::mt19937_64 rng (23);
	std::uniform_real_distribution<double> unit (0.0, 1.0);
	for (int round = 0; round < 500; ++round)
	{
		std::vector<double> price;
		std::vector<double> liquidity;
		double p = 1.0;
		double l = 100.0;
		for (int t = 0; t < 60; ++t)
		{
			p *= 0.6 + 0.5 * unit (rng);
			l *= 0.6 + 0.5 * unit (rng);
			price.push_back (p);
			liquidity.push_back (l);
		}
		DetectorThresholds strict{ 0.5 + 0.5 * unit (rng), 0.5 * unit (rng), 1 + static_cast<Tick> (rng () % 15) };
		DetectorThresholds loose = strict;
		loose.price_drawdown = strict.price_drawdown * unit (rng);
		loose.liquidity_floor = strict.liquidity_floor + (1.0 - strict.liquidity_floor) * unit (rng);
		if (death_spiral (price, liquidity, strict))
		{
			ASSERT_TRUE (death_spiral (price, liquidity, loose));
			auto looser_drawdown = strict;
			looser_drawdown.price_drawdown = loose.price_drawdown;
			ASSERT_TRUE (death_spiral (price, liquidity, looser_drawdown));
			auto looser_floor = strict;
			looser_floor.liquidity_floor = loose.liquidity_floor;
			ASSERT_TRUE (death_spiral (price, liquidity, looser_floor));
		}
	}
}

namespace {
/// Economy with `humans` honest accounts and `bots` bot-operated accounts that all play equally.
Economy populated (int humans, int bots)
{
	EconomyParams p;
	p.yield_curve = { 0.0, 0.0 };
	Economy economy (p, MechanismToggles::all_off (), LiquidityPool (1000, Tokens::from_double (1000), 0.0), 1);
	std::vector<AgentAction> reg;
	std::vector<AgentAction> play;
	for (int i = 0; i < humans + bots; ++i)
	{
		auto id = static_cast<AgentId> (i + 1);
		bool human = i < humans;
		economy.add_agent (id, human ? AgentKind::honest : AgentKind::bot_farm, human, 0.0);
		auto s = seed (id);
		reg.push_back ({ id, derive_pseudo_id (s), action::Register{ s, human } });
		play.push_back ({ id, derive_pseudo_id (s), action::Play{ 5, 0.0 } });
	}
	economy.step (reg);
	economy.step (play);
	return economy;
}

void give_asset (Economy & economy, PseudoId const & owner, double utility)
{
	auto & state = economy.mutable_state ();
	Asset a;
	a.asset_id = state.next_asset_id++;
	a.hash_origin = owner;
	a.current_owner = owner;
	a.base_utility = utility;
	a.active = true;
	state.assets[a.asset_id] = a;
}
}

TEST (metrics, bot_capture_none)
{
	auto economy = populated (10, 0);
	ASSERT_EQ (0.0, bot_capture_share (economy.state ()));
}

// 990 bot accounts and 10 humans with equal play
TEST (metrics, bot_capture_flood)
{
	auto economy = populated (10, 990);
	ASSERT_NEAR (0.99, bot_capture_share (economy.state ()), 1e-12);
	ASSERT_NEAR (0.01, compute_frame (economy).lambda_coeff, 1e-12);
}

TEST (metrics, retention_counts)
{
	auto economy = populated (10, 0);
	ASSERT_EQ (1.0, retention_rate (economy.state ()));
	for (AgentId i = 1; i <= 3; ++i)
	{
		economy.mutable_state ().agents[i].exited = true;
	}
	ASSERT_DOUBLE_EQ (0.7, retention_rate (economy.state ()));
	for (AgentId i = 1; i <= 10; ++i)
	{
		economy.mutable_state ().agents[i].exited = true;
	}
	ASSERT_EQ (0.0, retention_rate (economy.state ()));
}

namespace {
/// Two honest players and two whales, each with one registered primary account.
Economy capital_world ()
{
	EconomyParams p;
	Economy economy (p, MechanismToggles::all_on (), LiquidityPool (1000, Tokens::from_double (1000), 0.0), 1);
	std::vector<AgentAction> reg;
	for (AgentId id = 1; id <= 4; ++id)
	{
		economy.add_agent (id, id <= 2 ? AgentKind::honest : AgentKind::whale, true, 0.0);
		economy.mutable_state ().attestor.add (seed (id));
		reg.push_back ({ id, derive_pseudo_id (seed (id)), action::Register{ seed (id), true } });
	}
	economy.step (reg);
	return economy;
}
}

TEST (metrics, dominance_zero_when_whales_empty)
{
	auto economy = capital_world ();
	give_asset (economy, derive_pseudo_id (seed (1)), 100);
	ASSERT_EQ (0.0, dominance_index (economy));
}

// Whale mean 200 over player mean 100
TEST (metrics, dominance_ratio)
{
	auto economy = capital_world ();
	give_asset (economy, derive_pseudo_id (seed (1)), 150);
	give_asset (economy, derive_pseudo_id (seed (2)), 50);
	give_asset (economy, derive_pseudo_id (seed (3)), 300);
	give_asset (economy, derive_pseudo_id (seed (4)), 100);
	ASSERT_DOUBLE_EQ (2.0, dominance_index (economy));
}

TEST (metrics, dominance_needs_humans)
{
	EconomyParams p;
	Economy economy (p, MechanismToggles::all_on (), LiquidityPool (1000, Tokens::from_double (1000), 0.0), 1);
	ASSERT_EQ (Errc::no_human_players, error_of ([&] { dominance_index (economy); }));
}

// A frame depends only on the snapshot: copying the state reproduces it bit for bit
TEST (metrics, frame_pure)
{
	auto economy = populated (7, 13);
	give_asset (economy, derive_pseudo_id (seed (1)), 40);
	auto snapshot = economy;
	ASSERT_EQ (compute_frame (economy), compute_frame (snapshot));
	ASSERT_EQ (to_csv_row (compute_frame (economy)), to_csv_row (compute_frame (snapshot)));
}

TEST (metrics, csv_layout)
{
	ASSERT_STREQ ("tick,spot_price,s_token,s_assets,lambda,gini_utility,dominance_index,retention,bot_capture,liquidity", metrics_csv_header);
	MetricsFrame f;
	f.tick = 3;
	f.spot_price = 0.1;
	f.retention_rate = 1.0;
	ASSERT_EQ ("3,0.1,0,0,0,0,0,1,0,0", to_csv_row (f));
}
