#pragma once

#include <oge/economy_state.hpp>

#include <span>
#include <string>
#include <vector>

namespace oge {

struct MetricsFrame
{
	Tick tick{ 0 };
	double spot_price{ 0.0 };
	double s_token{ 0.0 };
	double s_assets{ 0.0 };
	double lambda_coeff{ 0.0 };
	double gini_utility{ 0.0 };
	double dominance_index{ 0.0 };
	double retention_rate{ 1.0 };
	double bot_capture_share{ 0.0 };
	double pool_liquidity_numeraire{ 0.0 };

	bool operator== (MetricsFrame const &) const = default;
};

/// Mean absolute difference over all ordered pairs divided by twice the mean.
double gini (std::span<double const> values);

/// Share of cumulative emissions credited to accounts not operated by their seed's human.
double bot_capture_share (EconomyState const & state);

/// Joined honest players still in the game over all joined honest players.
double retention_rate (EconomyState const & state);

/// Identity-labor coefficient over accounts active in the trailing window ending at `tick`.
double active_lambda (EconomyState const & state, Tick tick, Tick window);

/**
 * Mean active effective utility of capital accounts (whale and manager
 * primary accounts) over that of honest accounts.
 */
double dominance_index (Economy const & economy);

struct DetectorThresholds
{
	double price_drawdown{ 0.9 };
	double liquidity_floor{ 0.1 };
	Tick window{ 10 };

	bool operator== (DetectorThresholds const &) const = default;
};

/// Price at least `price_drawdown` below its running peak and liquidity under `liquidity_floor` of its peak, for `window` consecutive ticks.
bool death_spiral (std::span<double const> price, std::span<double const> liquidity, DetectorThresholds const & thresholds = {});

/// Frame describing the state after the last completed tick.
MetricsFrame compute_frame (Economy const & economy);

inline constexpr char const * metrics_csv_header = "tick,spot_price,s_token,s_assets,lambda,gini_utility,dominance_index,retention,bot_capture,liquidity";
std::string to_csv_row (MetricsFrame const & frame);
}
