#include <oge/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace oge {

double gini (std::span<double const> values)
{
	if (values.empty ())
	{
		return 0.0;
	}
	double total = 0.0;
	for (auto v : values)
	{
		total += v;
	}
	if (total <= 0.0)
	{
		return 0.0;
	}
	// Sorted form of the pairwise sum: sum_i (2i - n + 1) x_(i) over all ordered pairs.
	std::vector<double> sorted (values.begin (), values.end ());
	std::sort (sorted.begin (), sorted.end ());
	auto n = static_cast<double> (sorted.size ());
	double weighted = 0.0;
	for (std::size_t i = 0; i < sorted.size (); ++i)
	{
		weighted += (2.0 * static_cast<double> (i) - n + 1.0) * sorted[i];
	}
	double mean_abs_diff = 2.0 * weighted / (n * n);
	double mean = total / n;
	// Equal values can leave a rounding residue just below zero.
	return std::max (0.0, mean_abs_diff / (2.0 * mean));
}

double bot_capture_share (EconomyState const & state)
{
	if (state.cumulative_emission.units <= 0)
	{
		return 0.0;
	}
	std::int64_t bot_units = 0;
	for (auto const & [id, account] : state.accounts)
	{
		if (!GroundTruthView::is_human (state.registry, id))
		{
			bot_units += account.cumulative_emission.units;
		}
	}
	return static_cast<double> (bot_units) / static_cast<double> (state.cumulative_emission.units);
}

double retention_rate (EconomyState const & state)
{
	std::size_t joined = 0;
	std::size_t remaining = 0;
	for (auto const & [id, agent] : state.agents)
	{
		if (agent.kind != AgentKind::honest || agent.joined_tick < 0)
		{
			continue;
		}
		++joined;
		if (!agent.exited)
		{
			++remaining;
		}
	}
	return joined == 0 ? 1.0 : static_cast<double> (remaining) / static_cast<double> (joined);
}

double active_lambda (EconomyState const & state, Tick tick, Tick window)
{
	std::set<PseudoId> active;
	for (auto const & [id, account] : state.accounts)
	{
		if (account.last_active >= 0 && account.last_active > tick - window)
		{
			active.insert (id);
		}
	}
	if (active.empty ())
	{
		return 0.0;
	}
	return identity_labor_coefficient (state.registry, active);
}

namespace {
std::map<PseudoId, double> active_utility_by_account (Economy const & economy)
{
	std::map<PseudoId, double> out;
	for (auto const & [id, asset] : economy.state ().assets)
	{
		if (asset.active)
		{
			out[asset.current_owner] += economy.utility_of (asset);
		}
	}
	return out;
}
}

double dominance_index (Economy const & economy)
{
	auto const & state = economy.state ();
	auto utility = active_utility_by_account (economy);
	double capital_sum = 0.0;
	std::size_t capital_n = 0;
	double honest_sum = 0.0;
	std::size_t honest_n = 0;
	for (auto const & [id, account] : state.accounts)
	{
		auto const & agent = state.agents.at (account.agent);
		if (agent.exited)
		{
			continue;
		}
		auto it = utility.find (id);
		double u = it == utility.end () ? 0.0 : it->second;
		if (agent.kind == AgentKind::honest)
		{
			honest_sum += u;
			++honest_n;
		}
		else if ((agent.kind == AgentKind::whale || agent.kind == AgentKind::manager_scholar) && account.primary)
		{
			capital_sum += u;
			++capital_n;
		}
	}
	if (honest_n == 0)
	{
		throw Error (Errc::no_human_players);
	}
	if (capital_n == 0 || capital_sum <= 0.0)
	{
		return 0.0;
	}
	double honest_mean = honest_sum / static_cast<double> (honest_n);
	double capital_mean = capital_sum / static_cast<double> (capital_n);
	if (honest_mean <= 0.0)
	{
		return std::numeric_limits<double>::infinity ();
	}
	return capital_mean / honest_mean;
}

bool death_spiral (std::span<double const> price, std::span<double const> liquidity, DetectorThresholds const & thresholds)
{
	auto n = std::min (price.size (), liquidity.size ());
	double price_peak = -std::numeric_limits<double>::infinity ();
	double liquidity_peak = -std::numeric_limits<double>::infinity ();
	Tick run = 0;
	for (std::size_t t = 0; t < n; ++t)
	{
		price_peak = std::max (price_peak, price[t]);
		liquidity_peak = std::max (liquidity_peak, liquidity[t]);
		bool collapsed = price[t] <= (1.0 - thresholds.price_drawdown) * price_peak;
		bool drained = liquidity[t] < thresholds.liquidity_floor * liquidity_peak;
		run = (collapsed && drained) ? run + 1 : 0;
		if (run >= thresholds.window)
		{
			return true;
		}
	}
	return false;
}

MetricsFrame compute_frame (Economy const & economy)
{
	auto const & state = economy.state ();
	MetricsFrame frame;
	frame.tick = state.tick - 1;
	frame.spot_price = state.pool.spot_price ();
	frame.s_token = economy.supply ().to_double ();
	frame.s_assets = static_cast<double> (state.assets.size ());
	frame.lambda_coeff = active_lambda (state, frame.tick, economy.params ().active_window);

	auto utility = active_utility_by_account (economy);
	std::vector<double> per_account;
	for (auto const & [id, account] : state.accounts)
	{
		if (state.agents.at (account.agent).exited)
		{
			continue;
		}
		auto it = utility.find (id);
		per_account.push_back (it == utility.end () ? 0.0 : it->second);
	}
	frame.gini_utility = gini (per_account);
	try
	{
		frame.dominance_index = dominance_index (economy);
	}
	catch (Error const &)
	{
		frame.dominance_index = 0.0;
	}
	frame.retention_rate = retention_rate (state);
	frame.bot_capture_share = bot_capture_share (state);
	frame.pool_liquidity_numeraire = state.pool.reserve_numeraire ();
	return frame;
}

std::string to_csv_row (MetricsFrame const & f)
{
	std::string row = std::to_string (f.tick);
	for (double v : { f.spot_price, f.s_token, f.s_assets, f.lambda_coeff, f.gini_utility, f.dominance_index, f.retention_rate,
	     f.bot_capture_share, f.pool_liquidity_numeraire })
	{
		row += ',';
		row += format_double (v);
	}
	return row;
}
}
