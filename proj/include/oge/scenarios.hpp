#pragma once

#include <oge/agents.hpp>
#include <oge/economy_state.hpp>
#include <oge/metrics.hpp>

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace oge {

struct PoolConfig
{
	double numeraire{ 10000.0 };
	double token{ 10000.0 };
	double fee_rate{ 0.003 };

	bool operator== (PoolConfig const &) const = default;
};

/// `count` agents sharing one policy; agent k arrives `arrival_step * k` ticks after the policy's arrival.
struct AgentGroup
{
	std::int64_t count{ 1 };
	Tick arrival_step{ 0 };
	AgentPolicy policy;

	bool operator== (AgentGroup const &) const = default;
};

struct ScenarioConfig
{
	std::string name{ "custom" };
	std::uint64_t seed{ 0 };
	Tick ticks{ 100 };
	MechanismToggles toggles;
	EconomyParams economy;
	PoolConfig pool;
	std::vector<AgentGroup> agents;
	DetectorThresholds detector;

	bool operator== (ScenarioConfig const &) const = default;
};

/// Parses and validates a JSON document. Throws ParseError or ValidationError naming the field.
ScenarioConfig load_scenario (std::string_view document);
/// Canonical JSON form with every field present.
std::string serialize_scenario (ScenarioConfig const & config);

/// Registered built-in names, lexicographic: `<family>.baseline` and `<family>.ibaim`.
std::vector<std::string> builtin_names ();
std::vector<ScenarioConfig> builtin_scenarios ();
/// Throws ValidationError listing the available names when `name` is unknown.
ScenarioConfig builtin_scenario (std::string_view name);

/// Wires a config into an economy and its agents and advances it one tick at a time.
class Simulation
{
public:
	explicit Simulation (ScenarioConfig config);

	/// Runs one tick and returns its events.
	std::vector<Event> const & step ();
	void run (std::function<void (std::vector<Event> const &)> const & on_events = {});
	bool done () const
	{
		return economy_.state ().tick >= config_.ticks;
	}

	ScenarioConfig const & config () const
	{
		return config_;
	}
	Economy const & economy () const
	{
		return economy_;
	}
	/// Writable state for tests that perturb hidden data.
	Economy & mutable_economy ()
	{
		return economy_;
	}
	std::vector<Agent> const & agents () const
	{
		return agents_;
	}
	std::vector<MetricsFrame> const & frames () const
	{
		return frames_;
	}
	std::vector<AgentAction> const & last_actions () const
	{
		return last_actions_;
	}
	bool death_spiral () const;

private:
	ScenarioConfig config_;
	Economy economy_;
	std::vector<Agent> agents_;
	std::vector<MetricsFrame> frames_;
	std::vector<AgentAction> last_actions_;
	std::vector<Event> last_events_;
};

struct AblationCell
{
	std::string name;
	MechanismToggles toggles;

	bool operator== (AblationCell const &) const = default;
};

/// full_on, full_off and one leave-one-out cell per mechanism.
std::vector<AblationCell> default_ablation_cells ();

struct CellReport
{
	AblationCell cell;
	MetricsFrame final_frame;
	bool death_spiral{ false };
	double price_peak_ratio{ 0.0 };
	std::vector<MetricsFrame> frames;
};

using CellObserver = std::function<void (AblationCell const &, Simulation const &, std::vector<Event> const &)>;

/// One run per cell on the config's seed; cells are independent.
std::vector<CellReport> run_ablation (ScenarioConfig const & config, std::vector<AblationCell> const & cells, CellObserver const & on_tick = {});

inline constexpr char const * summary_csv_header = "cell,death_spiral,price_peak_ratio,lambda,retention";
std::string to_summary_row (CellReport const & report);
}
