#pragma once

#include <oge/economy_state.hpp>
#include <oge/rng.hpp>

#include <limits>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace oge {

struct HonestParams
{
	double skill{ 0.5 };
	std::int64_t effort_per_tick{ 1 };
	/// Numeraire earned per unit effort below which a tick counts toward churn.
	double churn_threshold{ 0.0 };
	Tick churn_window{ 10 };
	double p2w_tolerance{ std::numeric_limits<double>::infinity () };
	Tick arrival{ 0 };
	double join_capital{ 0.0 };
	bool mint_for_sale{ false };
	std::int64_t max_listings{ 1 };
	/// Listing price as a multiple of the mint fee.
	double list_markup{ 1.5 };
	/// Highest ask, as a multiple of the mint fee, paid for a missing class.
	double buy_markup{ 2.0 };
	/// Fraction of surplus balance sold each tick.
	double cashout_fraction{ 1.0 };

	bool operator== (HonestParams const &) const = default;
};

struct BotFarmParams
{
	std::int64_t target_accounts{ 100 };
	std::int64_t seeds_held{ 1 };
	/// Numeraire per account per tick; accounts earning less are abandoned.
	double op_cost_per_account{ 0.0 };
	std::int64_t effort_per_tick{ 1 };
	Tick arrival{ 0 };

	bool operator== (BotFarmParams const &) const = default;
};

struct ManagerScholarParams
{
	std::int64_t scholar_count{ 10 };
	double revenue_share{ 0.5 };
	bool scholars_use_own_seeds{ false };
	/// Per-tick chance a scholar stops remitting, without and with biometric tethering.
	double defect_prob{ 0.0 };
	double defect_prob_tethered{ 0.0 };
	std::int64_t effort_per_tick{ 1 };
	double skill{ 0.0 };
	Tick arrival{ 0 };

	bool operator== (ManagerScholarParams const &) const = default;
};

struct WhaleParams
{
	double capital{ 1000.0 };
	double entry_price{ 0.0 };
	/// Trailing stop: exit once spot falls to exit_price times the peak seen.
	double exit_price{ 0.6 };
	std::int64_t fleet_target{ 10 };
	ClassId fleet_class{ 0 };
	/// Highest ask accepted, as a multiple of the mint fee.
	double max_ask_markup{ 4.0 };
	std::int64_t buys_per_tick{ 10 };
	/// Ticks without fills before the whale stops buying.
	Tick patience{ 20 };
	Tick arrival{ 0 };

	bool operator== (WhaleParams const &) const = default;
};

/// Timed action for deterministic traces.
struct ScriptedStep
{
	Tick tick{ 0 };
	std::string op;
	std::int64_t activity{ 0 };
	ClassId class_id{ 0 };
	AssetId asset_id{ 0 };
	double amount{ 0.0 };

	bool operator== (ScriptedStep const &) const = default;
};

struct ScriptedParams
{
	double numeraire{ 0.0 };
	std::vector<ScriptedStep> steps;

	bool operator== (ScriptedParams const &) const = default;
};

using AgentPolicy = std::variant<HonestParams, BotFarmParams, ManagerScholarParams, WhaleParams, ScriptedParams>;

AgentKind kind_of (AgentPolicy const & policy);

class Agent
{
public:
	Agent (AgentId id, AgentPolicy policy, std::uint64_t run_seed);

	/// Actions for the coming tick. Reads only the public observation and the agent's own substream.
	std::vector<AgentAction> decide (Observation const & obs, Substream & rng);

	AgentId id () const
	{
		return id_;
	}
	AgentKind kind () const
	{
		return kind_of (policy_);
	}
	AgentPolicy const & policy () const
	{
		return policy_;
	}
	/// Whether the operator is a person acting under their own identity.
	bool human_operator () const;
	double initial_numeraire () const;
	/// Seeds of real people this agent can present to the attestor.
	std::vector<BiometricSeed> const & genuine_seeds () const
	{
		return genuine_;
	}
	bool exited () const
	{
		return memory_.exited;
	}
	/// Accounts the agent has stopped operating (bot farms only).
	std::set<PseudoId> const & abandoned () const
	{
		return memory_.abandoned;
	}

private:
	enum class WhalePhase
	{
		idle,
		buying,
		harvesting,
		exited
	};

	struct Memory
	{
		bool started{ false };
		bool exited{ false };
		Tick below_threshold{ 0 };
		std::set<PseudoId> abandoned;
		std::set<PseudoId> played;
		std::set<std::size_t> defected;
		WhalePhase whale_phase{ WhalePhase::idle };
		double peak_seen{ 0.0 };
		Tick dry_ticks{ 0 };
	};

	std::vector<AgentAction> decide_honest (HonestParams const & p, Observation const & obs);
	std::vector<AgentAction> decide_bot_farm (BotFarmParams const & p, Observation const & obs);
	std::vector<AgentAction> decide_ring (ManagerScholarParams const & p, Observation const & obs, Substream & rng);
	std::vector<AgentAction> decide_whale (WhaleParams const & p, Observation const & obs);
	std::vector<AgentAction> decide_scripted (ScriptedParams const & p, Observation const & obs);

	void push (std::vector<AgentAction> & out, PseudoId const & account, ActionKind kind) const;
	void authenticate_if_due (std::vector<AgentAction> & out, Observation const & obs, AccountView const & account) const;
	BiometricSeed const * seed_for (PseudoId const & account) const;
	BiometricSeed fabricated (std::uint64_t index) const;

	AgentId id_;
	AgentPolicy policy_;
	std::uint64_t run_seed_;
	std::vector<BiometricSeed> genuine_;
	std::map<PseudoId, BiometricSeed> seed_by_account_;
	Memory memory_;
};
}
