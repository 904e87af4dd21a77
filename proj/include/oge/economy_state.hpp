#pragma once

#include <oge/asset_engine.hpp>
#include <oge/identity_registry.hpp>
#include <oge/market.hpp>
#include <oge/types.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace oge {

struct EconomyParams
{
	/// Tokens per activity tick of verified play.
	double emission_rate{ 1.0 };
	/// Tokens per unit of active effective utility per tick.
	double harvest_rate{ 0.0 };
	double alpha{ 0.0 };
	double beta{ 0.0 };
	double supply_scale{ 1.0 };
	double supply_ref{ 100.0 };
	Tick grace_period{ 7 };
	double lapse_penalty{ 0.5 };
	MintPolicy mint_policy;
	double mint_fee{ 5.0 };
	/// Base utility per homogeneity class; its size is the number of classes.
	std::vector<double> class_utility{ 100.0 };
	double repair_rate{ 0.04 };
	/// Tokens burned per unit of repair material bought from the system.
	double material_price{ 0.5 };
	YieldCurve yield_curve;
	/// Exogenous speculator numeraire deposited into the pool each tick.
	double speculator_inflow{ 0.0 };
	/// Speculators only buy while spot is at least this fraction of the launch price.
	double speculator_confidence{ 0.0 };
	Tick active_window{ 10 };

	bool operator== (EconomyParams const &) const = default;
};

enum class AgentKind
{
	honest,
	bot_farm,
	manager_scholar,
	whale,
	scripted
};

std::string_view to_string (AgentKind kind);

namespace action {
struct Register
{
	BiometricSeed seed;
	/// False when the account is operated by someone other than the seed's human.
	bool own_seed{ true };
	bool operator== (Register const &) const = default;
};
struct Authenticate
{
	Digest proof;
	bool operator== (Authenticate const &) const = default;
};
struct Play
{
	std::int64_t activity{ 0 };
	double skill{ 0.0 };
	bool operator== (Play const &) const = default;
};
struct Mint
{
	ClassId class_id{ 0 };
	bool operator== (Mint const &) const = default;
};
struct List
{
	AssetId asset_id{ 0 };
	Tokens price;
	bool operator== (List const &) const = default;
};
struct Buy
{
	ClassId class_id{ 0 };
	Tokens max_price;
	bool operator== (Buy const &) const = default;
};
struct SwapIn
{
	double numeraire{ 0.0 };
	bool operator== (SwapIn const &) const = default;
};
struct SwapOut
{
	/// Empty means the whole balance at execution time.
	std::optional<Tokens> amount;
	bool operator== (SwapOut const &) const = default;
};
struct Remit
{
	PseudoId to;
	Tokens amount;
	bool operator== (Remit const &) const = default;
};
struct BuyMaterials
{
	Materials quantity;
	bool operator== (BuyMaterials const &) const = default;
};
struct Activate
{
	std::vector<AssetId> assets;
	bool operator== (Activate const &) const = default;
};
struct Repair
{
	AssetId asset_id{ 0 };
	Materials quantity;
	bool operator== (Repair const &) const = default;
};
struct Exit
{
	bool operator== (Exit const &) const = default;
};
}

using ActionKind = std::variant<action::Register, action::Authenticate, action::Play, action::Mint, action::List, action::Buy,
action::SwapIn, action::SwapOut, action::Remit, action::BuyMaterials, action::Activate, action::Repair, action::Exit>;

struct AgentAction
{
	AgentId agent{ 0 };
	PseudoId account;
	ActionKind kind;

	bool operator== (AgentAction const &) const = default;
};

std::string_view action_name (ActionKind const & kind);

struct Event
{
	Tick tick{ 0 };
	/// Empty for system events (speculator inflow, degradation).
	std::optional<AgentId> agent;
	std::string type;
	std::string payload;

	bool operator== (Event const &) const = default;
};

struct Account
{
	AgentId agent{ 0 };
	PopeReceipt receipt;
	Materials materials;
	Tokens earned_this_tick;
	Tokens earned_last_tick;
	Tokens cumulative_emission;
	Tick last_active{ -1 };
	/// First account registered by the agent.
	bool primary{ false };
};

struct AgentRecord
{
	AgentKind kind{ AgentKind::honest };
	/// Operator is a human acting for themselves; feeds the ground-truth flag.
	bool human_operator{ true };
	double numeraire{ 0.0 };
	bool exited{ false };
	Tick joined_tick{ -1 };
};

struct AccountView
{
	PseudoId id;
	Tokens balance;
	Materials materials;
	AuthStatus status{ AuthStatus::fresh };
	Tick last_auth_tick{ 0 };
	std::int64_t receipt_activity{ 0 };
	Tick lock_start{ 0 };
	Tokens earned_last_tick;
	std::vector<Asset> assets;
};

/// Public information available to a policy. Contains no ground-truth flags.
struct Observation
{
	Tick tick{ 0 };
	MechanismToggles rules;
	EconomyParams const * params{ nullptr };
	double spot_price{ 0.0 };
	double pool_numeraire{ 0.0 };
	Tokens pool_token;
	double dominance_index{ 0.0 };
	double numeraire{ 0.0 };
	bool exited{ false };
	std::vector<AccountView> accounts;
	ListingBook const * book{ nullptr };

	AccountView const * account (PseudoId const & id) const;
};

/// Reserved balance holder for tokens bought by exogenous speculators.
PseudoId speculator_account ();

struct EconomyState
{
	Tick tick{ 0 };
	IdentityRegistry registry;
	SeedAttestor attestor;
	AssetTable assets;
	LiquidityPool pool;
	ListingBook book;
	Balances balances;
	std::map<PseudoId, Account> accounts;
	std::map<AgentId, AgentRecord> agents;
	Tokens cumulative_minted;
	Tokens cumulative_burned;
	Tokens cumulative_emission;
	Materials materials_produced;
	Materials materials_consumed;
	AssetId next_asset_id{ 1 };
	/// Spot price of the pool as configured, before any trading.
	double launch_price{ 0.0 };
	std::uint64_t rng_seed{ 0 };

	explicit EconomyState (LiquidityPool pool_a) :
	pool (std::move (pool_a))
	{
	}
};

/**
 * Deterministic world and tick loop. Actions are applied in phases:
 * auth/registration, play and emission, market, degradation, repair.
 * Within a phase, actions run in agent-id order, then submission order.
 */
class Economy
{
public:
	Economy (EconomyParams params, MechanismToggles toggles, LiquidityPool pool, std::uint64_t seed);

	void add_agent (AgentId id, AgentKind kind, bool human_operator, double numeraire);

	std::vector<Event> step (std::vector<AgentAction> actions);

	/// PoPE emission credited to `worker`. Gated by liveness when identity is enforced.
	Tokens token_emission (PseudoId const & worker, std::int64_t activity);
	void token_burn (PseudoId const & payer, Tokens amount, std::string_view reason);
	/// S(t) = cumulative minted - cumulative burned.
	Tokens supply () const;
	/// pool token reserve + sum of balances == minted - burned, in exact ledger units.
	bool supply_identity_holds () const;
	/// Materials produced - consumed == held.
	bool material_conservation_holds () const;

	Observation observe (AgentId agent, double dominance_index) const;

	EconomyState const & state () const
	{
		return state_;
	}
	EconomyState & mutable_state ()
	{
		return state_;
	}
	EconomyParams const & params () const
	{
		return params_;
	}
	MechanismToggles const & toggles () const
	{
		return toggles_;
	}
	LivenessRule liveness () const
	{
		return { toggles_.identity_enforced, params_.grace_period };
	}
	AuthStatus status_of (PseudoId const & account) const;
	double utility_of (Asset const & asset) const;
	std::vector<Asset const *> assets_of (PseudoId const & account) const;

private:
	void apply (AgentAction const & act, std::vector<Event> & events);
	void emit (std::vector<Event> & events, std::optional<AgentId> agent, std::string type, std::string payload);
	void credit_emission (PseudoId const & account, Tokens amount);
	void harvest (std::vector<Event> & events);
	void degrade (std::vector<Event> & events);
	void touch (PseudoId const & account);
	Account & account_for (AgentAction const & act);

	EconomyParams params_;
	MechanismToggles toggles_;
	EconomyState state_;
	std::map<AssetId, std::int64_t> uses_;
	std::set<PseudoId> played_;
};
}
