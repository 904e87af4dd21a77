#pragma once

#include <oge/identity_registry.hpp>
#include <oge/types.hpp>

#include <map>
#include <set>
#include <span>
#include <vector>

namespace oge {

struct Asset
{
	AssetId asset_id{ 0 };
	ClassId class_id{ 0 };
	PseudoId hash_origin;
	PseudoId current_owner;
	double base_utility{ 0.0 };
	double durability{ 1.0 };
	std::uint32_t transfer_count{ 0 };
	Tick minted_tick{ 0 };
	bool active{ false };

	bool held_by_origin () const
	{
		return current_owner == hash_origin;
	}
};

using AssetTable = std::map<AssetId, Asset>;

struct PopeReceipt
{
	PseudoId worker;
	std::int64_t activity_ticks{ 0 };
	Tick time_lock_start{ 0 };
	double skill_score{ 0.0 };
};

struct MintPolicy
{
	std::int64_t min_activity{ 10 };
	Tick min_lock{ 10 };

	bool operator== (MintPolicy const &) const = default;
};

/// Liveness requirements applied by mint and material production.
struct LivenessRule
{
	bool enforced{ true };
	Tick grace_period{ 7 };
};

struct DegradationParams
{
	double alpha{ 0.0 };
	double beta{ 0.0 };
	bool supply_scaling{ false };
	/// Slope s in alpha' = alpha * (1 + s * S / S_ref).
	double supply_scale{ 1.0 };
	double supply_ref{ 100.0 };
};

/// Skill-weighted repair material yield per activity tick: floor + slope * skill.
struct YieldCurve
{
	double floor{ 0.1 };
	double slope{ 0.9 };

	double operator() (double skill) const
	{
		return floor + slope * skill;
	}

	bool operator== (YieldCurve const &) const = default;
};

struct RepairMaterial
{
	Materials quantity;
	PseudoId producer;
};

/// Mints a fresh asset for the receipt's worker after checking effort, lock and liveness.
Asset mint_pope (IdentityRegistry const & registry, PopeReceipt const & receipt, ClassId class_id, double base_utility,
MintPolicy const & policy, LivenessRule const & liveness, Tick tick, AssetId new_id);

/**
 * attribution x lapse x durability x base utility. Each factor is 1 when its
 * mechanism is switched off. `lapse_penalty` is the multiplier for a Lapsed owner.
 */
double effective_utility (Asset const & asset, AuthStatus owner_status, MechanismToggles const & mechanisms, double lapse_penalty = 0.5);

/// attribution_factor of the formula above.
inline constexpr double secondary_holder_factor = 0.5;

Asset transfer (IdentityRegistry const & registry, Asset asset, PseudoId const & new_owner);

/// alpha'dt + beta'dn before clamping.
double durability_loss (DegradationParams const & params, double delta_t, double delta_n, double circulating_supply);
Asset apply_degradation (Asset asset, double delta_t, double delta_n, DegradationParams const & params, double circulating_supply);

struct RepairResult
{
	Asset asset;
	RepairMaterial remaining;
	Materials consumed;
};

RepairResult repair (Asset asset, RepairMaterial materials, double rate);

/// Material units needed to bring `durability` back to 1 at `rate` per unit.
Materials repair_need (double durability, double rate);

RepairMaterial produce_repair_materials (IdentityRegistry const & registry, PopeReceipt const & receipt, YieldCurve const & curve,
LivenessRule const & liveness, Tick tick);

/**
 * With single-slot on, keeps one asset per class: highest effective utility,
 * lowest id on ties.
 */
std::set<AssetId> activate_set (std::span<Asset const> holdings, std::set<AssetId> const & requested, PseudoId const & account,
AuthStatus owner_status, MechanismToggles const & mechanisms, double lapse_penalty = 0.5);
}
