#include <oge/asset_engine.hpp>

#include <algorithm>
#include <cmath>

namespace oge {

namespace {
void require_live (IdentityRegistry const & registry, PseudoId const & worker, LivenessRule const & liveness, Tick tick)
{
	auto status = registry.auth_status (worker, tick, liveness.grace_period);
	if (liveness.enforced && status == AuthStatus::lapsed)
	{
		throw Error (Errc::lapsed_identity);
	}
}
}

Asset mint_pope (IdentityRegistry const & registry, PopeReceipt const & receipt, ClassId class_id, double base_utility,
MintPolicy const & policy, LivenessRule const & liveness, Tick tick, AssetId new_id)
{
	require_live (registry, receipt.worker, liveness, tick);
	if (receipt.activity_ticks < policy.min_activity)
	{
		throw Error (Errc::insufficient_effort);
	}
	if (tick - receipt.time_lock_start < policy.min_lock)
	{
		throw Error (Errc::time_lock_active);
	}
	Asset asset;
	asset.asset_id = new_id;
	asset.class_id = class_id;
	asset.hash_origin = receipt.worker;
	asset.current_owner = receipt.worker;
	asset.base_utility = base_utility;
	asset.durability = 1.0;
	asset.transfer_count = 0;
	asset.minted_tick = tick;
	return asset;
}

double effective_utility (Asset const & asset, AuthStatus owner_status, MechanismToggles const & mechanisms, double lapse_penalty)
{
	double attribution = (mechanisms.asymmetric_decay && !asset.held_by_origin ()) ? secondary_holder_factor : 1.0;
	double lapse = (mechanisms.identity_enforced && owner_status == AuthStatus::lapsed) ? lapse_penalty : 1.0;
	double wear = mechanisms.entropy_enabled ? asset.durability : 1.0;
	return attribution * lapse * wear * asset.base_utility;
}

Asset transfer (IdentityRegistry const & registry, Asset asset, PseudoId const & new_owner)
{
	if (new_owner == asset.current_owner)
	{
		throw Error (Errc::self_transfer);
	}
	if (!registry.contains (new_owner))
	{
		throw Error (Errc::unknown_identity);
	}
	asset.current_owner = new_owner;
	asset.transfer_count += 1;
	asset.active = false;
	return asset;
}

double durability_loss (DegradationParams const & params, double delta_t, double delta_n, double circulating_supply)
{
	double alpha = params.alpha;
	double beta = params.beta;
	if (params.supply_scaling)
	{
		double scale = 1.0 + params.supply_scale * circulating_supply / params.supply_ref;
		alpha *= scale;
		beta *= scale;
	}
	return alpha * delta_t + beta * delta_n;
}

Asset apply_degradation (Asset asset, double delta_t, double delta_n, DegradationParams const & params, double circulating_supply)
{
	auto loss = durability_loss (params, delta_t, delta_n, circulating_supply);
	asset.durability = std::clamp (asset.durability - loss, 0.0, 1.0);
	return asset;
}

Materials repair_need (double durability, double rate)
{
	if (durability >= 1.0)
	{
		return {};
	}
	// Absorb float noise from (1 - D) / rate before rounding up to whole units.
	double units = (1.0 - durability) / rate * static_cast<double> (Materials::scale);
	return Materials::from_units (static_cast<std::int64_t> (std::ceil (units - 1e-3)));
}

RepairResult repair (Asset asset, RepairMaterial materials, double rate)
{
	auto need = repair_need (asset.durability, rate);
	auto consumed = std::min (need, materials.quantity);
	if (consumed.units < 0)
	{
		consumed = {};
	}
	asset.durability = std::min (1.0, asset.durability + rate * consumed.to_double ());
	materials.quantity -= consumed;
	return { asset, materials, consumed };
}

RepairMaterial produce_repair_materials (IdentityRegistry const & registry, PopeReceipt const & receipt, YieldCurve const & curve,
LivenessRule const & liveness, Tick tick)
{
	require_live (registry, receipt.worker, liveness, tick);
	double skill = std::clamp (receipt.skill_score, 0.0, 1.0);
	auto quantity = Materials::from_double (curve (skill) * static_cast<double> (receipt.activity_ticks));
	return { quantity, receipt.worker };
}

std::set<AssetId> activate_set (std::span<Asset const> holdings, std::set<AssetId> const & requested, PseudoId const & account,
AuthStatus owner_status, MechanismToggles const & mechanisms, double lapse_penalty)
{
	std::map<AssetId, Asset const *> owned;
	for (auto const & asset : holdings)
	{
		if (asset.current_owner == account)
		{
			owned.emplace (asset.asset_id, &asset);
		}
	}
	for (auto id : requested)
	{
		if (!owned.contains (id))
		{
			throw Error (Errc::foreign_asset);
		}
	}
	if (!mechanisms.single_slot)
	{
		return requested;
	}
	// requested is ordered by id, so strict > keeps the lowest id on ties.
	std::map<ClassId, std::pair<double, AssetId>> best;
	for (auto id : requested)
	{
		auto const & asset = *owned.at (id);
		auto utility = effective_utility (asset, owner_status, mechanisms, lapse_penalty);
		auto it = best.find (asset.class_id);
		if (it == best.end () || utility > it->second.first)
		{
			best[asset.class_id] = { utility, id };
		}
	}
	std::set<AssetId> result;
	for (auto const & [cls, choice] : best)
	{
		result.insert (choice.second);
	}
	return result;
}
}
