#include <oge/agents.hpp>

#include <algorithm>
#include <cmath>
#include <map>

namespace oge {

AgentKind kind_of (AgentPolicy const & policy)
{
	switch (policy.index ())
	{
		case 0:
			return AgentKind::honest;
		case 1:
			return AgentKind::bot_farm;
		case 2:
			return AgentKind::manager_scholar;
		case 3:
			return AgentKind::whale;
		default:
			return AgentKind::scripted;
	}
}

Agent::Agent (AgentId id, AgentPolicy policy, std::uint64_t run_seed) :
id_ (id),
policy_ (std::move (policy)),
run_seed_ (run_seed)
{
	auto human = [&] (std::uint64_t index) { return make_seed (run_seed_, "human", id_, index); };
	if (auto const * farm = std::get_if<BotFarmParams> (&policy_))
	{
		for (std::int64_t i = 0; i < farm->seeds_held; ++i)
		{
			genuine_.push_back (human (static_cast<std::uint64_t> (i)));
		}
	}
	else if (auto const * ring = std::get_if<ManagerScholarParams> (&policy_))
	{
		genuine_.push_back (human (0));
		if (ring->scholars_use_own_seeds)
		{
			for (std::int64_t i = 0; i < ring->scholar_count; ++i)
			{
				genuine_.push_back (human (1 + static_cast<std::uint64_t> (i)));
			}
		}
	}
	else
	{
		genuine_.push_back (human (0));
	}
	for (auto const & seed : genuine_)
	{
		seed_by_account_.emplace (derive_pseudo_id (seed), seed);
	}
}

bool Agent::human_operator () const
{
	return !std::holds_alternative<BotFarmParams> (policy_);
}

double Agent::initial_numeraire () const
{
	return std::visit (
	[] (auto const & p) -> double {
		using T = std::decay_t<decltype (p)>;
		if constexpr (std::is_same_v<T, HonestParams>)
		{
			return p.join_capital;
		}
		else if constexpr (std::is_same_v<T, WhaleParams>)
		{
			return p.capital;
		}
		else if constexpr (std::is_same_v<T, ScriptedParams>)
		{
			return p.numeraire;
		}
		else
		{
			return 0.0;
		}
	},
	policy_);
}

BiometricSeed Agent::fabricated (std::uint64_t index) const
{
	return make_seed (run_seed_, "fabricated", id_, index);
}

BiometricSeed const * Agent::seed_for (PseudoId const & account) const
{
	auto it = seed_by_account_.find (account);
	return it == seed_by_account_.end () ? nullptr : &it->second;
}

void Agent::push (std::vector<AgentAction> & out, PseudoId const & account, ActionKind kind) const
{
	out.push_back (AgentAction{ id_, account, std::move (kind) });
}

void Agent::authenticate_if_due (std::vector<AgentAction> & out, Observation const & obs, AccountView const & account) const
{
	if (!obs.rules.identity_enforced || account.status == AuthStatus::fresh)
	{
		return;
	}
	if (auto const * seed = seed_for (account.id))
	{
		push (out, account.id, action::Authenticate{ make_zk_poi_proof (*seed, account.id, obs.tick) });
	}
}

std::vector<AgentAction> Agent::decide (Observation const & obs, Substream & rng)
{
	if (obs.exited && kind () != AgentKind::whale)
	{
		memory_.exited = true;
		return {};
	}
	return std::visit (
	[&] (auto const & p) -> std::vector<AgentAction> {
		using T = std::decay_t<decltype (p)>;
		if constexpr (std::is_same_v<T, HonestParams>)
		{
			return decide_honest (p, obs);
		}
		else if constexpr (std::is_same_v<T, BotFarmParams>)
		{
			return decide_bot_farm (p, obs);
		}
		else if constexpr (std::is_same_v<T, ManagerScholarParams>)
		{
			return decide_ring (p, obs, rng);
		}
		else if constexpr (std::is_same_v<T, WhaleParams>)
		{
			return decide_whale (p, obs);
		}
		else
		{
			return decide_scripted (p, obs);
		}
	},
	policy_);
}

namespace {
bool can_mint (Observation const & obs, AccountView const & account, std::int64_t pending_activity)
{
	auto const & policy = obs.params->mint_policy;
	return account.receipt_activity + pending_activity >= policy.min_activity && obs.tick - account.lock_start >= policy.min_lock;
}

bool is_listed (Observation const & obs, AssetId id)
{
	return obs.book->is_listed (id);
}

/// Cheapest offer in `class_id` from someone other than `buyer`.
std::optional<Listing> best_foreign_offer (Observation const & obs, ClassId class_id, PseudoId const & buyer)
{
	for (auto const & offer : obs.book->offers (class_id))
	{
		if (offer.seller != buyer)
		{
			return offer;
		}
	}
	return std::nullopt;
}
}

std::vector<AgentAction> Agent::decide_honest (HonestParams const & p, Observation const & obs)
{
	std::vector<AgentAction> out;
	if (memory_.exited || obs.tick < p.arrival)
	{
		return out;
	}
	auto const & seed = genuine_.front ();
	auto pid = derive_pseudo_id (seed);
	auto const * acc = obs.account (pid);
	if (acc == nullptr)
	{
		push (out, pid, action::Register{ seed, true });
		push (out, pid, action::Play{ p.effort_per_tick, p.skill });
		if (obs.numeraire > 0.0)
		{
			push (out, pid, action::SwapIn{ obs.numeraire });
		}
		return out;
	}

	double realized = acc->earned_last_tick.to_double () * obs.spot_price / static_cast<double> (std::max<std::int64_t> (1, p.effort_per_tick));
	memory_.below_threshold = realized < p.churn_threshold ? memory_.below_threshold + 1 : 0;
	if (memory_.below_threshold >= p.churn_window || obs.dominance_index > p.p2w_tolerance)
	{
		memory_.exited = true;
		push (out, pid, action::SwapOut{});
		push (out, pid, action::Exit{});
		return out;
	}

	authenticate_if_due (out, obs, *acc);
	push (out, pid, action::Play{ p.effort_per_tick, p.skill });

	auto const & params = *obs.params;
	auto fee = Tokens::from_double (params.mint_fee);
	auto budget = acc->balance;
	bool mint_ready = can_mint (obs, *acc, p.effort_per_tick);
	auto classes = static_cast<ClassId> (params.class_utility.size ());

	// Best unlisted asset per class is kept in play; the rest are surplus.
	std::map<ClassId, Asset const *> keep;
	std::int64_t listed = 0;
	for (auto const & asset : acc->assets)
	{
		if (is_listed (obs, asset.asset_id))
		{
			++listed;
			continue;
		}
		auto & slot = keep[asset.class_id];
		if (slot == nullptr || asset.durability > slot->durability)
		{
			slot = &asset;
		}
	}

	for (ClassId c = 0; c < classes; ++c)
	{
		if (keep.contains (c))
		{
			continue;
		}
		if (mint_ready && budget >= fee)
		{
			push (out, pid, action::Mint{ c });
			mint_ready = false;
			budget -= fee;
			continue;
		}
		auto offer = best_foreign_offer (obs, c, pid);
		if (offer && offer->ask_price.to_double () <= params.mint_fee * p.buy_markup && budget >= offer->ask_price)
		{
			push (out, pid, action::Buy{ c, offer->ask_price });
			budget -= offer->ask_price;
		}
	}
	if (p.mint_for_sale && mint_ready && budget >= fee && listed < p.max_listings && keep.size () == classes)
	{
		push (out, pid, action::Mint{ static_cast<ClassId> (obs.tick % classes) });
		budget -= fee;
	}

	std::vector<AssetId> active;
	auto materials = acc->materials;
	for (auto const & asset : acc->assets)
	{
		if (is_listed (obs, asset.asset_id))
		{
			continue;
		}
		if (keep.at (asset.class_id) != &asset)
		{
			if (listed < p.max_listings)
			{
				push (out, pid, action::List{ asset.asset_id, Tokens::from_double (params.mint_fee * p.list_markup) });
				++listed;
			}
			continue;
		}
		active.push_back (asset.asset_id);
		if (asset.durability < 0.5)
		{
			auto need = repair_need (asset.durability, params.repair_rate);
			if (materials < need)
			{
				auto shortfall = need - materials;
				auto cost = Tokens::from_double (shortfall.to_double () * params.material_price);
				if (budget >= cost && cost.units > 0)
				{
					push (out, pid, action::BuyMaterials{ shortfall });
					budget -= cost;
					materials += shortfall;
				}
			}
			auto quantity = std::min (need, materials);
			if (quantity.units > 0)
			{
				push (out, pid, action::Repair{ asset.asset_id, quantity });
				materials -= quantity;
			}
		}
	}
	push (out, pid, action::Activate{ active });

	// Keep enough for one mint and one half repair per class; sell the rest.
	auto reserve = Tokens::from_double (params.mint_fee + static_cast<double> (classes) * 0.5 / params.repair_rate * params.material_price);
	if (budget > reserve)
	{
		auto surplus = Tokens::from_double ((budget - reserve).to_double () * p.cashout_fraction);
		if (surplus.units > 0)
		{
			push (out, pid, action::SwapOut{ surplus });
		}
	}
	return out;
}

std::vector<AgentAction> Agent::decide_bot_farm (BotFarmParams const & p, Observation const & obs)
{
	std::vector<AgentAction> out;
	if (obs.tick < p.arrival)
	{
		return out;
	}
	if (!memory_.started)
	{
		memory_.started = true;
		for (std::int64_t i = 0; i < p.target_accounts; ++i)
		{
			auto index = static_cast<std::uint64_t> (i);
			// Under enforcement only attested seeds can register, so the farm cycles the few it holds.
			auto seed = obs.rules.identity_enforced && !genuine_.empty () ? genuine_[index % genuine_.size ()] : fabricated (index);
			auto pid = derive_pseudo_id (seed);
			push (out, pid, action::Register{ seed, false });
		}
		return out;
	}
	for (auto const & acc : obs.accounts)
	{
		if (memory_.abandoned.contains (acc.id))
		{
			continue;
		}
		if (memory_.played.contains (acc.id) && acc.earned_last_tick.to_double () * obs.spot_price < p.op_cost_per_account)
		{
			memory_.abandoned.insert (acc.id);
			push (out, acc.id, action::SwapOut{});
			continue;
		}
		authenticate_if_due (out, obs, acc);
		push (out, acc.id, action::Play{ p.effort_per_tick, 0.0 });
		push (out, acc.id, action::SwapOut{});
		memory_.played.insert (acc.id);
	}
	return out;
}

std::vector<AgentAction> Agent::decide_ring (ManagerScholarParams const & p, Observation const & obs, Substream & rng)
{
	std::vector<AgentAction> out;
	if (obs.tick < p.arrival)
	{
		return out;
	}
	auto const & manager_seed = genuine_.front ();
	auto manager = derive_pseudo_id (manager_seed);
	if (!memory_.started)
	{
		memory_.started = true;
		push (out, manager, action::Register{ manager_seed, true });
		for (std::int64_t i = 0; i < p.scholar_count; ++i)
		{
			auto index = static_cast<std::uint64_t> (i);
			if (p.scholars_use_own_seeds)
			{
				auto const & seed = genuine_[1 + index];
				push (out, derive_pseudo_id (seed), action::Register{ seed, true });
			}
			else
			{
				// Leased accounts ride on the manager's identity when it is enforced.
				auto seed = obs.rules.identity_enforced ? manager_seed : fabricated (index);
				push (out, derive_pseudo_id (seed), action::Register{ seed, false });
			}
		}
		return out;
	}
	auto const * manager_view = obs.account (manager);
	std::size_t scholar_index = 0;
	for (auto const & acc : obs.accounts)
	{
		if (acc.id == manager)
		{
			continue;
		}
		auto index = scholar_index++;
		authenticate_if_due (out, obs, acc);
		push (out, acc.id, action::Play{ p.effort_per_tick, p.skill });
		if (p.scholars_use_own_seeds && manager_view != nullptr && !memory_.defected.contains (index))
		{
			double chance = obs.rules.identity_enforced ? p.defect_prob_tethered : p.defect_prob;
			if (rng.uniform () < chance)
			{
				memory_.defected.insert (index);
			}
			else
			{
				// The balance was swapped out last tick; this tick's emission lands before the remit executes.
				auto share = Tokens::from_double (acc.earned_last_tick.to_double () * p.revenue_share);
				if (share.units > 0 && share <= acc.balance + acc.earned_last_tick)
				{
					push (out, acc.id, action::Remit{ manager, share });
				}
			}
		}
		push (out, acc.id, action::SwapOut{});
	}
	if (manager_view != nullptr)
	{
		authenticate_if_due (out, obs, *manager_view);
		push (out, manager, action::Play{ p.effort_per_tick, p.skill });
		std::vector<AssetId> fleet;
		for (auto const & asset : manager_view->assets)
		{
			fleet.push_back (asset.asset_id);
		}
		push (out, manager, action::Activate{ fleet });
		push (out, manager, action::SwapOut{});
	}
	return out;
}

std::vector<AgentAction> Agent::decide_whale (WhaleParams const & p, Observation const & obs)
{
	std::vector<AgentAction> out;
	if (obs.tick < p.arrival)
	{
		return out;
	}
	auto const & seed = genuine_.front ();
	auto pid = derive_pseudo_id (seed);
	auto const * acc = obs.account (pid);
	if (acc == nullptr)
	{
		push (out, pid, action::Register{ seed, true });
		return out;
	}
	if (memory_.whale_phase == WhalePhase::exited)
	{
		// Liquidation proceeds keep arriving as listings fill.
		if (acc->balance.units > 0)
		{
			push (out, pid, action::SwapOut{});
		}
		return out;
	}
	authenticate_if_due (out, obs, *acc);
	memory_.peak_seen = std::max (memory_.peak_seen, obs.spot_price);

	std::vector<AssetId> fleet;
	std::int64_t owned = 0;
	for (auto const & asset : acc->assets)
	{
		fleet.push_back (asset.asset_id);
		if (asset.class_id == p.fleet_class)
		{
			++owned;
		}
	}

	if (memory_.whale_phase == WhalePhase::idle && obs.spot_price >= p.entry_price)
	{
		memory_.whale_phase = WhalePhase::buying;
		memory_.peak_seen = obs.spot_price;
	}
	if (memory_.whale_phase == WhalePhase::buying)
	{
		auto const & params = *obs.params;
		auto cap = Tokens::from_double (params.mint_fee * p.max_ask_markup);
		// Pool fee and slippage margin on top of the spot estimate.
		double const margin = 1.25;
		auto purchasing_power = acc->balance + Tokens::from_double (obs.numeraire / (obs.spot_price * margin));
		std::vector<Listing> picks;
		Tokens cost;
		bool priced_out = false;
		auto want = std::min (p.fleet_target - owned, p.buys_per_tick);
		for (auto const & offer : obs.book->offers (p.fleet_class))
		{
			if (static_cast<std::int64_t> (picks.size ()) >= want)
			{
				break;
			}
			if (offer.seller == pid || offer.ask_price > cap)
			{
				continue;
			}
			if (cost + offer.ask_price > purchasing_power)
			{
				priced_out = picks.empty ();
				break;
			}
			cost += offer.ask_price;
			picks.push_back (offer);
		}
		if (!picks.empty ())
		{
			memory_.dry_ticks = 0;
			if (cost > acc->balance)
			{
				double numeraire = std::min (obs.numeraire, (cost - acc->balance).to_double () * obs.spot_price * margin);
				push (out, pid, action::SwapIn{ numeraire });
			}
			for (auto const & pick : picks)
			{
				push (out, pid, action::Buy{ p.fleet_class, pick.ask_price });
			}
		}
		else
		{
			++memory_.dry_ticks;
		}
		if (owned >= p.fleet_target || priced_out || (memory_.dry_ticks > p.patience && owned > 0))
		{
			memory_.whale_phase = WhalePhase::harvesting;
		}
		push (out, pid, action::Activate{ fleet });
		return out;
	}
	if (memory_.whale_phase == WhalePhase::harvesting)
	{
		if (obs.spot_price <= p.exit_price * memory_.peak_seen)
		{
			memory_.whale_phase = WhalePhase::exited;
			memory_.exited = true;
			push (out, pid, action::SwapOut{});
			for (auto id : fleet)
			{
				if (!is_listed (obs, id))
				{
					push (out, pid, action::List{ id, Tokens::from_double (obs.params->mint_fee) });
				}
			}
			push (out, pid, action::Exit{});
			return out;
		}
		push (out, pid, action::Activate{ fleet });
	}
	return out;
}

std::vector<AgentAction> Agent::decide_scripted (ScriptedParams const & p, Observation const & obs)
{
	std::vector<AgentAction> out;
	auto const & seed = genuine_.front ();
	auto pid = derive_pseudo_id (seed);
	for (auto const & step : p.steps)
	{
		if (step.tick != obs.tick)
		{
			continue;
		}
		if (step.op == "register")
		{
			push (out, pid, action::Register{ seed, true });
		}
		else if (step.op == "authenticate")
		{
			push (out, pid, action::Authenticate{ make_zk_poi_proof (seed, pid, obs.tick) });
		}
		else if (step.op == "play")
		{
			push (out, pid, action::Play{ step.activity, 0.0 });
		}
		else if (step.op == "mint")
		{
			push (out, pid, action::Mint{ step.class_id });
		}
		else if (step.op == "list")
		{
			push (out, pid, action::List{ step.asset_id, Tokens::from_double (step.amount) });
		}
		else if (step.op == "buy")
		{
			push (out, pid, action::Buy{ step.class_id, Tokens::from_double (step.amount) });
		}
		else if (step.op == "swap_in")
		{
			push (out, pid, action::SwapIn{ step.amount });
		}
		else if (step.op == "swap_out")
		{
			push (out, pid, action::SwapOut{});
		}
		else if (step.op == "activate")
		{
			std::vector<AssetId> ids;
			if (auto const * acc = obs.account (pid))
			{
				for (auto const & asset : acc->assets)
				{
					ids.push_back (asset.asset_id);
				}
			}
			push (out, pid, action::Activate{ ids });
		}
		else if (step.op == "exit")
		{
			memory_.exited = true;
			push (out, pid, action::Exit{});
		}
	}
	return out;
}
}
