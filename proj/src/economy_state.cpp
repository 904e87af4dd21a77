#include <oge/economy_state.hpp>

#include <algorithm>
#include <cmath>

namespace oge {

namespace {
int phase_of (ActionKind const & kind)
{
	return std::visit (
	[] (auto const & a) -> int {
		using T = std::decay_t<decltype (a)>;
		if constexpr (std::is_same_v<T, action::Register> || std::is_same_v<T, action::Authenticate>)
		{
			return 1;
		}
		else if constexpr (std::is_same_v<T, action::Play> || std::is_same_v<T, action::Mint>)
		{
			return 2;
		}
		else if constexpr (std::is_same_v<T, action::Repair>)
		{
			return 5;
		}
		else
		{
			return 3;
		}
	},
	kind);
}

template <typename... Ts>
struct overloaded : Ts...
{
	using Ts::operator()...;
};
template <typename... Ts>
overloaded (Ts...) -> overloaded<Ts...>;
}

std::string_view to_string (AgentKind kind)
{
	switch (kind)
	{
		case AgentKind::honest:
			return "honest";
		case AgentKind::bot_farm:
			return "bot_farm";
		case AgentKind::manager_scholar:
			return "manager_scholar";
		case AgentKind::whale:
			return "whale";
		case AgentKind::scripted:
			return "scripted";
	}
	return "unknown";
}

std::string_view action_name (ActionKind const & kind)
{
	return std::visit (overloaded{
	                   [] (action::Register const &) { return std::string_view ("register"); },
	                   [] (action::Authenticate const &) { return std::string_view ("authenticate"); },
	                   [] (action::Play const &) { return std::string_view ("play"); },
	                   [] (action::Mint const &) { return std::string_view ("mint"); },
	                   [] (action::List const &) { return std::string_view ("list"); },
	                   [] (action::Buy const &) { return std::string_view ("buy"); },
	                   [] (action::SwapIn const &) { return std::string_view ("swap_in"); },
	                   [] (action::SwapOut const &) { return std::string_view ("swap_out"); },
	                   [] (action::Remit const &) { return std::string_view ("remit"); },
	                   [] (action::BuyMaterials const &) { return std::string_view ("buy_materials"); },
	                   [] (action::Activate const &) { return std::string_view ("activate"); },
	                   [] (action::Repair const &) { return std::string_view ("repair"); },
	                   [] (action::Exit const &) { return std::string_view ("exit"); },
	                   },
	kind);
}

AccountView const * Observation::account (PseudoId const & id) const
{
	for (auto const & view : accounts)
	{
		if (view.id == id)
		{
			return &view;
		}
	}
	return nullptr;
}

PseudoId speculator_account ()
{
	return PseudoId{};
}

Economy::Economy (EconomyParams params, MechanismToggles toggles, LiquidityPool pool, std::uint64_t seed) :
params_ (std::move (params)),
toggles_ (toggles),
state_ (std::move (pool))
{
	state_.rng_seed = seed;
	state_.launch_price = state_.pool.spot_price ();
	// The pool's opening token reserve is the genesis issuance
	state_.cumulative_minted = state_.pool.reserve_token ();
	state_.balances[speculator_account ()] = Tokens{};
}

void Economy::add_agent (AgentId id, AgentKind kind, bool human_operator, double numeraire)
{
	AgentRecord record;
	record.kind = kind;
	record.human_operator = human_operator;
	record.numeraire = numeraire;
	state_.agents[id] = record;
}

AuthStatus Economy::status_of (PseudoId const & account) const
{
	return state_.registry.auth_status (account, state_.tick, params_.grace_period);
}

double Economy::utility_of (Asset const & asset) const
{
	return effective_utility (asset, status_of (asset.current_owner), toggles_, params_.lapse_penalty);
}

std::vector<Asset const *> Economy::assets_of (PseudoId const & account) const
{
	std::vector<Asset const *> out;
	for (auto const & [id, asset] : state_.assets)
	{
		if (asset.current_owner == account)
		{
			out.push_back (&asset);
		}
	}
	return out;
}

Tokens Economy::supply () const
{
	return state_.cumulative_minted - state_.cumulative_burned;
}

bool Economy::supply_identity_holds () const
{
	Tokens held = state_.pool.reserve_token ();
	for (auto const & [id, balance] : state_.balances)
	{
		held += balance;
	}
	return held == supply ();
}

bool Economy::material_conservation_holds () const
{
	Materials held;
	for (auto const & [id, account] : state_.accounts)
	{
		held += account.materials;
	}
	return state_.materials_produced - state_.materials_consumed == held;
}

void Economy::emit (std::vector<Event> & events, std::optional<AgentId> agent, std::string type, std::string payload)
{
	events.push_back (Event{ state_.tick, agent, std::move (type), std::move (payload) });
}

void Economy::touch (PseudoId const & account)
{
	auto it = state_.accounts.find (account);
	if (it != state_.accounts.end ())
	{
		it->second.last_active = state_.tick;
	}
}

void Economy::credit_emission (PseudoId const & account, Tokens amount)
{
	state_.balances[account] += amount;
	state_.cumulative_minted += amount;
	state_.cumulative_emission += amount;
	auto & acc = state_.accounts.at (account);
	acc.earned_this_tick += amount;
	acc.cumulative_emission += amount;
}

Tokens Economy::token_emission (PseudoId const & worker, std::int64_t activity)
{
	if (!state_.registry.contains (worker))
	{
		throw Error (Errc::unknown_identity);
	}
	if (toggles_.identity_enforced && status_of (worker) == AuthStatus::lapsed)
	{
		throw Error (Errc::lapsed_identity);
	}
	auto minted = Tokens::from_double (params_.emission_rate * static_cast<double> (activity));
	credit_emission (worker, minted);
	return minted;
}

void Economy::token_burn (PseudoId const & payer, Tokens amount, std::string_view)
{
	auto & balance = state_.balances[payer];
	if (balance < amount)
	{
		throw Error (Errc::insufficient_balance);
	}
	balance -= amount;
	state_.cumulative_burned += amount;
}

Account & Economy::account_for (AgentAction const & act)
{
	auto it = state_.accounts.find (act.account);
	if (it == state_.accounts.end ())
	{
		throw Error (Errc::unknown_identity);
	}
	if (it->second.agent != act.agent)
	{
		throw Error (Errc::not_owner);
	}
	return it->second;
}

void Economy::apply (AgentAction const & act, std::vector<Event> & events)
{
	auto tick = state_.tick;
	auto & agent = state_.agents.at (act.agent);
	auto const who = act.agent;
	std::visit (
	overloaded{
	[&] (action::Register const & a) {
		if (toggles_.identity_enforced && !state_.attestor.attests (a.seed))
		{
			throw Error (Errc::unattested_seed);
		}
		auto id = state_.registry.register_identity (a.seed, tick);
		GroundTruthView::set_human (state_.registry, id, agent.human_operator && a.own_seed);
		Account account;
		account.agent = who;
		account.receipt.worker = id;
		account.receipt.time_lock_start = tick;
		account.last_active = tick;
		if (agent.joined_tick < 0)
		{
			agent.joined_tick = tick;
			account.primary = true;
		}
		state_.accounts.emplace (id, account);
		state_.balances[id] = Tokens{};
		emit (events, who, "register", "account=" + id.short_hex ());
	},
	[&] (action::Authenticate const & a) {
		account_for (act);
		if (!state_.registry.verify_zk_poi (act.account, a.proof, tick))
		{
			throw Error (Errc::invalid_proof);
		}
		state_.registry.record_liveness (act.account, tick);
		touch (act.account);
		emit (events, who, "authenticate", "account=" + act.account.short_hex ());
	},
	[&] (action::Play const & a) {
		auto & account = account_for (act);
		if (a.activity <= 0)
		{
			throw Error (Errc::non_positive_amount);
		}
		auto minted = token_emission (act.account, a.activity);
		PopeReceipt work{ act.account, a.activity, tick, a.skill };
		auto material = produce_repair_materials (state_.registry, work, params_.yield_curve, liveness (), tick);
		account.materials += material.quantity;
		state_.materials_produced += material.quantity;
		account.receipt.activity_ticks += a.activity;
		account.receipt.skill_score = a.skill;
		played_.insert (act.account);
		touch (act.account);
		emit (events, who, "emit", "account=" + act.account.short_hex () + " amount=" + minted.to_string () + " materials=" + material.quantity.to_string ());
	},
	[&] (action::Mint const & a) {
		auto & account = account_for (act);
		if (a.class_id >= params_.class_utility.size ())
		{
			throw Error (Errc::validation_error, "class_id");
		}
		auto fee = Tokens::from_double (params_.mint_fee);
		if (state_.balances[act.account] < fee)
		{
			throw Error (Errc::insufficient_balance);
		}
		auto asset = mint_pope (state_.registry, account.receipt, a.class_id, params_.class_utility[a.class_id], params_.mint_policy,
		liveness (), tick, state_.next_asset_id);
		token_burn (act.account, fee, "mint_fee");
		++state_.next_asset_id;
		account.receipt.activity_ticks = 0;
		account.receipt.time_lock_start = tick;
		state_.assets.emplace (asset.asset_id, asset);
		touch (act.account);
		emit (events, who, "mint",
		"account=" + act.account.short_hex () + " asset=" + std::to_string (asset.asset_id) + " class=" + std::to_string (a.class_id) + " fee=" + fee.to_string ());
	},
	[&] (action::List const & a) {
		account_for (act);
		auto it = state_.assets.find (a.asset_id);
		if (it == state_.assets.end ())
		{
			throw Error (Errc::unknown_asset);
		}
		state_.book.list_asset (it->second, act.account, a.price, tick);
		touch (act.account);
		emit (events, who, "list", "asset=" + std::to_string (a.asset_id) + " price=" + a.price.to_string ());
	},
	[&] (action::Buy const & a) {
		account_for (act);
		TradeContext context{ state_.registry, toggles_, params_.grace_period, params_.lapse_penalty };
		auto trade = buy_asset (state_.book, state_.assets, state_.balances, context, act.account, a.class_id, a.max_price, tick);
		touch (act.account);
		if (!trade)
		{
			emit (events, who, "no_match", "class=" + std::to_string (a.class_id) + " max=" + a.max_price.to_string ());
			return;
		}
		emit (events, who, "trade",
		"asset=" + std::to_string (trade->asset_id) + " seller=" + trade->seller.short_hex () + " buyer=" + trade->buyer.short_hex () + " price=" + trade->price.to_string () + " u_before=" + format_double (trade->utility_before) + " u_after=" + format_double (trade->utility_after));
	},
	[&] (action::SwapIn const & a) {
		account_for (act);
		if (!(a.numeraire > 0.0))
		{
			throw Error (Errc::non_positive_amount);
		}
		if (agent.numeraire < a.numeraire)
		{
			throw Error (Errc::insufficient_balance);
		}
		auto fill = state_.pool.swap_numeraire_for_token (a.numeraire);
		agent.numeraire -= fill.numeraire_spent;
		state_.balances[act.account] += fill.tokens_out;
		touch (act.account);
		emit (events, who, "swap_in", "numeraire=" + format_double (fill.numeraire_spent) + " tokens=" + fill.tokens_out.to_string ());
	},
	[&] (action::SwapOut const & a) {
		account_for (act);
		auto & balance = state_.balances[act.account];
		auto amount = a.amount.value_or (balance);
		if (!a.amount && amount.units == 0)
		{
			return;
		}
		if (amount.units <= 0)
		{
			throw Error (Errc::non_positive_amount);
		}
		if (balance < amount)
		{
			throw Error (Errc::insufficient_balance);
		}
		auto out = state_.pool.swap_token_for_numeraire (amount);
		balance -= amount;
		agent.numeraire += out;
		touch (act.account);
		emit (events, who, "swap_out", "tokens=" + amount.to_string () + " numeraire=" + format_double (out));
	},
	[&] (action::Remit const & a) {
		account_for (act);
		if (a.amount.units <= 0)
		{
			throw Error (Errc::non_positive_amount);
		}
		if (!state_.accounts.contains (a.to))
		{
			throw Error (Errc::unknown_identity);
		}
		auto & balance = state_.balances[act.account];
		if (balance < a.amount)
		{
			throw Error (Errc::insufficient_balance);
		}
		balance -= a.amount;
		state_.balances[a.to] += a.amount;
		touch (act.account);
		emit (events, who, "remit", "to=" + a.to.short_hex () + " amount=" + a.amount.to_string ());
	},
	[&] (action::BuyMaterials const & a) {
		auto & account = account_for (act);
		if (a.quantity.units <= 0)
		{
			throw Error (Errc::non_positive_amount);
		}
		auto cost = Tokens::from_double (a.quantity.to_double () * params_.material_price);
		token_burn (act.account, cost, "repair_materials");
		account.materials += a.quantity;
		state_.materials_produced += a.quantity;
		touch (act.account);
		emit (events, who, "buy_materials", "quantity=" + a.quantity.to_string () + " cost=" + cost.to_string ());
	},
	[&] (action::Activate const & a) {
		account_for (act);
		if (agent.exited)
		{
			return;
		}
		std::vector<Asset> holdings;
		for (auto const & [id, asset] : state_.assets)
		{
			if (asset.current_owner == act.account)
			{
				holdings.push_back (asset);
			}
		}
		std::set<AssetId> requested (a.assets.begin (), a.assets.end ());
		auto chosen = activate_set (holdings, requested, act.account, status_of (act.account), toggles_, params_.lapse_penalty);
		for (auto const & held : holdings)
		{
			state_.assets.at (held.asset_id).active = chosen.contains (held.asset_id);
		}
		touch (act.account);
	},
	[&] (action::Repair const & a) {
		auto & account = account_for (act);
		auto it = state_.assets.find (a.asset_id);
		if (it == state_.assets.end ())
		{
			throw Error (Errc::unknown_asset);
		}
		if (it->second.current_owner != act.account)
		{
			throw Error (Errc::not_owner);
		}
		auto available = std::min (a.quantity, account.materials);
		if (available.units <= 0)
		{
			throw Error (Errc::insufficient_materials);
		}
		auto result = repair (it->second, RepairMaterial{ available, act.account }, params_.repair_rate);
		it->second = result.asset;
		account.materials -= result.consumed;
		state_.materials_consumed += result.consumed;
		touch (act.account);
		emit (events, who, "repair", "asset=" + std::to_string (a.asset_id) + " consumed=" + result.consumed.to_string () + " d=" + format_double (result.asset.durability));
	},
	[&] (action::Exit const &) {
		if (agent.exited)
		{
			return;
		}
		agent.exited = true;
		for (auto & [id, asset] : state_.assets)
		{
			auto owner = state_.accounts.find (asset.current_owner);
			if (owner != state_.accounts.end () && owner->second.agent == who)
			{
				asset.active = false;
			}
		}
		emit (events, who, "exit", "");
	},
	},
	act.kind);
}

void Economy::harvest (std::vector<Event> & events)
{
	if (!(params_.harvest_rate > 0.0))
	{
		return;
	}
	for (auto const & [id, asset] : state_.assets)
	{
		if (!asset.active)
		{
			continue;
		}
		auto const & owner = state_.accounts.at (asset.current_owner);
		if (state_.agents.at (owner.agent).exited)
		{
			continue;
		}
		auto amount = Tokens::from_double (params_.harvest_rate * utility_of (asset));
		uses_[id] = 1;
		touch (asset.current_owner);
		if (amount.units <= 0)
		{
			continue;
		}
		credit_emission (asset.current_owner, amount);
		emit (events, owner.agent, "harvest", "asset=" + std::to_string (id) + " amount=" + amount.to_string ());
	}
}

void Economy::degrade (std::vector<Event> & events)
{
	if (!toggles_.entropy_enabled)
	{
		return;
	}
	DegradationParams params{ params_.alpha, params_.beta, toggles_.supply_scaled_entropy, params_.supply_scale, params_.supply_ref };
	auto circulating = static_cast<double> (state_.assets.size ());
	std::vector<AssetId> retired;
	for (auto & [id, asset] : state_.assets)
	{
		auto used = uses_.contains (id) ? 1.0 : 0.0;
		asset = apply_degradation (asset, 1.0, used, params, circulating);
		auto agent = state_.accounts.at (asset.current_owner).agent;
		emit (events, agent, "degrade",
		"asset=" + std::to_string (id) + " owner=" + asset.current_owner.short_hex () + " d=" + format_double (asset.durability) + " u_eff=" + format_double (utility_of (asset)));
		if (asset.durability <= 0.0)
		{
			retired.push_back (id);
		}
	}
	for (auto id : retired)
	{
		auto agent = state_.accounts.at (state_.assets.at (id).current_owner).agent;
		state_.book.cancel (id);
		state_.assets.erase (id);
		emit (events, agent, "retire", "asset=" + std::to_string (id));
	}
}

std::vector<Event> Economy::step (std::vector<AgentAction> actions)
{
	std::stable_sort (actions.begin (), actions.end (), [] (auto const & a, auto const & b) { return a.agent < b.agent; });
	std::vector<Event> events;
	auto run_phase = [&] (int phase) {
		for (auto const & act : actions)
		{
			if (phase_of (act.kind) != phase)
			{
				continue;
			}
			try
			{
				apply (act, events);
			}
			catch (Error const & e)
			{
				emit (events, act.agent, "error", std::string ("action=") + std::string (action_name (act.kind)) + " code=" + std::string (to_string (e.code ())));
			}
		}
	};
	run_phase (1);
	run_phase (2);
	for (auto const & [id, asset] : state_.assets)
	{
		if (asset.active && played_.contains (asset.current_owner))
		{
			uses_[id] = 1;
		}
	}
	harvest (events);
	if (params_.speculator_inflow > 0.0 && state_.pool.spot_price () >= params_.speculator_confidence * state_.launch_price)
	{
		auto fill = state_.pool.swap_numeraire_for_token (params_.speculator_inflow);
		state_.balances[speculator_account ()] += fill.tokens_out;
		emit (events, std::nullopt, "speculator_inflow", "numeraire=" + format_double (fill.numeraire_spent) + " tokens=" + fill.tokens_out.to_string ());
	}
	run_phase (3);
	degrade (events);
	run_phase (5);
	for (auto & [id, account] : state_.accounts)
	{
		account.earned_last_tick = account.earned_this_tick;
		account.earned_this_tick = Tokens{};
	}
	uses_.clear ();
	played_.clear ();
	++state_.tick;
	return events;
}

Observation Economy::observe (AgentId agent, double dominance_index) const
{
	Observation obs;
	obs.tick = state_.tick;
	obs.rules = toggles_;
	obs.params = &params_;
	obs.spot_price = state_.pool.spot_price ();
	obs.pool_numeraire = state_.pool.reserve_numeraire ();
	obs.pool_token = state_.pool.reserve_token ();
	obs.dominance_index = dominance_index;
	auto const & record = state_.agents.at (agent);
	obs.numeraire = record.numeraire;
	obs.exited = record.exited;
	obs.book = &state_.book;
	for (auto const & [id, account] : state_.accounts)
	{
		if (account.agent != agent)
		{
			continue;
		}
		AccountView view;
		view.id = id;
		view.balance = state_.balances.at (id);
		view.materials = account.materials;
		view.status = status_of (id);
		view.last_auth_tick = state_.registry.at (id).last_auth_tick;
		view.receipt_activity = account.receipt.activity_ticks;
		view.lock_start = account.receipt.time_lock_start;
		view.earned_last_tick = account.earned_last_tick;
		obs.accounts.push_back (std::move (view));
	}
	if (!obs.accounts.empty ())
	{
		for (auto const & [id, asset] : state_.assets)
		{
			for (auto & view : obs.accounts)
			{
				if (asset.current_owner == view.id)
				{
					view.assets.push_back (asset);
					break;
				}
			}
		}
	}
	return obs;
}
}
