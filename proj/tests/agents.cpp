#include "support.hpp"

#include <oge/agents.hpp>
#include <oge/scenarios.hpp>

#include <gtest/gtest.h>

using namespace oge;

namespace {
ScenarioConfig base_config (MechanismToggles toggles, Tick ticks)
{
	ScenarioConfig c;
	c.seed = 99;
	c.ticks = ticks;
	c.toggles = toggles;
	c.economy.grace_period = 100;
	c.economy.mint_policy = { 1, 0 };
	c.economy.mint_fee = 1.0;
	c.pool = { 100.0, 100.0, 0.003 };
	return c;
}

AgentGroup group (AgentPolicy policy, std::int64_t count = 1)
{
	return AgentGroup{ count, 0, std::move (policy) };
}

ScriptedStep at (Tick tick, std::string op, double amount = 0.0)
{
	ScriptedStep s;
	s.tick = tick;
	s.op = std::move (op);
	s.amount = amount;
	return s;
}

std::vector<AgentAction> actions_of (std::vector<AgentAction> const & all, AgentId agent)
{
	std::vector<AgentAction> out;
	for (auto const & a : all)
	{
		if (a.agent == agent)
		{
			out.push_back (a);
		}
	}
	return out;
}

std::size_t accounts_of (Economy const & economy, AgentId agent)
{
	std::size_t n = 0;
	for (auto const & [id, account] : economy.state ().accounts)
	{
		n += account.agent == agent;
	}
	return n;
}

template <typename T>
bool contains (std::vector<AgentAction> const & actions)
{
	return std::any_of (actions.begin (), actions.end (), [] (AgentAction const & a) { return std::holds_alternative<T> (a.kind); });
}

/// Observation holding one account for `agent` with the given status.
struct Scene
{
	EconomyParams params;
	ListingBook book;
	Observation obs;

	Scene (Agent const & agent, AuthStatus status, bool identity = true)
	{
		obs.tick = 20;
		obs.rules = MechanismToggles::all_on ();
		obs.rules.identity_enforced = identity;
		obs.params = &params;
		obs.book = &book;
		obs.spot_price = 1.0;
		AccountView view;
		view.id = derive_pseudo_id (agent.genuine_seeds ().front ());
		view.status = status;
		view.balance = Tokens::from_double (3);
		obs.accounts.push_back (view);
	}
};
}

TEST (agents, honest_authenticates_in_grace)
{
	Agent agent (1, HonestParams{}, 5);
	Scene scene (agent, AuthStatus::in_grace);
	Substream rng (5, 1, 20);
	auto actions = agent.decide (scene.obs, rng);
	ASSERT_TRUE (contains<action::Authenticate> (actions));
	auto const & auth = std::get<action::Authenticate> (actions.front ().kind);
	ASSERT_EQ (make_zk_poi_proof (agent.genuine_seeds ().front (), scene.obs.accounts[0].id, 20), auth.proof);
	ASSERT_TRUE (contains<action::Play> (actions));
}

TEST (agents, honest_fresh_skips_auth)
{
	Agent agent (1, HonestParams{}, 5);
	Scene scene (agent, AuthStatus::fresh);
	Substream rng (5, 1, 20);
	ASSERT_FALSE (contains<action::Authenticate> (agent.decide (scene.obs, rng)));
	Scene open (agent, AuthStatus::in_grace, false);
	ASSERT_FALSE (contains<action::Authenticate> (agent.decide (open.obs, rng)));
}

// Kept assets below half durability are repaired, buying the shortfall
TEST (agents, honest_repairs)
{
	Agent agent (1, HonestParams{}, 5);
	Scene scene (agent, AuthStatus::fresh);
	scene.params.material_price = 0.1;
	Asset sword;
	sword.asset_id = 4;
	sword.hash_origin = sword.current_owner = scene.obs.accounts[0].id;
	sword.base_utility = 100;
	sword.durability = 0.4;
	scene.obs.accounts[0].assets.push_back (sword);
	Substream rng (5, 1, 20);
	auto actions = agent.decide (scene.obs, rng);
	ASSERT_TRUE (contains<action::BuyMaterials> (actions));
	ASSERT_TRUE (contains<action::Repair> (actions));
	scene.obs.accounts[0].assets[0].durability = 0.6;
	ASSERT_FALSE (contains<action::Repair> (agent.decide (scene.obs, rng)));
}

// Churn exit after the window, and exit is absorbing
TEST (agents, honest_churn_absorbing)
{
	HonestParams p;
	p.churn_threshold = 1e9;
	p.churn_window = 4;
	auto c = base_config (MechanismToggles::all_on (), 30);
	c.agents.push_back (group (p));
	Simulation sim (c);
	Tick exit_tick = -1;
	while (!sim.done ())
	{
		sim.step ();
		auto mine = actions_of (sim.last_actions (), 1);
		if (contains<action::Exit> (mine))
		{
			ASSERT_EQ (-1, exit_tick);
			exit_tick = sim.economy ().state ().tick - 1;
		}
		else if (exit_tick >= 0)
		{
			ASSERT_TRUE (mine.empty ());
		}
	}
	ASSERT_EQ (4, exit_tick);
	ASSERT_EQ (0.0, sim.frames ().back ().retention_rate);
}

// A dominance reading above tolerance makes a player leave
TEST (agents, honest_p2w_exit)
{
	HonestParams p;
	p.p2w_tolerance = 1.5;
	Agent agent (1, p, 5);
	Scene scene (agent, AuthStatus::fresh);
	scene.obs.dominance_index = 1.6;
	Substream rng (5, 1, 20);
	auto actions = agent.decide (scene.obs, rng);
	ASSERT_EQ (2, actions.size ());
	ASSERT_TRUE (std::holds_alternative<action::SwapOut> (actions[0].kind));
	ASSERT_TRUE (std::holds_alternative<action::Exit> (actions[1].kind));
	ASSERT_TRUE (agent.exited ());
	ASSERT_TRUE (agent.decide (scene.obs, rng).empty ());
}

// One held seed and a target of 1000: exactly one registration succeeds under identity ON
TEST (agents, bot_farm_identity_gate)
{
	BotFarmParams p;
	p.target_accounts = 1000;
	p.seeds_held = 1;
	auto c = base_config (MechanismToggles::all_on (), 20);
	c.agents.push_back (group (p));
	Simulation sim (c);
	std::size_t registrations = 0;
	sim.run ([&] (std::vector<Event> const & events) {
		registrations += std::count_if (events.begin (), events.end (), [] (Event const & e) { return e.type == "register"; });
	});
	ASSERT_EQ (1, registrations);
	ASSERT_EQ (1, accounts_of (sim.economy (), 1));
}

TEST (agents, bot_farm_open_registration)
{
	BotFarmParams p;
	p.target_accounts = 1000;
	p.seeds_held = 1;
	auto c = base_config (MechanismToggles::all_off (), 3);
	c.agents.push_back (group (p));
	Simulation sim (c);
	sim.run ();
	ASSERT_EQ (1000, accounts_of (sim.economy (), 1));
	ASSERT_NEAR (1.0, sim.frames ().back ().bot_capture_share, 1e-12);
}

// Registered accounts per farm equal the distinct seeds held when identity is on
TEST (agents, sybil_bound)
{
	for (std::int64_t seeds : { 0, 1, 2, 3, 7 })
	{
		BotFarmParams p;
		p.target_accounts = 40;
		p.seeds_held = seeds;
		auto c = base_config (MechanismToggles::all_on (), 5);
		c.agents.push_back (group (p, 3));
		Simulation sim (c);
		sim.run ();
		for (AgentId farm = 1; farm <= 3; ++farm)
		{
			ASSERT_EQ (static_cast<std::size_t> (seeds), accounts_of (sim.economy (), farm)) << seeds;
		}
	}
}

// Farms sell every emission in the tick it is earned
TEST (agents, bot_farm_dumps)
{
	BotFarmParams p;
	p.target_accounts = 5;
	auto c = base_config (MechanismToggles::all_off (), 6);
	c.agents.push_back (group (p));
	Simulation sim (c);
	sim.run ();
	for (auto const & [id, account] : sim.economy ().state ().accounts)
	{
		ASSERT_EQ (Tokens{}, sim.economy ().state ().balances.at (id));
		ASSERT_GT (account.cumulative_emission.units, 0);
	}
}

// Accounts earning less than their running cost are abandoned
TEST (agents, bot_farm_abandons)
{
	BotFarmParams p;
	p.target_accounts = 4;
	p.op_cost_per_account = 1e6;
	auto c = base_config (MechanismToggles::all_off (), 6);
	c.agents.push_back (group (p));
	Simulation sim (c);
	sim.run ();
	ASSERT_EQ (4, sim.agents ()[0].abandoned ().size ());
	ASSERT_TRUE (actions_of (sim.last_actions (), 1).empty ());
}

// Own-seed scholars are human, leased ones are not; remittances reach the manager
TEST (agents, ring_modes)
{
	ManagerScholarParams leased;
	leased.scholar_count = 5;
	ManagerScholarParams own = leased;
	own.scholars_use_own_seeds = true;
	auto c = base_config (MechanismToggles::all_off (), 10);
	c.agents = { group (leased), group (own) };
	Simulation sim (c);
	std::size_t remits = 0;
	sim.run ([&] (std::vector<Event> const & events) {
		remits += std::count_if (events.begin (), events.end (), [] (Event const & e) { return e.type == "remit"; });
	});
	auto const & state = sim.economy ().state ();
	std::size_t human[3] = { 0, 0, 0 };
	for (auto const & [id, account] : state.accounts)
	{
		human[account.agent] += GroundTruthView::is_human (state.registry, id);
	}
	ASSERT_EQ (1, human[1]);
	ASSERT_EQ (6, human[2]);
	ASSERT_EQ (6, accounts_of (sim.economy (), 1));
	ASSERT_GT (remits, 0);
}

// Leased scholars cannot register under enforcement: they all present the manager's seed
TEST (agents, ring_leased_gated)
{
	ManagerScholarParams leased;
	leased.scholar_count = 5;
	auto c = base_config (MechanismToggles::all_on (), 3);
	c.agents = { group (leased) };
	Simulation sim (c);
	sim.run ();
	ASSERT_EQ (1, accounts_of (sim.economy (), 1));
}

// Whale buys a fleet, sees the price pumped then dumped, and exits once spot is at most half the peak
TEST (agents, whale_trailing_exit)
{
	auto c = base_config (MechanismToggles::all_on (), 20);
	c.economy.harvest_rate = 0.05;
	ScriptedParams seller;
	seller.steps = { at (0, "register"), at (0, "play"), at (0, "mint"), at (1, "list", 2.0) };
	seller.steps[1].activity = 10;
	seller.steps[3].asset_id = 1;
	ScriptedParams mover;
	mover.numeraire = 1000;
	mover.steps = { at (0, "register"), at (4, "swap_in", 300.0), at (10, "swap_out") };
	WhaleParams whale;
	whale.capital = 100;
	whale.fleet_target = 1;
	whale.exit_price = 0.6;
	c.agents = { group (seller), group (mover), group (whale) };
	Simulation sim (c);
	double peak = 0.0;
	Tick exit_tick = -1;
	while (!sim.done ())
	{
		auto spot = sim.economy ().state ().pool.spot_price ();
		auto whale_balance = sim.economy ().state ().balances.count (derive_pseudo_id (sim.agents ()[2].genuine_seeds ().front ()))
		? sim.economy ().state ().balances.at (derive_pseudo_id (sim.agents ()[2].genuine_seeds ().front ()))
		: Tokens{};
		auto tick = sim.economy ().state ().tick;
		if (tick >= 1 && exit_tick < 0)
		{
			peak = std::max (peak, spot);
		}
		auto const & events = sim.step ();
		auto mine = actions_of (sim.last_actions (), 3);
		if (contains<action::Exit> (mine))
		{
			exit_tick = tick;
			ASSERT_LE (spot, 0.5 * peak);
			std::vector<std::size_t> order;
			for (std::size_t i = 0; i < mine.size (); ++i)
			{
				if (std::holds_alternative<action::SwapOut> (mine[i].kind))
				{
					ASSERT_FALSE (std::get<action::SwapOut> (mine[i].kind).amount);
					order.push_back (i);
				}
				if (std::holds_alternative<action::Exit> (mine[i].kind))
				{
					order.push_back (i);
				}
			}
			ASSERT_EQ (2, order.size ());
			ASSERT_LT (order[0], order[1]);
			ASSERT_GT (whale_balance.units, 0);
			auto sold = std::find_if (events.begin (), events.end (), [] (Event const & e) { return e.agent == 3u && e.type == "swap_out"; });
			ASSERT_NE (events.end (), sold);
			// Harvest lands before the market phase, so the sale covers at least the opening balance and leaves nothing
			auto sold_tokens = Tokens::from_double (std::stod (sold->payload.substr (sold->payload.find ("tokens=") + 7)));
			ASSERT_GE (sold_tokens, whale_balance);
			ASSERT_EQ (Tokens{}, sim.economy ().state ().balances.at (derive_pseudo_id (sim.agents ()[2].genuine_seeds ().front ())));
		}
		if (exit_tick < 0 && tick > 1)
		{
			ASSERT_GT (spot, 0.6 * peak) << tick;
		}
	}
	ASSERT_EQ (11, exit_tick);
	ASSERT_TRUE (sim.agents ()[2].exited ());
	ASSERT_TRUE (sim.economy ().state ().agents.at (3).exited);
}

namespace {
ScenarioConfig mixed_roster (Tick ticks)
{
	auto c = base_config (MechanismToggles::all_on (), ticks);
	c.economy.harvest_rate = 0.01;
	c.economy.alpha = 0.01;
	c.economy.grace_period = 3;
	c.pool = { 2000.0, 2000.0, 0.003 };
	HonestParams honest;
	honest.join_capital = 10;
	honest.mint_for_sale = true;
	honest.max_listings = 3;
	honest.p2w_tolerance = 5.0;
	BotFarmParams farm;
	farm.target_accounts = 20;
	farm.seeds_held = 2;
	ManagerScholarParams ring;
	ring.scholar_count = 4;
	ring.scholars_use_own_seeds = true;
	ring.defect_prob_tethered = 0.2;
	WhaleParams whale;
	whale.capital = 100;
	whale.fleet_target = 5;
	whale.arrival = 5;
	c.agents = { group (honest, 6), group (farm), group (ring, 2), group (whale) };
	return c;
}
}

// Flipping every hidden human flag mid-run changes no decision
TEST (agents, information_firewall)
{
	Simulation a (mixed_roster (60));
	for (int t = 0; t < 15; ++t)
	{
		a.step ();
	}
	auto b = a;
	auto & registry = b.mutable_economy ().mutable_state ().registry;
	for (auto const & [id, record] : registry.records ())
	{
		GroundTruthView::set_human (registry, id, !GroundTruthView::is_human (registry, id));
	}
	ASSERT_NE (a.economy ().state ().registry.records ().size (), 0);
	while (!a.done ())
	{
		a.step ();
		b.step ();
		ASSERT_EQ (a.last_actions (), b.last_actions ());
	}
	ASSERT_NE (a.frames ().back ().bot_capture_share, b.frames ().back ().bot_capture_share);
}

// Dropping the last ring leaves every other ring's trace unchanged
TEST (agents, substream_independence)
{
	ManagerScholarParams ring;
	ring.scholar_count = 6;
	ring.scholars_use_own_seeds = true;
	ring.defect_prob_tethered = 0.1;
	auto full = base_config (MechanismToggles::all_on (), 40);
	full.agents = { group (ring, 4) };
	auto fewer = full;
	fewer.agents = { group (ring, 3) };
	Simulation a (full);
	Simulation b (fewer);
	bool any_defection_difference = false;
	while (!a.done ())
	{
		a.step ();
		b.step ();
		for (AgentId id = 1; id <= 3; ++id)
		{
			ASSERT_EQ (actions_of (a.last_actions (), id), actions_of (b.last_actions (), id));
		}
		auto remits = [] (std::vector<AgentAction> const & v) { return std::count_if (v.begin (), v.end (), [] (AgentAction const & x) { return std::holds_alternative<action::Remit> (x.kind); }); };
		any_defection_difference |= remits (actions_of (a.last_actions (), 1)) != remits (actions_of (a.last_actions (), 2));
	}
	ASSERT_TRUE (any_defection_difference);
}

// Draw i depends only on (seed, agent, tick, i)
TEST (agents, substream_pure)
{
	Substream a (1, 2, 3);
	Substream other (1, 9, 3);
	for (int i = 0; i < 10; ++i)
	{
		other ();
	}
	Substream b (1, 2, 3);
	for (int i = 0; i < 100; ++i)
	{
		ASSERT_EQ (a (), b ());
	}
	ASSERT_NE (Substream (1, 2, 3) (), Substream (1, 2, 4) ());
	ASSERT_NE (Substream (1, 2, 3) (), Substream (2, 2, 3) ());
}

// Single-slot caps a whale's active utility, so dominance under full IBAIM stays at or below the open-rules trace
TEST (agents, dominance_single_slot_cap)
{
	auto run = [] (bool single_slot) {
		auto c = base_config (MechanismToggles::all_on (), 40);
		c.toggles.single_slot = single_slot;
		c.economy.grace_period = 100;
		HonestParams honest;
		honest.join_capital = 20;
		honest.mint_for_sale = true;
		honest.max_listings = 4;
		WhaleParams whale;
		whale.capital = 200;
		whale.fleet_target = 20;
		whale.arrival = 12;
		c.pool = { 1000.0, 1000.0, 0.003 };
		c.agents = { group (honest, 10), group (whale) };
		Simulation sim (c);
		sim.run ();
		return sim.frames ();
	};
	auto capped = run (true);
	auto open = run (false);
	double capped_peak = 0.0;
	double open_peak = 0.0;
	for (std::size_t t = 0; t < capped.size (); ++t)
	{
		capped_peak = std::max (capped_peak, capped[t].dominance_index);
		open_peak = std::max (open_peak, open[t].dominance_index);
	}
	ASSERT_GT (open_peak, 1.0);
	ASSERT_LE (capped_peak, open_peak);
}
