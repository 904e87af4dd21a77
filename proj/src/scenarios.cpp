#include <oge/scenarios.hpp>

#include <oge_fixtures.inc>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace oge {

namespace {
using json = nlohmann::ordered_json;

[[noreturn]] void invalid (std::string const & field, std::string const & why)
{
	throw Error (Errc::validation_error, field + ": " + why);
}

/// Reads fields from one JSON object and rejects any key it was not asked for.
class Fields
{
public:
	Fields (json const & node, std::string path) :
	node_ (node),
	path_ (std::move (path))
	{
		if (!node_.is_object ())
		{
			invalid (path_.empty () ? "<root>" : path_, "expected an object");
		}
	}

	std::string field (std::string_view key) const
	{
		return path_.empty () ? std::string (key) : path_ + "." + std::string (key);
	}

	json const * find (std::string_view key)
	{
		auto it = node_.find (key);
		if (it == node_.end ())
		{
			return nullptr;
		}
		seen_.insert (std::string (key));
		return &*it;
	}

	void number (std::string_view key, double & out)
	{
		if (auto const * v = find (key))
		{
			if (!v->is_number ())
			{
				invalid (field (key), "expected a number");
			}
			out = v->get<double> ();
			if (!std::isfinite (out))
			{
				invalid (field (key), "must be finite");
			}
		}
	}

	/// A null value means "no limit".
	void limit (std::string_view key, double & out)
	{
		if (auto const * v = find (key))
		{
			if (v->is_null ())
			{
				out = std::numeric_limits<double>::infinity ();
				return;
			}
			if (!v->is_number ())
			{
				invalid (field (key), "expected a number or null");
			}
			out = v->get<double> ();
		}
	}

	template <typename Int>
	void integer (std::string_view key, Int & out)
	{
		if (auto const * v = find (key))
		{
			if (!v->is_number_integer ())
			{
				invalid (field (key), "expected an integer");
			}
			if constexpr (std::is_unsigned_v<Int>)
			{
				if (v->is_number_unsigned ())
				{
					out = static_cast<Int> (v->get<std::uint64_t> ());
					return;
				}
				if (v->get<std::int64_t> () < 0)
				{
					invalid (field (key), "must be >= 0");
				}
			}
			out = static_cast<Int> (v->get<std::int64_t> ());
		}
	}

	void boolean (std::string_view key, bool & out)
	{
		if (auto const * v = find (key))
		{
			if (!v->is_boolean ())
			{
				invalid (field (key), "expected true or false");
			}
			out = v->get<bool> ();
		}
	}

	void string (std::string_view key, std::string & out)
	{
		if (auto const * v = find (key))
		{
			if (!v->is_string ())
			{
				invalid (field (key), "expected a string");
			}
			out = v->get<std::string> ();
		}
	}

	void finish () const
	{
		for (auto const & [key, value] : node_.items ())
		{
			if (!seen_.contains (key))
			{
				invalid (field (key), "unknown key");
			}
		}
	}

private:
	json const & node_;
	std::string path_;
	std::set<std::string> seen_;
};

void require (bool ok, std::string const & field, char const * why)
{
	if (!ok)
	{
		invalid (field, why);
	}
}

void non_negative (Fields & f, std::string_view key, double value)
{
	require (value >= 0.0, f.field (key), "must be >= 0");
}

void unit_interval (Fields & f, std::string_view key, double value)
{
	require (value >= 0.0 && value <= 1.0, f.field (key), "must be in [0, 1]");
}

MechanismToggles read_toggles (json const & node, std::string const & path)
{
	MechanismToggles t;
	Fields f (node, path);
	f.boolean ("identity_enforced", t.identity_enforced);
	f.boolean ("asymmetric_decay", t.asymmetric_decay);
	f.boolean ("single_slot", t.single_slot);
	f.boolean ("entropy_enabled", t.entropy_enabled);
	f.boolean ("supply_scaled_entropy", t.supply_scaled_entropy);
	f.finish ();
	return t;
}

EconomyParams read_economy (json const & node, std::string const & path)
{
	EconomyParams e;
	Fields f (node, path);
	f.number ("emission_rate", e.emission_rate);
	non_negative (f, "emission_rate", e.emission_rate);
	f.number ("harvest_rate", e.harvest_rate);
	non_negative (f, "harvest_rate", e.harvest_rate);
	f.number ("alpha", e.alpha);
	non_negative (f, "alpha", e.alpha);
	f.number ("beta", e.beta);
	non_negative (f, "beta", e.beta);
	f.number ("supply_scale", e.supply_scale);
	non_negative (f, "supply_scale", e.supply_scale);
	f.number ("supply_ref", e.supply_ref);
	require (e.supply_ref > 0.0, f.field ("supply_ref"), "must be > 0");
	f.integer ("grace_period", e.grace_period);
	require (e.grace_period >= 0, f.field ("grace_period"), "must be >= 0");
	f.number ("lapse_penalty", e.lapse_penalty);
	unit_interval (f, "lapse_penalty", e.lapse_penalty);
	if (auto const * mp = f.find ("mint_policy"))
	{
		Fields m (*mp, f.field ("mint_policy"));
		m.integer ("min_activity", e.mint_policy.min_activity);
		require (e.mint_policy.min_activity >= 0, m.field ("min_activity"), "must be >= 0");
		m.integer ("min_lock", e.mint_policy.min_lock);
		require (e.mint_policy.min_lock >= 0, m.field ("min_lock"), "must be >= 0");
		m.finish ();
	}
	f.number ("mint_fee", e.mint_fee);
	non_negative (f, "mint_fee", e.mint_fee);
	if (auto const * cu = f.find ("class_utility"))
	{
		auto name = f.field ("class_utility");
		require (cu->is_array () && !cu->empty (), name, "expected a non-empty array");
		e.class_utility.clear ();
		for (std::size_t i = 0; i < cu->size (); ++i)
		{
			auto const & v = (*cu)[i];
			auto item = name + "[" + std::to_string (i) + "]";
			require (v.is_number () && v.get<double> () >= 0.0 && std::isfinite (v.get<double> ()), item, "must be a number >= 0");
			e.class_utility.push_back (v.get<double> ());
		}
	}
	f.number ("repair_rate", e.repair_rate);
	require (e.repair_rate > 0.0, f.field ("repair_rate"), "must be > 0");
	f.number ("material_price", e.material_price);
	non_negative (f, "material_price", e.material_price);
	if (auto const * yc = f.find ("yield_curve"))
	{
		Fields y (*yc, f.field ("yield_curve"));
		y.number ("floor", e.yield_curve.floor);
		non_negative (y, "floor", e.yield_curve.floor);
		y.number ("slope", e.yield_curve.slope);
		non_negative (y, "slope", e.yield_curve.slope);
		y.finish ();
	}
	f.number ("speculator_inflow", e.speculator_inflow);
	non_negative (f, "speculator_inflow", e.speculator_inflow);
	f.number ("speculator_confidence", e.speculator_confidence);
	unit_interval (f, "speculator_confidence", e.speculator_confidence);
	f.integer ("active_window", e.active_window);
	require (e.active_window >= 1, f.field ("active_window"), "must be >= 1");
	f.finish ();
	return e;
}

PoolConfig read_pool (json const & node, std::string const & path)
{
	PoolConfig p;
	Fields f (node, path);
	f.number ("numeraire", p.numeraire);
	require (p.numeraire > 0.0, f.field ("numeraire"), "must be > 0");
	f.number ("token", p.token);
	require (p.token >= 1e-6, f.field ("token"), "must be > 0");
	f.number ("fee_rate", p.fee_rate);
	require (p.fee_rate >= 0.0 && p.fee_rate < 1.0, f.field ("fee_rate"), "must be in [0, 1)");
	f.finish ();
	return p;
}

DetectorThresholds read_detector (json const & node, std::string const & path)
{
	DetectorThresholds d;
	Fields f (node, path);
	f.number ("price_drawdown", d.price_drawdown);
	unit_interval (f, "price_drawdown", d.price_drawdown);
	f.number ("liquidity_floor", d.liquidity_floor);
	unit_interval (f, "liquidity_floor", d.liquidity_floor);
	f.integer ("window", d.window);
	require (d.window >= 1, f.field ("window"), "must be >= 1");
	f.finish ();
	return d;
}

void read_arrival (Fields & f, Tick & arrival)
{
	f.integer ("arrival", arrival);
	require (arrival >= 0, f.field ("arrival"), "must be >= 0");
}

void read_effort (Fields & f, std::int64_t & effort)
{
	f.integer ("effort_per_tick", effort);
	require (effort >= 1, f.field ("effort_per_tick"), "must be >= 1");
}

HonestParams read_honest (Fields & f)
{
	HonestParams p;
	f.number ("skill", p.skill);
	unit_interval (f, "skill", p.skill);
	read_effort (f, p.effort_per_tick);
	f.number ("churn_threshold", p.churn_threshold);
	non_negative (f, "churn_threshold", p.churn_threshold);
	f.integer ("churn_window", p.churn_window);
	require (p.churn_window >= 1, f.field ("churn_window"), "must be >= 1");
	f.limit ("p2w_tolerance", p.p2w_tolerance);
	non_negative (f, "p2w_tolerance", p.p2w_tolerance);
	read_arrival (f, p.arrival);
	f.number ("join_capital", p.join_capital);
	non_negative (f, "join_capital", p.join_capital);
	f.boolean ("mint_for_sale", p.mint_for_sale);
	f.integer ("max_listings", p.max_listings);
	require (p.max_listings >= 0, f.field ("max_listings"), "must be >= 0");
	f.number ("list_markup", p.list_markup);
	non_negative (f, "list_markup", p.list_markup);
	f.number ("buy_markup", p.buy_markup);
	non_negative (f, "buy_markup", p.buy_markup);
	f.number ("cashout_fraction", p.cashout_fraction);
	unit_interval (f, "cashout_fraction", p.cashout_fraction);
	return p;
}

BotFarmParams read_bot_farm (Fields & f)
{
	BotFarmParams p;
	f.integer ("target_accounts", p.target_accounts);
	require (p.target_accounts >= 0, f.field ("target_accounts"), "must be >= 0");
	f.integer ("seeds_held", p.seeds_held);
	require (p.seeds_held >= 0, f.field ("seeds_held"), "must be >= 0");
	f.number ("op_cost_per_account", p.op_cost_per_account);
	non_negative (f, "op_cost_per_account", p.op_cost_per_account);
	read_effort (f, p.effort_per_tick);
	read_arrival (f, p.arrival);
	return p;
}

ManagerScholarParams read_ring (Fields & f)
{
	ManagerScholarParams p;
	f.integer ("scholar_count", p.scholar_count);
	require (p.scholar_count >= 0, f.field ("scholar_count"), "must be >= 0");
	f.number ("revenue_share", p.revenue_share);
	unit_interval (f, "revenue_share", p.revenue_share);
	f.boolean ("scholars_use_own_seeds", p.scholars_use_own_seeds);
	f.number ("defect_prob", p.defect_prob);
	unit_interval (f, "defect_prob", p.defect_prob);
	f.number ("defect_prob_tethered", p.defect_prob_tethered);
	unit_interval (f, "defect_prob_tethered", p.defect_prob_tethered);
	read_effort (f, p.effort_per_tick);
	f.number ("skill", p.skill);
	unit_interval (f, "skill", p.skill);
	read_arrival (f, p.arrival);
	return p;
}

WhaleParams read_whale (Fields & f)
{
	WhaleParams p;
	f.number ("capital", p.capital);
	non_negative (f, "capital", p.capital);
	f.number ("entry_price", p.entry_price);
	non_negative (f, "entry_price", p.entry_price);
	f.number ("exit_price", p.exit_price);
	unit_interval (f, "exit_price", p.exit_price);
	f.integer ("fleet_target", p.fleet_target);
	require (p.fleet_target >= 0, f.field ("fleet_target"), "must be >= 0");
	f.integer ("fleet_class", p.fleet_class);
	f.number ("max_ask_markup", p.max_ask_markup);
	non_negative (f, "max_ask_markup", p.max_ask_markup);
	f.integer ("buys_per_tick", p.buys_per_tick);
	require (p.buys_per_tick >= 1, f.field ("buys_per_tick"), "must be >= 1");
	f.integer ("patience", p.patience);
	require (p.patience >= 0, f.field ("patience"), "must be >= 0");
	read_arrival (f, p.arrival);
	return p;
}

std::set<std::string> const & scripted_ops ()
{
	static std::set<std::string> const ops{ "register", "authenticate", "play", "mint", "list", "buy", "swap_in", "swap_out", "activate", "exit" };
	return ops;
}

ScriptedParams read_scripted (Fields & f)
{
	ScriptedParams p;
	f.number ("numeraire", p.numeraire);
	non_negative (f, "numeraire", p.numeraire);
	if (auto const * steps = f.find ("steps"))
	{
		auto name = f.field ("steps");
		require (steps->is_array (), name, "expected an array");
		for (std::size_t i = 0; i < steps->size (); ++i)
		{
			Fields s ((*steps)[i], name + "[" + std::to_string (i) + "]");
			ScriptedStep step;
			s.integer ("tick", step.tick);
			require (step.tick >= 0, s.field ("tick"), "must be >= 0");
			s.string ("op", step.op);
			require (scripted_ops ().contains (step.op), s.field ("op"), "unknown operation");
			s.integer ("activity", step.activity);
			s.integer ("class_id", step.class_id);
			s.integer ("asset_id", step.asset_id);
			s.number ("amount", step.amount);
			s.finish ();
			p.steps.push_back (step);
		}
	}
	return p;
}

AgentGroup read_group (json const & node, std::string const & path)
{
	AgentGroup g;
	Fields f (node, path);
	std::string type;
	f.string ("type", type);
	f.integer ("count", g.count);
	require (g.count >= 0 && g.count <= 100000, f.field ("count"), "must be in [0, 100000]");
	f.integer ("arrival_step", g.arrival_step);
	require (g.arrival_step >= 0, f.field ("arrival_step"), "must be >= 0");
	if (type == "honest")
	{
		g.policy = read_honest (f);
	}
	else if (type == "bot_farm")
	{
		g.policy = read_bot_farm (f);
	}
	else if (type == "manager_scholar")
	{
		g.policy = read_ring (f);
	}
	else if (type == "whale")
	{
		g.policy = read_whale (f);
	}
	else if (type == "scripted")
	{
		g.policy = read_scripted (f);
	}
	else
	{
		invalid (f.field ("type"), "expected one of honest, bot_farm, manager_scholar, whale, scripted");
	}
	f.finish ();
	return g;
}

ScenarioConfig read_config (json const & root)
{
	ScenarioConfig c;
	Fields f (root, "");
	f.string ("name", c.name);
	f.integer ("seed", c.seed);
	f.integer ("ticks", c.ticks);
	require (c.ticks >= 1 && c.ticks <= 100000, "ticks", "must be in [1, 100000]");
	if (auto const * t = f.find ("toggles"))
	{
		c.toggles = read_toggles (*t, "toggles");
	}
	if (auto const * e = f.find ("economy"))
	{
		c.economy = read_economy (*e, "economy");
	}
	if (auto const * p = f.find ("pool"))
	{
		c.pool = read_pool (*p, "pool");
	}
	if (auto const * d = f.find ("detector"))
	{
		c.detector = read_detector (*d, "detector");
	}
	if (auto const * a = f.find ("agents"))
	{
		require (a->is_array (), "agents", "expected an array");
		for (std::size_t i = 0; i < a->size (); ++i)
		{
			c.agents.push_back (read_group ((*a)[i], "agents[" + std::to_string (i) + "]"));
		}
	}
	f.finish ();
	auto classes = c.economy.class_utility.size ();
	for (std::size_t i = 0; i < c.agents.size (); ++i)
	{
		if (auto const * w = std::get_if<WhaleParams> (&c.agents[i].policy))
		{
			require (w->fleet_class < classes, "agents[" + std::to_string (i) + "].fleet_class", "no such class");
		}
	}
	return c;
}

json limit_json (double value)
{
	return std::isfinite (value) ? json (value) : json (nullptr);
}

json write_policy (AgentPolicy const & policy)
{
	json j;
	j["type"] = std::string (to_string (kind_of (policy)));
	std::visit (
	[&] (auto const & p) {
		using T = std::decay_t<decltype (p)>;
		if constexpr (std::is_same_v<T, HonestParams>)
		{
			j["skill"] = p.skill;
			j["effort_per_tick"] = p.effort_per_tick;
			j["churn_threshold"] = p.churn_threshold;
			j["churn_window"] = p.churn_window;
			j["p2w_tolerance"] = limit_json (p.p2w_tolerance);
			j["arrival"] = p.arrival;
			j["join_capital"] = p.join_capital;
			j["mint_for_sale"] = p.mint_for_sale;
			j["max_listings"] = p.max_listings;
			j["list_markup"] = p.list_markup;
			j["buy_markup"] = p.buy_markup;
			j["cashout_fraction"] = p.cashout_fraction;
		}
		else if constexpr (std::is_same_v<T, BotFarmParams>)
		{
			j["target_accounts"] = p.target_accounts;
			j["seeds_held"] = p.seeds_held;
			j["op_cost_per_account"] = p.op_cost_per_account;
			j["effort_per_tick"] = p.effort_per_tick;
			j["arrival"] = p.arrival;
		}
		else if constexpr (std::is_same_v<T, ManagerScholarParams>)
		{
			j["scholar_count"] = p.scholar_count;
			j["revenue_share"] = p.revenue_share;
			j["scholars_use_own_seeds"] = p.scholars_use_own_seeds;
			j["defect_prob"] = p.defect_prob;
			j["defect_prob_tethered"] = p.defect_prob_tethered;
			j["effort_per_tick"] = p.effort_per_tick;
			j["skill"] = p.skill;
			j["arrival"] = p.arrival;
		}
		else if constexpr (std::is_same_v<T, WhaleParams>)
		{
			j["capital"] = p.capital;
			j["entry_price"] = p.entry_price;
			j["exit_price"] = p.exit_price;
			j["fleet_target"] = p.fleet_target;
			j["fleet_class"] = p.fleet_class;
			j["max_ask_markup"] = p.max_ask_markup;
			j["buys_per_tick"] = p.buys_per_tick;
			j["patience"] = p.patience;
			j["arrival"] = p.arrival;
		}
		else
		{
			j["numeraire"] = p.numeraire;
			json steps = json::array ();
			for (auto const & s : p.steps)
			{
				steps.push_back (json{ { "tick", s.tick }, { "op", s.op }, { "activity", s.activity }, { "class_id", s.class_id }, { "asset_id", s.asset_id }, { "amount", s.amount } });
			}
			j["steps"] = steps;
		}
	},
	policy);
	return j;
}

json write_config (ScenarioConfig const & c)
{
	json j;
	j["name"] = c.name;
	j["seed"] = c.seed;
	j["ticks"] = c.ticks;
	j["toggles"] = json{
		{ "identity_enforced", c.toggles.identity_enforced },
		{ "asymmetric_decay", c.toggles.asymmetric_decay },
		{ "single_slot", c.toggles.single_slot },
		{ "entropy_enabled", c.toggles.entropy_enabled },
		{ "supply_scaled_entropy", c.toggles.supply_scaled_entropy },
	};
	auto const & e = c.economy;
	j["economy"] = json{
		{ "emission_rate", e.emission_rate },
		{ "harvest_rate", e.harvest_rate },
		{ "alpha", e.alpha },
		{ "beta", e.beta },
		{ "supply_scale", e.supply_scale },
		{ "supply_ref", e.supply_ref },
		{ "grace_period", e.grace_period },
		{ "lapse_penalty", e.lapse_penalty },
		{ "mint_policy", json{ { "min_activity", e.mint_policy.min_activity }, { "min_lock", e.mint_policy.min_lock } } },
		{ "mint_fee", e.mint_fee },
		{ "class_utility", e.class_utility },
		{ "repair_rate", e.repair_rate },
		{ "material_price", e.material_price },
		{ "yield_curve", json{ { "floor", e.yield_curve.floor }, { "slope", e.yield_curve.slope } } },
		{ "speculator_inflow", e.speculator_inflow },
		{ "speculator_confidence", e.speculator_confidence },
		{ "active_window", e.active_window },
	};
	j["pool"] = json{ { "numeraire", c.pool.numeraire }, { "token", c.pool.token }, { "fee_rate", c.pool.fee_rate } };
	j["detector"] = json{ { "price_drawdown", c.detector.price_drawdown }, { "liquidity_floor", c.detector.liquidity_floor }, { "window", c.detector.window } };
	json agents = json::array ();
	for (auto const & g : c.agents)
	{
		auto node = write_policy (g.policy);
		node["count"] = g.count;
		node["arrival_step"] = g.arrival_step;
		agents.push_back (node);
	}
	j["agents"] = agents;
	return j;
}

AgentPolicy shift_arrival (AgentPolicy policy, Tick delay)
{
	std::visit (
	[&] (auto & p) {
		if constexpr (requires { p.arrival; })
		{
			p.arrival += delay;
		}
	},
	policy);
	return policy;
}

std::vector<std::pair<std::string, MechanismToggles>> const & variants ()
{
	static std::vector<std::pair<std::string, MechanismToggles>> const v{ { "baseline", MechanismToggles::all_off () }, { "ibaim", MechanismToggles::all_on () } };
	return v;
}
}

ScenarioConfig load_scenario (std::string_view document)
{
	json root;
	try
	{
		root = json::parse (document.begin (), document.end ());
	}
	catch (json::parse_error const & e)
	{
		throw Error (Errc::parse_error, "byte " + std::to_string (e.byte) + ": " + e.what ());
	}
	return read_config (root);
}

std::string serialize_scenario (ScenarioConfig const & config)
{
	return write_config (config).dump (2) + "\n";
}

std::vector<ScenarioConfig> builtin_scenarios ()
{
	std::vector<ScenarioConfig> out;
	for (auto const & fixture : fixtures::entries)
	{
		auto base = load_scenario (fixture.json);
		for (auto const & [suffix, toggles] : variants ())
		{
			auto config = base;
			config.name = std::string (fixture.family) + "." + suffix;
			config.toggles = toggles;
			out.push_back (config);
		}
	}
	std::sort (out.begin (), out.end (), [] (auto const & a, auto const & b) { return a.name < b.name; });
	return out;
}

std::vector<std::string> builtin_names ()
{
	std::vector<std::string> names;
	for (auto const & config : builtin_scenarios ())
	{
		names.push_back (config.name);
	}
	return names;
}

ScenarioConfig builtin_scenario (std::string_view name)
{
	std::string available;
	for (auto const & config : builtin_scenarios ())
	{
		if (config.name == name)
		{
			return config;
		}
		available += (available.empty () ? "" : ", ") + config.name;
	}
	throw Error (Errc::validation_error, "scenario: unknown name '" + std::string (name) + "'; available: " + available);
}

Simulation::Simulation (ScenarioConfig config) :
config_ (std::move (config)),
economy_ (config_.economy, config_.toggles, LiquidityPool (config_.pool.numeraire, Tokens::from_double (config_.pool.token), config_.pool.fee_rate), config_.seed)
{
	AgentId next = 1;
	for (auto const & group : config_.agents)
	{
		for (std::int64_t k = 0; k < group.count; ++k)
		{
			auto const & agent = agents_.emplace_back (next, shift_arrival (group.policy, group.arrival_step * k), config_.seed);
			economy_.add_agent (next, agent.kind (), agent.human_operator (), agent.initial_numeraire ());
			for (auto const & seed : agent.genuine_seeds ())
			{
				economy_.mutable_state ().attestor.add (seed);
			}
			++next;
		}
	}
}

std::vector<Event> const & Simulation::step ()
{
	auto tick = economy_.state ().tick;
	double dominance = frames_.empty () ? 0.0 : frames_.back ().dominance_index;
	last_actions_.clear ();
	for (auto & agent : agents_)
	{
		auto obs = economy_.observe (agent.id (), dominance);
		Substream rng (config_.seed, agent.id (), tick);
		auto actions = agent.decide (obs, rng);
		last_actions_.insert (last_actions_.end (), std::make_move_iterator (actions.begin ()), std::make_move_iterator (actions.end ()));
	}
	last_events_ = economy_.step (last_actions_);
	frames_.push_back (compute_frame (economy_));
	return last_events_;
}

void Simulation::run (std::function<void (std::vector<Event> const &)> const & on_events)
{
	while (!done ())
	{
		auto const & events = step ();
		if (on_events)
		{
			on_events (events);
		}
	}
}

bool Simulation::death_spiral () const
{
	std::vector<double> price;
	std::vector<double> liquidity;
	for (auto const & f : frames_)
	{
		price.push_back (f.spot_price);
		liquidity.push_back (f.pool_liquidity_numeraire);
	}
	return oge::death_spiral (price, liquidity, config_.detector);
}

std::vector<AblationCell> default_ablation_cells ()
{
	auto on = MechanismToggles::all_on ();
	std::vector<AblationCell> cells{ { "full_on", on }, { "full_off", MechanismToggles::all_off () } };
	auto drop = [&] (std::string name, bool MechanismToggles::*field) {
		auto t = on;
		t.*field = false;
		cells.push_back ({ std::move (name), t });
	};
	drop ("no_identity", &MechanismToggles::identity_enforced);
	drop ("no_asymmetric_decay", &MechanismToggles::asymmetric_decay);
	drop ("no_single_slot", &MechanismToggles::single_slot);
	drop ("no_entropy", &MechanismToggles::entropy_enabled);
	drop ("no_supply_scaled_entropy", &MechanismToggles::supply_scaled_entropy);
	return cells;
}

std::vector<CellReport> run_ablation (ScenarioConfig const & config, std::vector<AblationCell> const & cells, CellObserver const & on_tick)
{
	std::vector<CellReport> reports;
	for (auto const & cell : cells)
	{
		auto cell_config = config;
		cell_config.toggles = cell.toggles;
		Simulation sim (cell_config);
		while (!sim.done ())
		{
			auto const & events = sim.step ();
			if (on_tick)
			{
				on_tick (cell, sim, events);
			}
		}
		CellReport report;
		report.cell = cell;
		report.frames = sim.frames ();
		report.final_frame = report.frames.back ();
		report.death_spiral = sim.death_spiral ();
		double peak = 0.0;
		for (auto const & f : report.frames)
		{
			peak = std::max (peak, f.spot_price);
		}
		report.price_peak_ratio = peak > 0.0 ? report.final_frame.spot_price / peak : 0.0;
		reports.push_back (std::move (report));
	}
	return reports;
}

std::string to_summary_row (CellReport const & r)
{
	return r.cell.name + "," + (r.death_spiral ? "true" : "false") + "," + format_double (r.price_peak_ratio) + "," + format_double (r.final_frame.lambda_coeff) + "," + format_double (r.final_frame.retention_rate);
}
}
