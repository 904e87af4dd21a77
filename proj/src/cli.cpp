#include <oge/cli.hpp>
#include <oge/hash.hpp>
#include <oge/rng.hpp>
#include <oge/scenarios.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#ifndef OGE_VERSION
#define OGE_VERSION "0.0.0"
#endif

namespace oge {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void write_atomic (fs::path const & path, std::string const & contents)
{
	auto tmp = path;
	tmp += ".tmp";
	{
		std::ofstream file (tmp, std::ios::binary | std::ios::trunc);
		file << contents;
		file.flush ();
		if (!file)
		{
			throw Error (Errc::io_error, "cannot write " + tmp.string ());
		}
	}
	std::error_code ec;
	fs::rename (tmp, path, ec);
	if (ec)
	{
		throw Error (Errc::io_error, "cannot rename " + tmp.string () + ": " + ec.message ());
	}
}

namespace {

struct Sources
{
	std::string scenario;
	std::string config_path;
	std::optional<std::uint64_t> seed;
	std::optional<Tick> ticks;
	std::string out;
};

std::string read_file (fs::path const & path)
{
	std::ifstream file (path, std::ios::binary);
	if (!file)
	{
		throw Error (Errc::io_error, "cannot read " + path.string ());
	}
	std::ostringstream buffer;
	buffer << file.rdbuf ();
	return buffer.str ();
}

/// Resolved config plus the flag overrides applied on top of it.
std::pair<ScenarioConfig, json> resolve (Sources const & s)
{
	auto config = s.scenario.empty () ? load_scenario (read_file (s.config_path)) : builtin_scenario (s.scenario);
	json overrides = json::object ();
	if (s.seed)
	{
		config.seed = *s.seed;
		overrides["seed"] = *s.seed;
	}
	if (s.ticks)
	{
		if (*s.ticks < 1 || *s.ticks > 100000)
		{
			throw Error (Errc::validation_error, "ticks: must be in [1, 100000]");
		}
		config.ticks = *s.ticks;
		overrides["ticks"] = *s.ticks;
	}
	return { config, overrides };
}

std::string meta_document (ScenarioConfig const & config, json const & overrides)
{
	json meta;
	meta["artifact_version"] = OGE_VERSION;
	meta["hash_function"] = std::string (hash_function_id);
	meta["rng"] = std::string (rng_id);
	meta["seed"] = config.seed;
	meta["overrides"] = overrides;
	meta["config"] = json::parse (serialize_scenario (config));
	return meta.dump (2) + "\n";
}

void append_events (std::ostream & out, std::vector<Event> const & events)
{
	for (auto const & e : events)
	{
		out << e.tick << ',';
		if (e.agent)
		{
			out << *e.agent;
		}
		out << ',' << e.type << ',' << e.payload << '\n';
	}
}

/// Streams one run's outputs into `dir`; files appear under their final names only when complete.
class RunWriter
{
public:
	explicit RunWriter (fs::path dir) :
	dir_ (std::move (dir))
	{
		std::error_code ec;
		fs::create_directories (dir_, ec);
		if (ec)
		{
			throw Error (Errc::io_error, "cannot create " + dir_.string () + ": " + ec.message ());
		}
		events_tmp_ = dir_ / "events.csv.tmp";
		events_.open (events_tmp_, std::ios::binary | std::ios::trunc);
		if (!events_)
		{
			throw Error (Errc::io_error, "cannot write " + events_tmp_.string ());
		}
		events_ << "tick,agent_id,event_type,payload\n";
		metrics_ << metrics_csv_header << '\n';
	}

	void tick (Simulation const & sim, std::vector<Event> const & events)
	{
		append_events (events_, events);
		metrics_ << to_csv_row (sim.frames ().back ()) << '\n';
	}

	void finish (std::string const & meta)
	{
		events_.flush ();
		if (!events_)
		{
			throw Error (Errc::io_error, "cannot write " + events_tmp_.string ());
		}
		events_.close ();
		std::error_code ec;
		fs::rename (events_tmp_, dir_ / "events.csv", ec);
		if (ec)
		{
			throw Error (Errc::io_error, "cannot rename " + events_tmp_.string ());
		}
		write_atomic (dir_ / "metrics.csv", metrics_.str ());
		write_atomic (dir_ / "meta.json", meta);
	}

private:
	fs::path dir_;
	fs::path events_tmp_;
	std::ofstream events_;
	std::ostringstream metrics_;
};

int cmd_run (Sources const & s)
{
	auto [config, overrides] = resolve (s);
	RunWriter writer (s.out);
	Simulation sim (config);
	sim.run ([&] (std::vector<Event> const & events) { writer.tick (sim, events); });
	writer.finish (meta_document (config, overrides));
	return exit_ok;
}

int cmd_ablate (Sources const & s, std::ostream & out)
{
	auto [config, overrides] = resolve (s);
	fs::path root (s.out);
	auto cells = default_ablation_cells ();
	std::ostringstream summary;
	summary << summary_csv_header << '\n';
	for (auto const & cell : cells)
	{
		RunWriter writer (root / cell.name);
		auto reports = run_ablation (config, { cell }, [&] (AblationCell const &, Simulation const & sim, std::vector<Event> const & events) { writer.tick (sim, events); });
		auto cell_config = config;
		cell_config.toggles = cell.toggles;
		writer.finish (meta_document (cell_config, overrides));
		summary << to_summary_row (reports.front ()) << '\n';
		out << cell.name << (reports.front ().death_spiral ? " death_spiral" : " stable") << '\n';
	}
	write_atomic (root / "summary.csv", summary.str ());
	return exit_ok;
}

void add_sources (CLI::App & cmd, Sources & s, bool with_config)
{
	auto * scenario = cmd.add_option ("--scenario", s.scenario, "Built-in scenario name");
	if (with_config)
	{
		auto * config = cmd.add_option ("--config", s.config_path, "Scenario config file (JSON)");
		scenario->excludes (config);
		config->excludes (scenario);
		cmd.callback ([&s] {
			if (s.scenario.empty () && s.config_path.empty ())
			{
				throw CLI::ValidationError ("--scenario or --config is required");
			}
		});
	}
	else
	{
		scenario->required ();
	}
	cmd.add_option ("--seed", s.seed, "Override the config seed");
	cmd.add_option ("--ticks", s.ticks, "Override the number of ticks");
	cmd.add_option ("--out", s.out, "Output directory")->required ();
}
}

int run_cli (int argc, char const * const * argv, std::ostream & out, std::ostream & err)
{
	CLI::App app{ "Deterministic open game economy simulator" };
	app.require_subcommand (1);
	Sources run_sources;
	Sources ablate_sources;
	auto * run = app.add_subcommand ("run", "Run one scenario and write metrics.csv, events.csv and meta.json");
	add_sources (*run, run_sources, true);
	auto * ablate = app.add_subcommand ("ablate", "Run the seven-cell mechanism ablation and write summary.csv");
	add_sources (*ablate, ablate_sources, true);
	auto * list = app.add_subcommand ("list", "Print built-in scenario names");

	try
	{
		app.parse (argc, argv);
	}
	catch (CLI::CallForHelp const & e)
	{
		out << app.help ();
		return exit_ok;
	}
	catch (CLI::ParseError const & e)
	{
		err << e.what () << '\n';
		return exit_config_error;
	}

	try
	{
		if (run->parsed ())
		{
			return cmd_run (run_sources);
		}
		if (ablate->parsed ())
		{
			return cmd_ablate (ablate_sources, out);
		}
		if (list->parsed ())
		{
			for (auto const & name : builtin_names ())
			{
				out << name << '\n';
			}
			return exit_ok;
		}
	}
	catch (Error const & e)
	{
		err << "error: " << e.what () << '\n';
		return e.code () == Errc::io_error ? exit_io_error : exit_config_error;
	}
	catch (fs::filesystem_error const & e)
	{
		err << "error: " << e.what () << '\n';
		return exit_io_error;
	}
	return exit_config_error;
}
}
