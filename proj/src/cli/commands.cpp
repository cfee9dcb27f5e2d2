#include "hyplas/cli/commands.hpp"
#include "hyplas/ruledsl/ast.hpp"
#include "hyplas/topology/compile.hpp"
#include "hyplas/topology/experiment.hpp"

#include <fstream>
#include <ostream>

namespace hyplas::cli {

namespace {

void report(std::filesystem::path const& path, Error const& e, std::ostream& err)
{
	if (auto const* pe = dynamic_cast<PositionedError const*>(&e)) {
		err << path.string() << ':' << pe->pos().line << ':' << pe->pos().column << ": error: "
		    << to_string(pe->code()) << ": " << pe->detail() << '\n';
	} else {
		err << path.string() << ": error: " << e.what() << '\n';
	}
}

/// Loads and validates; prints diagnostics. Empty on error-level findings.
std::optional<topology::Network> load_checked(
    std::filesystem::path const& path, Overrides const& o, std::ostream& err,
    std::optional<std::uint64_t> seed = std::nullopt)
{
	std::optional<topology::Network> net;
	try {
		net = load(path, o);
	} catch (Error const& e) {
		report(path, e, err);
		return std::nullopt;
	}
	if (seed) {
		net->set_seed(*seed);
	}
	auto const diags = topology::validate(*net);
	for (auto const& d : diags) {
		err << path.string() << ": " << topology::format(d) << '\n';
	}
	if (topology::has_errors(diags)) {
		return std::nullopt;
	}
	return net;
}

bool is_budget_error(Errc c)
{
	return c == Errc::BudgetExceeded || c == Errc::DramBudgetExceeded;
}

void write_file(std::filesystem::path const& path, std::string_view data)
{
	if (path.has_parent_path()) {
		std::filesystem::create_directories(path.parent_path());
	}
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	out.write(data.data(), static_cast<std::streamsize>(data.size()));
	if (!out) {
		throw Error(Errc::Io, "cannot write '" + path.string() + "'");
	}
}

} // namespace

int cmd_validate(std::filesystem::path const& path, std::ostream& out, std::ostream& err)
{
	auto const net = load_checked(path, {}, err);
	if (!net) {
		return kExitInvalid;
	}
	out << path.string() << ": ok (" << net->populations().size() << " populations, "
	    << net->projections().size() << " projections, " << net->rules().size() << " rules)\n";
	return kExitOk;
}

int cmd_estimate(
    std::filesystem::path const& path, Overrides const& o, bool json, std::ostream& out, std::ostream& err)
{
	auto const net = load_checked(path, o, err);
	if (!net) {
		return kExitInvalid;
	}
	try {
		auto const pl = placement::map_network(*net);
		auto const report = placement::check_budgets(*net, pl, o.sim.costs);
		out << (json ? placement::format_json(report) + '\n' : placement::format_text(report));
		return report.ok() ? kExitOk : kExitBudget;
	} catch (Error const& e) {
		report(path, e, err);
		return kExitInvalid;
	}
}

int cmd_compile(
    std::filesystem::path const& path, Emit emit, std::optional<std::filesystem::path> const& out_dir,
    Overrides const& o, std::ostream& out, std::ostream& err)
{
	auto const net = load_checked(path, o, err);
	if (!net) {
		return kExitInvalid;
	}
	try {
		auto const pl = placement::map_network(*net);
		for (topology::RuleId r = 0; r < net->rules().size(); ++r) {
			auto const& id = net->rules()[r].id;
			auto const typed = topology::compile_rule(*net, r);
			std::string listing;
			if (emit == Emit::ast) {
				listing = ruledsl::dump_ast(typed.ast);
			} else {
				listing = ruledsl::disassemble(ruledsl::lower(typed, pl.rules[r], o.sim.costs));
			}
			if (out_dir) {
				write_file(*out_dir / (id + (emit == Emit::ast ? ".ast" : ".asm")), listing);
			} else {
				out << listing;
			}
		}
	} catch (Error const& e) {
		report(path, e, err);
		return is_budget_error(e.code()) ? kExitBudget : kExitInvalid;
	}
	return kExitOk;
}

int cmd_run(RunOptions const& options, std::ostream& out, std::ostream& err)
{
	if (options.bin.ns() <= 0) {
		err << "error: bin width must be positive\n";
		return kExitInvalid;
	}
	Overrides o;
	try {
		o = parse_overrides(options.overrides);
	} catch (Error const& e) {
		err << "error: " << e.what() << '\n';
		return kExitInvalid;
	}
	auto const net = load_checked(options.experiment, o, err, options.seed);
	if (!net) {
		return kExitInvalid;
	}

	std::optional<ppuvm::Simulation> sim;
	try {
		auto const report = placement::check_budgets(*net, placement::map_network(*net), o.sim.costs);
		if (!report.ok()) {
			err << placement::format_text(report);
			return kExitBudget;
		}
		sim.emplace(*net, o.sim);
	} catch (Error const& e) {
		report(options.experiment, e, err);
		return is_budget_error(e.code()) ? kExitBudget : kExitInvalid;
	}

	try {
		sim->run();
	} catch (std::exception const& e) {
		err << "runtime fault: " << e.what() << '\n';
		return kExitFault;
	}

	try {
		auto const& dir = options.out_dir;
		std::filesystem::create_directories(dir);
		write_file(options.spikes.value_or(dir / "spikes.csv"), spikes_csv(*net, sim->spikes()));
		write_file(options.trace.value_or(dir / "traces.csv"), traces_csv(*net, sim->traces()));
		auto const image = recording::serialize(sim->recordings());
		write_file(dir / "records.bin", {reinterpret_cast<char const*>(image.data()), image.size()});
		recording::export_csv(recording::to_series(sim->recordings()), dir / "observables");
		write_file(dir / "summary.json", summary_json(*sim, options.bin));
	} catch (std::exception const& e) {
		err << "error: " << e.what() << '\n';
		return kExitFault;
	}
	out << "ran " << format_us(net->runtime()) << " us: " << sim->spikes().size() << " spikes, "
	    << sim->traces().size() << " rule executions; artifacts in " << options.out_dir.string() << '\n';
	return kExitOk;
}

} // namespace hyplas::cli
