#include "hyplas/cli/commands.hpp"
#include "hyplas/topology/experiment.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace hyplas;

int main(int argc, char** argv)
{
	CLI::App app{"Hybrid plasticity experiment runner"};
	app.require_subcommand(1);

	std::string experiment;
	std::vector<std::string> overrides;

	auto* validate = app.add_subcommand("validate", "Check an experiment file");
	validate->add_option("experiment", experiment, "Experiment JSON")->required();

	bool json = false;
	auto* estimate = app.add_subcommand("estimate", "Print memory and image budgets");
	estimate->add_option("experiment", experiment, "Experiment JSON")->required();
	estimate->add_flag("--json", json, "JSON output only");
	estimate->add_option("--override", overrides, "KEY=VALUE");

	std::string emit = "asm";
	std::optional<std::string> compile_out;
	auto* compile = app.add_subcommand("compile", "Emit kernel listings");
	compile->add_option("experiment", experiment, "Experiment JSON")->required();
	compile->add_option("--emit", emit, "asm or ast")->check(CLI::IsMember({"asm", "ast"}));
	compile->add_option("--out", compile_out, "Directory for <rule>.asm / <rule>.ast");
	compile->add_option("--override", overrides, "KEY=VALUE");

	cli::RunOptions run_opts;
	std::optional<std::string> trace_path;
	std::optional<std::string> spikes_path;
	std::optional<std::uint64_t> seed;
	std::string run_out = "out";
	double bin_us = 50'000.0;
	auto* run = app.add_subcommand("run", "Simulate an experiment and write artifacts");
	run->add_option("experiment", experiment, "Experiment JSON")->required();
	run->add_option("--out", run_out, "Artifact directory");
	run->add_option("--seed", seed, "Override the experiment seed");
	run->add_option("--override", overrides, "KEY=VALUE");
	run->add_option("--trace", trace_path, "Execution trace CSV (default <out>/traces.csv)");
	run->add_option("--spikes", spikes_path, "Spike CSV (default <out>/spikes.csv)");
	run->add_option("--bin-us", bin_us, "Rate bin width in us")->check(CLI::PositiveNumber);

	cli::HomeostasisParams hp;
	double period_us = hp.period.us();
	double runtime_us = hp.runtime.us();
	std::optional<std::string> gen_out;
	auto* gen = app.add_subcommand("gen-homeostasis", "Write the homeostasis reference experiment");
	gen->add_option("--targets", hp.targets, "Target neurons (1..512)");
	gen->add_option("--rate-in", hp.rate_in_hz, "Poisson drive rate in Hz");
	gen->add_option("--rate-target", hp.rate_target_hz, "Target firing rate in Hz");
	gen->add_option("--period-us", period_us, "Rule period in us");
	gen->add_option("--runtime-us", runtime_us, "Experiment runtime in us");
	gen->add_option("--weight", hp.weight_init, "Initial weight");
	gen->add_option("--seed", hp.seed, "Experiment seed");
	gen->add_option("--out", gen_out, "Output file (default stdout)");

	CLI11_PARSE(app, argc, argv);

	try {
		if (validate->parsed()) {
			return cli::cmd_validate(experiment, std::cout, std::cerr);
		}
		if (gen->parsed()) {
			hp.period = Time::from_us(period_us);
			hp.runtime = Time::from_us(runtime_us);
			auto const text = topology::to_json(cli::homeostasis_network(hp));
			if (!gen_out) {
				std::cout << text;
				return cli::kExitOk;
			}
			std::ofstream f(*gen_out, std::ios::binary);
			f << text;
			if (!f) {
				std::cerr << "error: cannot write " << *gen_out << '\n';
				return cli::kExitFault;
			}
			return cli::kExitOk;
		}
		if (run->parsed()) {
			run_opts.experiment = experiment;
			run_opts.out_dir = run_out;
			run_opts.seed = seed;
			run_opts.overrides = overrides;
			if (trace_path) {
				run_opts.trace = *trace_path;
			}
			if (spikes_path) {
				run_opts.spikes = *spikes_path;
			}
			run_opts.bin = Time::from_us(bin_us);
			return cli::cmd_run(run_opts, std::cout, std::cerr);
		}
		auto const o = cli::parse_overrides(overrides);
		if (estimate->parsed()) {
			return cli::cmd_estimate(experiment, o, json, std::cout, std::cerr);
		}
		std::optional<std::filesystem::path> dir;
		if (compile_out) {
			dir = *compile_out;
		}
		return cli::cmd_compile(
		    experiment, emit == "ast" ? cli::Emit::ast : cli::Emit::asm_listing, dir, o, std::cout, std::cerr);
	} catch (Error const& e) {
		std::cerr << "error: " << e.what() << '\n';
		return cli::kExitInvalid;
	}
}
