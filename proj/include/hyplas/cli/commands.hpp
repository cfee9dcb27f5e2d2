#pragma once

#include "hyplas/ppuvm/simulation.hpp"
#include "hyplas/topology/network.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hyplas::cli {

enum ExitCode : int
{
	kExitOk = 0,
	kExitInvalid = 1, // validation or compile failure
	kExitBudget = 2,
	kExitFault = 3, // runtime fault
};

/// Settings adjustable with `--override KEY=VALUE`.
struct Overrides
{
	ppuvm::SimulationConfig sim;
	topology::CellParams cell;
	std::optional<Time> runtime;
};

/// Known override keys, sorted.
std::vector<std::string> override_keys();

/// Applies one `KEY=VALUE` assignment. Throws Error(BadOverride) for unknown keys or values.
void apply_override(Overrides& o, std::string const& assignment);
Overrides parse_overrides(std::vector<std::string> const& assignments);

/// Loads an experiment with the overrides' cell defaults and runtime applied.
topology::Network load(std::filesystem::path const& path, Overrides const& o);

int cmd_validate(std::filesystem::path const& path, std::ostream& out, std::ostream& err);

int cmd_estimate(
    std::filesystem::path const& path, Overrides const& o, bool json, std::ostream& out, std::ostream& err);

enum class Emit
{
	asm_listing,
	ast,
};

/// Writes one listing per rule to `out`, or to `<rule>.asm` / `<rule>.ast` in `out_dir`.
int cmd_compile(
    std::filesystem::path const& path, Emit emit, std::optional<std::filesystem::path> const& out_dir,
    Overrides const& o, std::ostream& out, std::ostream& err);

struct RunOptions
{
	std::filesystem::path experiment;
	std::filesystem::path out_dir = "out";
	std::optional<std::uint64_t> seed;
	std::vector<std::string> overrides;
	std::optional<std::filesystem::path> trace;  // default <out>/traces.csv
	std::optional<std::filesystem::path> spikes; // default <out>/spikes.csv
	Time bin = Time::from_us(50'000);
};

/// Validates, checks budgets, simulates and writes spikes.csv, traces.csv, observables/*.csv,
/// records.bin and summary.json.
int cmd_run(RunOptions const& options, std::ostream& out, std::ostream& err);

struct HomeostasisParams
{
	std::uint32_t targets = 64;
	double rate_in_hz = 120'000.0;
	double rate_target_hz = 6'000.0;
	Time period = Time::from_us(5'000);
	Time runtime = Time::from_us(500'000);
	int weight_init = 31;
	std::uint64_t seed = 1;
};

/// Kernel text of the sign rule for a given target count per period.
std::string homeostasis_kernel(std::uint32_t target_count, int w_max);

/// Reference experiment: one Poisson source driving `targets` neurons all-to-all through a
/// plastic projection. Throws Error(RangeError) for out-of-range parameters.
topology::Network homeostasis_network(HomeostasisParams const& p);

// Artifact renderers, exposed for cross-checks.
std::string traces_csv(topology::Network const& net, std::vector<ppuvm::ExecutionTrace> const& traces);
std::string spikes_csv(topology::Network const& net, std::vector<analogcore::SpikeRecord> const& spikes);
std::string summary_json(ppuvm::Simulation const& sim, Time bin);

} // namespace hyplas::cli
