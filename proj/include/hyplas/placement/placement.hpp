#pragma once

#include "hyplas/ruledsl/bytecode.hpp"
#include "hyplas/topology/network.hpp"
#include "hyplas/views.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hyplas::placement {

struct NeuronSlot
{
	std::uint8_t hemisphere = 0;
	std::uint16_t column = 0;

	friend bool operator==(NeuronSlot const&, NeuronSlot const&) = default;
};

/// The part of a projection living on one hemisphere: a rows × columns rectangle.
struct Footprint
{
	std::uint8_t hemisphere = 0;
	std::vector<std::uint16_t> rows;
	std::vector<std::uint16_t> columns;
	std::vector<std::uint32_t> pre;  // logical presynaptic index per row
	std::vector<std::uint32_t> post; // logical postsynaptic index per column
	std::vector<std::uint8_t> connected; // row-major rows × columns mask

	bool is_connected(std::size_t r, std::size_t c) const { return connected[r * columns.size() + c]; }

	friend bool operator==(Footprint const&, Footprint const&) = default;
};

struct Placement
{
	std::vector<std::vector<NeuronSlot>> populations; // per population, per logical neuron
	std::vector<std::vector<Footprint>> projections;  // per projection, one entry per used hemisphere
	std::vector<RuleViews> rules;                     // per rule, per processor

	friend bool operator==(Placement const&, Placement const&) = default;
};

/// Deterministic first-fit mapping. Throws Unmappable.
Placement map_network(topology::Network const& network);

/// Readable rendering used by `estimate` and the determinism tests.
std::string describe(Placement const& placement, topology::Network const& network);

/// Location-table words for the given shapes: Σ(rows + columns) + Σ neurons.
struct ProjectionShape
{
	std::size_t rows = 0;
	std::size_t columns = 0;
};
std::size_t location_entries(
    std::vector<ProjectionShape> const& projections, std::vector<std::size_t> const& populations);

/// Location-table words each processor needs for one rule's views.
std::array<std::size_t, kHemispheres> location_memory_entries(Placement const& placement, topology::RuleId rule);

/// Bytes one invocation of `rule` records, summed over both hemispheres.
std::size_t recording_bytes_per_invocation(
    topology::Network const& network, Placement const& placement, topology::RuleId rule);

/// Raw accounting for a single block: `rows` rows of `used` entries (or 256 if unpacked).
std::size_t block_bytes(simd::LaneType dtype, RecordLayout layout, std::size_t rows, std::size_t used);

inline constexpr std::uint64_t kDramBudgetBytes = 256ull << 20;

struct RuleBudget
{
	std::string rule;
	std::array<std::size_t, kHemispheres> location_entries{};
	std::size_t image_bytes = 0;
	std::size_t recording_per_invocation = 0;
	std::size_t packed_equivalent = 0; // same observables, all packed
	std::uint32_t invocations = 0;
	std::uint64_t recording_total = 0;
};

struct BudgetReport
{
	std::vector<RuleBudget> rules;
	std::size_t image_bytes = 0;
	std::size_t image_budget = ruledsl::kImageBudgetBytes;
	std::uint64_t recording_bytes = 0;
	std::uint64_t dram_budget = kDramBudgetBytes;

	bool image_ok() const { return image_bytes <= image_budget; }
	bool dram_ok() const { return recording_bytes <= dram_budget; }
	bool ok() const { return image_ok() && dram_ok(); }
};

/// Compiles every rule against the placement and sums program images and recording volume.
BudgetReport check_budgets(
    topology::Network const& network, Placement const& placement,
    ruledsl::CostTable const& costs = {});

std::string format_text(BudgetReport const& report);
std::string format_json(BudgetReport const& report);

} // namespace hyplas::placement
