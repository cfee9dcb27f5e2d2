#pragma once

#include "hyplas/ppuvm/interpreter.hpp"
#include "support/kernel_oracle.hpp"

#include <random>
#include <set>

namespace hyplas::test {

/// Up to two synapse and two neuron views on one hemisphere; each may be absent.
inline ProcessorViews random_tables(std::mt19937_64& rng, std::uint8_t hemisphere)
{
	auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
	ProcessorViews t;
	std::set<std::uint16_t> used_rows;
	for (int v = 0; v < 2; ++v) {
		if (pick(0, 3) == 0) {
			t.synapses.emplace_back();
			continue;
		}
		SynapseArrayView s;
		s.hemisphere = hemisphere;
		auto const rows = pick(0, 4);
		for (int r = 0; r < rows; ++r) {
			s.rows.push_back(static_cast<std::uint16_t>(pick(0, 255)));
		}
		std::set<std::uint16_t> cols;
		auto const ncols = pick(1, 20);
		for (int c = 0; c < ncols; ++c) {
			cols.insert(static_cast<std::uint16_t>(pick(0, 255)));
		}
		s.columns.assign(cols.begin(), cols.end());
		t.synapses.push_back(s);
	}
	for (int v = 0; v < 2; ++v) {
		if (pick(0, 3) == 0) {
			t.neurons.emplace_back();
			continue;
		}
		NeuronView n;
		n.hemisphere = hemisphere;
		std::set<std::uint16_t> cols;
		auto const ncols = pick(1, 30);
		for (int c = 0; c < ncols; ++c) {
			cols.insert(static_cast<std::uint16_t>(pick(0, 255)));
		}
		n.columns.assign(cols.begin(), cols.end());
		t.neurons.push_back(n);
	}
	return t;
}

struct LogSink final : ppuvm::RecordSink
{
	std::vector<RecordEntry> entries;

	void record(
	    std::size_t observable, ruledsl::ViewKind kind, std::uint16_t view, std::uint16_t row,
	    simd::Vector const& value) override
	{
		RecordEntry e{observable, kind, view, row, {}};
		for (std::size_t i = 0; i < simd::kRowLanes; ++i) {
			e.lanes.push_back(value.lane(i));
		}
		entries.push_back(std::move(e));
	}
};

} // namespace hyplas::test
