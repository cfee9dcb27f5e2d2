#pragma once

// Tick-by-tick simulation of one processor for integer-microsecond timers and durations.
// Each tick: newly due events join the waiting set; while the processor is idle, the waiting
// set is thinned to the latest event of each rule and the earliest survivor is dispatched.

#include "hyplas/ppuvm/schedule.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace hyplas::test {

struct OracleEvent
{
	std::size_t rule;
	std::uint32_t ordinal;
	std::int64_t deadline_us;
};

struct OracleTrace
{
	std::size_t rule;
	std::uint32_t ordinal;
	std::int64_t deadline_us;
	bool skipped = false;
	std::int64_t start_us = 0;
	std::int64_t duration_us = 0;

	friend bool operator==(OracleTrace const&, OracleTrace const&) = default;
};

/// `duration_us[r]` and the overheads are in whole microseconds.
inline std::vector<OracleTrace> brute_force_schedule(
    std::vector<OracleEvent> const& events, std::vector<std::int64_t> const& duration_us,
    std::int64_t dispatch_us, std::int64_t cold_us)
{
	std::vector<OracleTrace> traces;
	for (auto const& e : events) {
		traces.push_back({e.rule, e.ordinal, e.deadline_us});
	}
	std::int64_t horizon = 0;
	for (auto const& e : events) {
		horizon = std::max(horizon, e.deadline_us);
	}
	for (auto d : duration_us) {
		horizon += (d + dispatch_us + cold_us) * static_cast<std::int64_t>(events.size() + 1);
	}
	std::vector<std::size_t> waiting;
	std::set<std::size_t> warm;
	std::int64_t busy_until = 0;
	for (std::int64_t tick = 0; tick <= horizon; ++tick) {
		for (std::size_t i = 0; i < events.size(); ++i) {
			if (events[i].deadline_us == tick) {
				waiting.push_back(i);
			}
		}
		while (tick >= busy_until && !waiting.empty()) {
			for (std::size_t i : std::vector<std::size_t>(waiting)) {
				for (std::size_t j : waiting) {
					if (events[j].rule == events[i].rule && events[j].deadline_us > events[i].deadline_us) {
						traces[i].skipped = true;
					}
				}
			}
			std::erase_if(waiting, [&](std::size_t i) { return traces[i].skipped; });
			auto const best = *std::min_element(waiting.begin(), waiting.end(), [&](std::size_t a, std::size_t b) {
				auto const& x = events[a];
				auto const& y = events[b];
				return std::tie(x.deadline_us, x.rule, x.ordinal) < std::tie(y.deadline_us, y.rule, y.ordinal);
			});
			std::erase(waiting, best);
			auto const rule = events[best].rule;
			auto const overhead = dispatch_us + (warm.insert(rule).second ? cold_us : 0);
			traces[best].start_us = tick + overhead;
			traces[best].duration_us = duration_us[rule];
			busy_until = traces[best].start_us + traces[best].duration_us;
		}
	}
	return traces;
}

} // namespace hyplas::test
