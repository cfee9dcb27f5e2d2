#include "hyplas/ppuvm/schedule.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace hyplas::ppuvm {

bool schedule_before(ScheduleEvent const& a, ScheduleEvent const& b)
{
	if (a.deadline != b.deadline) {
		return a.deadline < b.deadline;
	}
	return a.rule != b.rule ? a.rule < b.rule : a.ordinal < b.ordinal;
}

std::vector<ScheduleEvent> build_schedule(std::vector<topology::PeriodicTimer> const& timers)
{
	std::vector<ScheduleEvent> out;
	for (topology::RuleId r = 0; r < timers.size(); ++r) {
		for (std::uint32_t k = 0; k < timers[r].count; ++k) {
			out.push_back({r, k, timers[r].deadline(k)});
		}
	}
	std::sort(out.begin(), out.end(), schedule_before);
	return out;
}

std::vector<ScheduleEvent> build_schedule(topology::Network const& network)
{
	std::vector<topology::PeriodicTimer> timers;
	for (auto const& r : network.rules()) {
		timers.push_back(r.timer);
	}
	return build_schedule(timers);
}

std::vector<ExecutionTrace> run_scheduler(
    std::vector<ScheduleEvent> const& input, std::uint32_t processor,
    std::function<std::uint64_t(topology::RuleId)> const& body_cycles, VmParams const& params)
{
	auto events = input;
	std::stable_sort(events.begin(), events.end(), schedule_before);
	std::vector<ExecutionTrace> traces(events.size());
	for (std::size_t i = 0; i < events.size(); ++i) {
		traces[i].rule = events[i].rule;
		traces[i].ordinal = events[i].ordinal;
		traces[i].deadline = events[i].deadline;
		traces[i].processor = processor;
	}

	std::set<topology::RuleId> warm;
	std::vector<std::size_t> ready; // released, not yet handled; schedule order
	std::size_t next = 0;
	Time free;
	while (next < events.size() || !ready.empty()) {
		auto const now = ready.empty() ? std::max(free, events[next].deadline) : free;
		while (next < events.size() && events[next].deadline <= now) {
			ready.push_back(next++);
		}
		// Only the latest released event of each rule survives.
		std::map<topology::RuleId, std::size_t> latest;
		for (auto i : ready) {
			latest[events[i].rule] = i;
		}
		std::erase_if(ready, [&](std::size_t i) {
			if (latest.at(events[i].rule) != i) {
				traces[i].skipped = true;
				return true;
			}
			return false;
		});

		auto const i = ready.front();
		ready.erase(ready.begin());
		auto const rule = events[i].rule;
		auto overhead = params.dispatch_cycles;
		if (warm.insert(rule).second) {
			overhead += params.cold_cycles;
		}
		auto& t = traces[i];
		t.cycles = body_cycles(rule);
		t.start = now + cycles_to_time(overhead, params.clock_hz);
		t.duration = cycles_to_time(t.cycles, params.clock_hz);
		free = t.start + t.duration;
	}
	return traces;
}

} // namespace hyplas::ppuvm
