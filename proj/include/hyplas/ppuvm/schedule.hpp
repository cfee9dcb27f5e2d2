#pragma once

#include "hyplas/time.hpp"
#include "hyplas/topology/network.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace hyplas::ppuvm {

/// Embedded processor timing model.
struct VmParams
{
	std::uint64_t clock_hz = 250'000'000;
	std::uint64_t dispatch_cycles = 500;
	std::uint64_t cold_cycles = 2000; // extra dispatch cost of a rule's first run on a processor

	friend bool operator==(VmParams const&, VmParams const&) = default;
};

struct ScheduleEvent
{
	topology::RuleId rule = 0;
	std::uint32_t ordinal = 0;
	Time deadline;

	friend bool operator==(ScheduleEvent const&, ScheduleEvent const&) = default;
};

/// Deadline order, ties broken by rule id, then ordinal.
bool schedule_before(ScheduleEvent const& a, ScheduleEvent const& b);

/// All timer deadlines of `timers` (indexed by rule id) in schedule order.
std::vector<ScheduleEvent> build_schedule(std::vector<topology::PeriodicTimer> const& timers);
std::vector<ScheduleEvent> build_schedule(topology::Network const& network);

struct ExecutionTrace
{
	topology::RuleId rule = 0;
	std::uint32_t ordinal = 0;
	Time deadline;
	bool skipped = false;
	Time start;    // first kernel instruction (unset when skipped)
	Time duration; // kernel body only
	std::uint64_t cycles = 0;
	std::uint32_t processor = 0;

	friend bool operator==(ExecutionTrace const&, ExecutionTrace const&) = default;
};

/// Earliest-deadline-first dispatch of `events` on one processor. A rule's events whose
/// deadlines pass while the processor is busy are skipped, except the latest one, which runs as
/// soon as the processor is free. Execution starts after the dispatch overhead (plus the cold
/// penalty on a rule's first run) and lasts `body_cycles(rule)`. Returns one trace per event,
/// in schedule order.
std::vector<ExecutionTrace> run_scheduler(
    std::vector<ScheduleEvent> const& events, std::uint32_t processor,
    std::function<std::uint64_t(topology::RuleId)> const& body_cycles, VmParams const& params);

} // namespace hyplas::ppuvm
