#include "hyplas/ppuvm/simulation.hpp"

#include "hyplas/error.hpp"
#include "hyplas/topology/compile.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>

namespace hyplas::ppuvm {

std::vector<std::uint32_t> active_processors(ruledsl::BytecodeProgram const& program)
{
	std::vector<std::uint32_t> out;
	for (std::uint32_t p = 0; p < program.tables.size(); ++p) {
		auto const& t = program.tables[p];
		auto const any = [](auto const& views) {
			return std::any_of(views.begin(), views.end(), [](auto const& v) { return v.has_value(); });
		};
		if (any(t.synapses) || any(t.neurons)) {
			out.push_back(p);
		}
	}
	if (out.empty()) {
		out.push_back(0);
	}
	return out;
}

Simulation::Simulation(topology::Network const& network, SimulationConfig const& config) :
    m_network(&network), m_config(config), m_placement(placement::map_network(network))
{
	std::vector<recording::RuleLayout> layouts;
	for (topology::RuleId r = 0; r < network.rules().size(); ++r) {
		auto const kernel = topology::compile_rule(network, r);
		m_programs.push_back(ruledsl::lower(kernel, m_placement.rules[r], config.costs));
		m_states.emplace_back(m_programs.back(), kHemispheres);
		layouts.push_back(recording::allocate_layout(network, m_placement, r));
	}
	m_store = recording::RecordingStore(std::move(layouts));
	m_core = std::make_unique<analogcore::AnalogCore>(network, m_placement, config.core, network.seed());
}

namespace {

class SlotSink final : public RecordSink
{
public:
	SlotSink(recording::RecordingStore& store, recording::SlotRef slot) : m_store(store), m_slot(slot) {}

	void record(
	    std::size_t observable, ruledsl::ViewKind, std::uint16_t view, std::uint16_t row,
	    simd::Vector const& value) override
	{
		auto const block = m_store.find_block(m_slot, observable, view);
		if (block < 0) {
			throw Error(Errc::RecordingOverflow, "no recording block for observable " + std::to_string(observable));
		}
		m_store.write(m_slot, static_cast<std::size_t>(block), row, value);
	}

private:
	recording::RecordingStore& m_store;
	recording::SlotRef m_slot;
};

struct Execution
{
	std::size_t trace = 0;
	std::optional<SlotSink> sink;
	std::optional<Machine> machine;
};

} // namespace

void Simulation::run()
{
	if (m_ran) {
		throw std::logic_error("simulation already ran");
	}
	m_ran = true;
	auto const& net = *m_network;
	auto const events = build_schedule(net);

	for (std::uint32_t p = 0; p < kHemispheres; ++p) {
		std::vector<ScheduleEvent> mine;
		for (auto const& e : events) {
			auto const act = active_processors(m_programs[e.rule]);
			if (std::find(act.begin(), act.end(), p) != act.end()) {
				mine.push_back(e);
			}
		}
		auto const traces = run_scheduler(
		    mine, p, [&](topology::RuleId r) { return ruledsl::estimate_cycles(m_programs[r], p); },
		    m_config.vm);
		m_traces.insert(m_traces.end(), traces.begin(), traces.end());
	}
	std::stable_sort(m_traces.begin(), m_traces.end(), [](auto const& a, auto const& b) {
		if (a.deadline != b.deadline) {
			return a.deadline < b.deadline;
		}
		if (a.rule != b.rule) {
			return a.rule < b.rule;
		}
		return a.ordinal != b.ordinal ? a.ordinal < b.ordinal : a.processor < b.processor;
	});

	std::vector<Execution> execs;
	for (std::size_t i = 0; i < m_traces.size(); ++i) {
		auto const& t = m_traces[i];
		auto const rule = static_cast<std::uint32_t>(t.rule);
		if (t.skipped) {
			m_store.mark_skipped(rule, t.processor, t.ordinal, t.deadline);
		} else {
			execs.push_back({i, std::nullopt, std::nullopt});
		}
	}

	// Min-heap of (time of next instruction, processor, execution index).
	using Key = std::tuple<Time, std::uint32_t, std::size_t>;
	std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
	for (std::size_t e = 0; e < execs.size(); ++e) {
		auto const& t = m_traces[execs[e].trace];
		queue.emplace(t.start, t.processor, e);
	}
	auto const clock = m_config.vm.clock_hz;
	Time end = net.runtime();
	while (!queue.empty()) {
		auto const [at, processor, e] = queue.top();
		queue.pop();
		auto& x = execs[e];
		auto const& t = m_traces[x.trace];
		if (!x.machine) {
			auto const slot = m_store.open(static_cast<std::uint32_t>(t.rule), t.processor, t.ordinal, t.deadline);
			x.sink.emplace(m_store, slot);
			x.machine.emplace(m_programs[t.rule], t.processor, m_states[t.rule], *m_core, &*x.sink);
		}
		auto& m = *x.machine;
		// The instruction due now may touch the core; the following private ones run with it.
		if (m.next_is_external()) {
			m_core->advance_to(at.us());
		}
		if (!m.done()) {
			m.step();
		}
		while (!m.done() && !m.next_is_external()) {
			m.step();
		}
		if (m.done()) {
			if (m.cycles() != t.cycles) {
				throw std::logic_error("interpreted cycles differ from the static estimate");
			}
			end = std::max(end, t.start + t.duration);
			x.machine.reset();
			x.sink.reset();
		} else {
			queue.emplace(t.start + cycles_to_time(m.cycles(), clock), processor, e);
		}
	}
	m_core->advance_to(end.us());
}

} // namespace hyplas::ppuvm
