#pragma once

#include "hyplas/analogcore/core.hpp"
#include "hyplas/placement/placement.hpp"
#include "hyplas/ppuvm/interpreter.hpp"
#include "hyplas/ppuvm/schedule.hpp"
#include "hyplas/recording/recording.hpp"

#include <memory>

namespace hyplas::ppuvm {

struct SimulationConfig
{
	VmParams vm;
	analogcore::CoreParams core;
	ruledsl::CostTable costs;
};

/// Processors that execute a rule: those holding any of its views, or processor 0 if none do.
std::vector<std::uint32_t> active_processors(ruledsl::BytecodeProgram const& program);

/// Deterministic co-simulation of both embedded processors and the analog core.
class Simulation
{
public:
	/// Maps, compiles and lowers every rule and allocates recording memory. Throws the error
	/// of the failing stage (Unmappable, compile errors, BudgetExceeded, DramBudgetExceeded).
	Simulation(topology::Network const& network, SimulationConfig const& config);

	/// Runs the experiment to its runtime. May be called once.
	void run();

	topology::Network const& network() const { return *m_network; }
	placement::Placement const& placement() const { return m_placement; }
	std::vector<ruledsl::BytecodeProgram> const& programs() const { return m_programs; }
	analogcore::AnalogCore const& core() const { return *m_core; }
	recording::RecordingStore const& recordings() const { return m_store; }
	/// One trace per (event, executing processor), ordered by deadline, rule, ordinal, processor.
	std::vector<ExecutionTrace> const& traces() const { return m_traces; }
	std::vector<analogcore::SpikeRecord> const& spikes() const { return m_core->spikes(); }

private:
	topology::Network const* m_network;
	SimulationConfig m_config;
	placement::Placement m_placement;
	std::vector<ruledsl::BytecodeProgram> m_programs;
	std::vector<StateStore> m_states;
	std::unique_ptr<analogcore::AnalogCore> m_core;
	recording::RecordingStore m_store;
	std::vector<ExecutionTrace> m_traces;
	bool m_ran = false;
};

} // namespace hyplas::ppuvm
