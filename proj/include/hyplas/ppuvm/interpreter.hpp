#pragma once

#include "hyplas/core_access.hpp"
#include "hyplas/ruledsl/bytecode.hpp"

#include <cstdint>
#include <vector>

namespace hyplas::ppuvm {

/// Scalar or vector register / state value.
struct Value
{
	std::int32_t scalar = 0;
	simd::Vector vector;
};

/// Persistent kernel state of one rule: static slots per processor, global slots shared.
class StateStore
{
public:
	StateStore() = default;
	StateStore(ruledsl::BytecodeProgram const& program, std::size_t processors);

	Value& slot(std::size_t index, std::uint32_t processor);
	Value const& slot(std::size_t index, std::uint32_t processor) const;

private:
	std::vector<bool> m_global;
	std::vector<std::vector<Value>> m_static; // [processor][slot]
	std::vector<Value> m_shared;
};

/// Destination of rec instructions. `row` is the row index within the view (0 for neurons).
class RecordSink
{
public:
	virtual ~RecordSink() = default;
	virtual void record(
	    std::size_t observable, ruledsl::ViewKind kind, std::uint16_t view, std::uint16_t row,
	    simd::Vector const& value) = 0;
};

/// Resumable interpreter for one kernel execution on one processor.
class Machine
{
public:
	Machine(
	    ruledsl::BytecodeProgram const& program, std::uint32_t processor, StateStore& state,
	    CoreAccess& core, RecordSink* sink);

	bool done() const { return m_pc >= m_program->code.size(); }
	/// Cycles consumed so far.
	std::uint64_t cycles() const { return m_cycles; }
	/// Whether the next instruction reads or writes analog-core or shared state.
	bool next_is_external() const;
	void step();
	void run();

	Value const& reg(std::size_t index) const { return m_regs.at(index); }

private:
	SynapseArrayView const& synapses(std::uint16_t view) const;
	NeuronView const& neurons(std::uint16_t view) const;
	std::uint16_t row(std::uint16_t view, std::uint16_t reg) const;
	std::size_t view_rows(std::uint16_t view) const;

	ruledsl::BytecodeProgram const* m_program;
	ProcessorViews const* m_tables;
	std::uint32_t m_processor;
	StateStore* m_state;
	CoreAccess* m_core;
	RecordSink* m_sink;
	std::vector<Value> m_regs;
	std::size_t m_pc = 0;
	std::uint64_t m_cycles = 0;
};

} // namespace hyplas::ppuvm
