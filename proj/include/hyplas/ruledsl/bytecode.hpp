#pragma once

#include "hyplas/observable.hpp"
#include "hyplas/ruledsl/typecheck.hpp"
#include "hyplas/views.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hyplas::ruledsl {

enum class Opcode : std::uint8_t
{
	sconst,  // %d = constant pool entry
	spid,    // %d = processor id
	sop,     // scalar lane op
	vop,     // vector lane op
	splat,   // broadcast scalar to vector
	scvt,    // scalar conversion
	vcvt,    // vector conversion
	ld,      // load state slot
	st,      // store state slot
	rdw,     // read weight row
	wrw,     // write weight row
	rdcnt,   // read spike counters
	rdcor,   // read correlation row
	rec,     // record observable
	guard,   // skip to target unless the view exists on this processor
	loop,    // begin row loop
	endloop, // next row
};

inline constexpr std::size_t kOpcodeCount = 17;

std::string_view to_string(Opcode op);

/// Instruction flag bits for counter and correlation reads.
inline constexpr std::uint8_t kFlagReset = 1;
inline constexpr std::uint8_t kFlagCausal = 2;

struct Instr
{
	Opcode op = Opcode::sconst;
	simd::VecOp vop = simd::VecOp::add_sat;
	LaneType lane = LaneType::u8; // operand lane (sop, vop, splat), target lane (cvt)
	LaneType from = LaneType::u8; // source lane (cvt)
	std::uint16_t dst = 0;
	std::uint16_t a = 0;
	std::uint16_t b = 0;
	std::int32_t imm = 0; // shift amount, constant/state/observable index, jump target
	ViewKind view_kind = ViewKind::synapses;
	std::uint16_t view = 0;
	std::uint8_t flags = 0;

	friend bool operator==(Instr const&, Instr const&) = default;
};

struct Constant
{
	LaneType lane = LaneType::i16;
	std::int32_t value = 0;

	friend bool operator==(Constant const&, Constant const&) = default;
};

struct StateSlot
{
	std::string name;
	bool global = false;
	Type type;
	std::int32_t init = 0;

	friend bool operator==(StateSlot const&, StateSlot const&) = default;
};

/// Cycle costs of the embedded processor model.
struct CostTable
{
	std::uint32_t vector_per_hw = 1; // per 128-byte hardware vector
	std::uint32_t scalar = 1;
	std::uint32_t intrinsic_row = 8;
	std::uint32_t loop_iteration = 2;
	std::uint32_t packed_entry = 1;
	std::uint32_t unpacked_row = 8;

	friend bool operator==(CostTable const&, CostTable const&) = default;
};

struct BytecodeProgram
{
	std::string rule;
	CostTable costs;
	std::uint32_t synapse_views = 0;
	std::uint32_t neuron_views = 0;
	std::vector<Constant> constants;
	std::vector<StateSlot> states;
	std::vector<ObservableDecl> observables;
	std::vector<Type> registers;
	std::vector<Instr> code;
	RuleViews tables; // location tables, one entry per processor

	friend bool operator==(BytecodeProgram const&, BytecodeProgram const&) = default;
};

/// Combined instruction and data memory available to one program image.
inline constexpr std::size_t kImageBudgetBytes = (16 + 128) * 1024;

/// Location-table words a processor's tables occupy.
std::size_t table_entries(ProcessorViews const& views);

/// Image size: one 32-bit word per instruction, constant and location entry, plus state storage
/// (static state once per processor).
std::size_t image_bytes(BytecodeProgram const& program);

/// Cycles of one execution of instruction `index` on `processor` (endloop: per iteration).
std::uint64_t instr_cycles(BytecodeProgram const& program, std::size_t index, std::size_t processor);

/// Checks operand types, jump targets and table references. Throws Error(TypeMismatch) on
/// inconsistency.
void validate(BytecodeProgram const& program);

/// Lowers a checked kernel against the per-processor views. Throws BudgetExceeded when the
/// image does not fit, unless `enforce_budget` is false.
BytecodeProgram lower(
    TypedKernel const& kernel, RuleViews const& views, CostTable const& costs = {},
    bool enforce_budget = true);

/// Exact cycle count of one kernel execution on `processor`, derived from the instruction stream
/// and location tables without executing it.
std::uint64_t estimate_cycles(BytecodeProgram const& program, std::size_t processor);

std::string disassemble(BytecodeProgram const& program);

/// Inverse of disassemble(). Throws PositionedError(SyntaxError) on malformed listings.
BytecodeProgram parse_listing(std::string_view text);

} // namespace hyplas::ruledsl
