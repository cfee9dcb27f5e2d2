#include "hyplas/ruledsl/bytecode.hpp"

#include <array>
#include <sstream>

namespace hyplas::ruledsl {

namespace {

constexpr std::array<std::string_view, kOpcodeCount> kOpcodeNames = {
    "sconst", "spid", "sop", "vop",   "splat", "scvt",  "vcvt",  "ld",      "st",
    "rdw",    "wrw",  "rdcnt", "rdcor", "rec", "guard", "loop", "endloop",
};

std::size_t hw_vectors(LaneType t)
{
	return simd::kRowLanes * simd::lane_bytes(t) / simd::kHwVectorBytes;
}

std::size_t view_count(BytecodeProgram const& p, ViewKind k)
{
	return k == ViewKind::synapses ? p.synapse_views : p.neuron_views;
}

bool view_present(ProcessorViews const& t, ViewKind k, std::size_t index)
{
	return k == ViewKind::synapses ? t.synapses.at(index).has_value()
	                               : t.neurons.at(index).has_value();
}

std::vector<std::uint16_t> const* view_columns(ProcessorViews const& t, ViewKind k, std::size_t i)
{
	if (k == ViewKind::synapses) {
		return t.synapses.at(i) ? &t.synapses[i]->columns : nullptr;
	}
	return t.neurons.at(i) ? &t.neurons[i]->columns : nullptr;
}

std::size_t view_rows(ProcessorViews const& t, std::size_t i)
{
	return t.synapses.at(i) ? t.synapses[i]->rows.size() : 0;
}

[[noreturn]] void invalid(std::size_t pc, std::string const& what)
{
	throw Error(Errc::TypeMismatch, "instruction " + std::to_string(pc) + ": " + what);
}

} // namespace

std::string_view to_string(Opcode op)
{
	return kOpcodeNames.at(static_cast<std::size_t>(op));
}

std::uint64_t instr_cycles(BytecodeProgram const& p, std::size_t index, std::size_t processor)
{
	auto const& i = p.code.at(index);
	auto const& c = p.costs;
	switch (i.op) {
		case Opcode::sconst:
		case Opcode::spid:
		case Opcode::sop:
		case Opcode::scvt:
		case Opcode::guard: return c.scalar;
		case Opcode::vop:
			return c.vector_per_hw *
			       std::max(hw_vectors(i.lane), hw_vectors(p.registers.at(i.dst).lane));
		case Opcode::splat: return c.vector_per_hw * hw_vectors(i.lane);
		case Opcode::vcvt: return c.vector_per_hw * std::max(hw_vectors(i.lane), hw_vectors(i.from));
		case Opcode::ld:
		case Opcode::st: {
			auto const& t = p.states.at(static_cast<std::size_t>(i.imm)).type;
			return t.shape == Shape::vector ? c.vector_per_hw * hw_vectors(t.lane) : c.scalar;
		}
		case Opcode::rdw:
		case Opcode::wrw:
		case Opcode::rdcnt:
		case Opcode::rdcor: return c.intrinsic_row;
		case Opcode::rec: {
			auto const& o = p.observables.at(static_cast<std::size_t>(i.imm));
			if (o.layout == RecordLayout::unpacked) {
				return c.unpacked_row;
			}
			auto const* cols = view_columns(p.tables.at(processor), i.view_kind, i.view);
			return cols ? c.packed_entry * cols->size() : 0;
		}
		case Opcode::loop: return 0;
		case Opcode::endloop: return c.loop_iteration;
	}
	return 0;
}

namespace {

std::uint64_t range_cycles(
    BytecodeProgram const& p, std::size_t begin, std::size_t end, std::size_t processor)
{
	std::uint64_t total = 0;
	auto const& tables = p.tables.at(processor);
	std::size_t pc = begin;
	while (pc < end) {
		auto const& i = p.code[pc];
		if (i.op == Opcode::guard) {
			total += instr_cycles(p, pc, processor);
			pc = view_present(tables, i.view_kind, i.view) ? pc + 1 : static_cast<std::size_t>(i.imm);
		} else if (i.op == Opcode::loop) {
			auto const after = static_cast<std::size_t>(i.imm);
			auto const rows = view_rows(tables, i.view);
			auto const body = range_cycles(p, pc + 1, after - 1, processor);
			total += rows * (body + instr_cycles(p, after - 1, processor));
			pc = after;
		} else {
			total += instr_cycles(p, pc, processor);
			++pc;
		}
	}
	return total;
}

} // namespace

std::uint64_t estimate_cycles(BytecodeProgram const& program, std::size_t processor)
{
	return range_cycles(program, 0, program.code.size(), processor);
}

void validate(BytecodeProgram const& p)
{
	auto const nreg = p.registers.size();
	auto const ncode = p.code.size();
	for (auto const& t : p.tables) {
		if (t.synapses.size() != p.synapse_views || t.neurons.size() != p.neuron_views) {
			throw Error(Errc::TypeMismatch, "location tables do not match the view counts");
		}
	}
	std::vector<std::size_t> open_loops;
	for (std::size_t pc = 0; pc < ncode; ++pc) {
		auto const& i = p.code[pc];
		auto reg = [&](std::uint16_t r) -> Type const& {
			if (r >= nreg) {
				invalid(pc, "register %" + std::to_string(r) + " out of range");
			}
			return p.registers[r];
		};
		auto expect = [&](std::uint16_t r, Type t, char const* what) {
			if (!(reg(r) == t)) {
				invalid(pc, std::string(what) + " must be " + to_string(t) + ", is " + to_string(reg(r)));
			}
		};
		auto check_view = [&](ViewKind k) {
			if (i.view_kind != k || i.view >= view_count(p, k)) {
				invalid(pc, "bad view reference");
			}
		};
		auto const scalar = [](LaneType l) { return Type{l, Shape::scalar}; };
		auto const vector = [](LaneType l) { return Type{l, Shape::vector}; };
		switch (i.op) {
			case Opcode::sconst:
				if (i.imm < 0 || static_cast<std::size_t>(i.imm) >= p.constants.size()) {
					invalid(pc, "constant index out of range");
				}
				expect(i.dst, scalar(p.constants[static_cast<std::size_t>(i.imm)].lane), "destination");
				break;
			case Opcode::spid: expect(i.dst, scalar(LaneType::u8), "destination"); break;
			case Opcode::sop:
			case Opcode::vop: {
				auto const shape = i.op == Opcode::sop ? Shape::scalar : Shape::vector;
				expect(i.a, {i.lane, shape}, "left operand");
				std::optional<LaneType> result;
				if (simd::is_unary(i.vop)) {
					result = simd::unary_result(i.vop, i.lane);
				} else if (simd::is_shift(i.vop)) {
					auto const bits = static_cast<std::int32_t>(simd::lane_bytes(i.lane) * 8);
					if (i.imm < 0 || i.imm >= bits) {
						invalid(pc, "shift amount out of range");
					}
					result = i.lane;
				} else {
					auto const rhs = simd::expected_rhs(i.vop, i.lane);
					if (!rhs) {
						invalid(pc, "operation not defined for " + std::string(simd::to_string(i.lane)));
					}
					expect(i.b, {*rhs, shape}, "right operand");
					result = simd::binary_result(i.vop, i.lane, *rhs);
				}
				if (!result) {
					invalid(pc, "ill-typed operation");
				}
				expect(i.dst, {*result, shape}, "destination");
				break;
			}
			case Opcode::splat:
				expect(i.a, scalar(i.lane), "operand");
				expect(i.dst, vector(i.lane), "destination");
				break;
			case Opcode::scvt:
			case Opcode::vcvt: {
				auto const shape = i.op == Opcode::scvt ? Shape::scalar : Shape::vector;
				expect(i.a, {i.from, shape}, "operand");
				expect(i.dst, {i.lane, shape}, "destination");
				break;
			}
			case Opcode::ld:
			case Opcode::st: {
				if (i.imm < 0 || static_cast<std::size_t>(i.imm) >= p.states.size()) {
					invalid(pc, "state index out of range");
				}
				auto const& t = p.states[static_cast<std::size_t>(i.imm)].type;
				expect(i.op == Opcode::ld ? i.dst : i.a, t, "state value");
				break;
			}
			case Opcode::rdw:
				check_view(ViewKind::synapses);
				expect(i.b, scalar(LaneType::u16), "row");
				expect(i.dst, vector(LaneType::u8), "destination");
				break;
			case Opcode::wrw:
				check_view(ViewKind::synapses);
				expect(i.b, scalar(LaneType::u16), "row");
				expect(i.a, vector(LaneType::u8), "weights");
				break;
			case Opcode::rdcnt:
				check_view(ViewKind::neurons);
				expect(i.dst, vector(LaneType::u16), "destination");
				break;
			case Opcode::rdcor:
				check_view(ViewKind::synapses);
				expect(i.b, scalar(LaneType::u16), "row");
				expect(i.dst, vector(LaneType::u8), "destination");
				break;
			case Opcode::rec: {
				if (i.imm < 0 || static_cast<std::size_t>(i.imm) >= p.observables.size()) {
					invalid(pc, "observable index out of range");
				}
				auto const& o = p.observables[static_cast<std::size_t>(i.imm)];
				bool const syn = o.scope == ObservableScope::synapse;
				check_view(syn ? ViewKind::synapses : ViewKind::neurons);
				if (syn) {
					expect(i.b, scalar(LaneType::u16), "row");
				}
				expect(i.a, vector(o.dtype), "value");
				break;
			}
			case Opcode::guard:
				if (i.view >= view_count(p, i.view_kind) || i.imm <= static_cast<std::int32_t>(pc) ||
				    static_cast<std::size_t>(i.imm) > ncode) {
					invalid(pc, "bad guard");
				}
				break;
			case Opcode::loop: {
				check_view(ViewKind::synapses);
				expect(i.dst, scalar(LaneType::u16), "row");
				auto const after = static_cast<std::size_t>(i.imm);
				if (i.imm <= static_cast<std::int32_t>(pc) + 1 || after > ncode ||
				    p.code[after - 1].op != Opcode::endloop ||
				    p.code[after - 1].imm != static_cast<std::int32_t>(pc + 1) ||
				    p.code[after - 1].a != i.dst) {
					invalid(pc, "unmatched loop");
				}
				open_loops.push_back(pc);
				break;
			}
			case Opcode::endloop:
				if (open_loops.empty() || static_cast<std::size_t>(i.imm) != open_loops.back() + 1) {
					invalid(pc, "unmatched endloop");
				}
				open_loops.pop_back();
				break;
		}
	}
	if (!open_loops.empty()) {
		throw Error(Errc::TypeMismatch, "unterminated loop");
	}
}

} // namespace hyplas::ruledsl
