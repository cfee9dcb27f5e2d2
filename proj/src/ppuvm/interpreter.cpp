#include "hyplas/ppuvm/interpreter.hpp"

#include "hyplas/error.hpp"
#include "hyplas/simd/ops.hpp"

namespace hyplas::ppuvm {

using ruledsl::Opcode;
using ruledsl::Shape;

namespace {

Value initial(ruledsl::StateSlot const& s)
{
	Value v;
	if (s.type.shape == Shape::vector) {
		v.vector = simd::Vector::splat(s.type.lane, s.init);
	} else {
		v.scalar = s.init;
	}
	return v;
}

} // namespace

StateStore::StateStore(ruledsl::BytecodeProgram const& program, std::size_t processors)
{
	m_static.resize(processors);
	for (auto const& s : program.states) {
		m_global.push_back(s.global);
		m_shared.push_back(initial(s));
		for (auto& p : m_static) {
			p.push_back(initial(s));
		}
	}
}

Value& StateStore::slot(std::size_t index, std::uint32_t processor)
{
	return m_global.at(index) ? m_shared[index] : m_static.at(processor).at(index);
}

Value const& StateStore::slot(std::size_t index, std::uint32_t processor) const
{
	return m_global.at(index) ? m_shared[index] : m_static.at(processor).at(index);
}

Machine::Machine(
    ruledsl::BytecodeProgram const& program, std::uint32_t processor, StateStore& state,
    CoreAccess& core, RecordSink* sink) :
    m_program(&program),
    m_tables(&program.tables.at(processor)),
    m_processor(processor),
    m_state(&state),
    m_core(&core),
    m_sink(sink),
    m_regs(program.registers.size())
{
	for (std::size_t i = 0; i < m_regs.size(); ++i) {
		if (program.registers[i].shape == Shape::vector) {
			m_regs[i].vector = simd::Vector(program.registers[i].lane);
		}
	}
}

SynapseArrayView const& Machine::synapses(std::uint16_t view) const
{
	auto const& v = m_tables->synapses.at(view);
	if (!v) {
		throw Error(Errc::UnknownView, "synapses[" + std::to_string(view) + "] is absent on this processor");
	}
	return *v;
}

NeuronView const& Machine::neurons(std::uint16_t view) const
{
	auto const& v = m_tables->neurons.at(view);
	if (!v) {
		throw Error(Errc::UnknownView, "neurons[" + std::to_string(view) + "] is absent on this processor");
	}
	return *v;
}

std::size_t Machine::view_rows(std::uint16_t view) const
{
	auto const& v = m_tables->synapses.at(view);
	return v ? v->rows.size() : 0;
}

std::uint16_t Machine::row(std::uint16_t view, std::uint16_t reg) const
{
	return synapses(view).rows.at(static_cast<std::size_t>(m_regs[reg].scalar));
}

bool Machine::next_is_external() const
{
	if (done()) {
		return false;
	}
	auto const& i = m_program->code[m_pc];
	switch (i.op) {
		case Opcode::rdw:
		case Opcode::wrw:
		case Opcode::rdcnt:
		case Opcode::rdcor: return true;
		case Opcode::ld:
		case Opcode::st: return m_program->states[static_cast<std::size_t>(i.imm)].global;
		default: return false;
	}
}

void Machine::step()
{
	auto const& p = *m_program;
	auto const& i = p.code.at(m_pc);
	m_cycles += ruledsl::instr_cycles(p, m_pc, m_processor);
	auto next = m_pc + 1;
	auto& dst = m_regs[i.dst];
	auto const& a = m_regs[i.a];
	auto const& b = m_regs[i.b];
	switch (i.op) {
		case Opcode::sconst: dst.scalar = p.constants.at(static_cast<std::size_t>(i.imm)).value; break;
		case Opcode::spid: dst.scalar = static_cast<std::int32_t>(m_processor); break;
		case Opcode::sop:
			dst.scalar = simd::lane_eval(i.vop, i.lane, a.scalar, simd::is_shift(i.vop) ? i.imm : b.scalar);
			break;
		case Opcode::vop:
			if (simd::is_shift(i.vop)) {
				dst.vector = simd::vec_shift(i.vop, a.vector, static_cast<unsigned>(i.imm));
			} else if (simd::is_unary(i.vop)) {
				dst.vector = simd::vec_eval(i.vop, a.vector);
			} else {
				dst.vector = simd::vec_eval(i.vop, a.vector, b.vector);
			}
			break;
		case Opcode::splat: dst.vector = simd::Vector::splat(i.lane, a.scalar); break;
		case Opcode::scvt: dst.scalar = simd::lane_convert(i.lane, a.scalar); break;
		case Opcode::vcvt: dst.vector = simd::vec_convert(a.vector, i.lane); break;
		case Opcode::ld: dst = m_state->slot(static_cast<std::size_t>(i.imm), m_processor); break;
		case Opcode::st: m_state->slot(static_cast<std::size_t>(i.imm), m_processor) = a; break;
		case Opcode::rdw: {
			auto const& v = synapses(i.view);
			dst.vector = m_core->read_weights(v.hemisphere, row(i.view, i.b), v.columns);
			break;
		}
		case Opcode::wrw: {
			auto const& v = synapses(i.view);
			m_core->write_weights(v.hemisphere, row(i.view, i.b), v.columns, a.vector);
			break;
		}
		case Opcode::rdcnt: {
			auto const& v = neurons(i.view);
			dst.vector = m_core->read_counters(v.hemisphere, v.columns, (i.flags & ruledsl::kFlagReset) != 0);
			break;
		}
		case Opcode::rdcor: {
			auto const& v = synapses(i.view);
			dst.vector = m_core->read_correlation(
			    v.hemisphere, row(i.view, i.b), v.columns, (i.flags & ruledsl::kFlagCausal) != 0,
			    (i.flags & ruledsl::kFlagReset) != 0);
			break;
		}
		case Opcode::rec:
			if (m_sink) {
				auto const r = i.view_kind == ruledsl::ViewKind::synapses ? b.scalar : 0;
				m_sink->record(
				    static_cast<std::size_t>(i.imm), i.view_kind, i.view, static_cast<std::uint16_t>(r),
				    a.vector);
			}
			break;
		case Opcode::guard: {
			bool const present = i.view_kind == ruledsl::ViewKind::synapses
			                         ? m_tables->synapses.at(i.view).has_value()
			                         : m_tables->neurons.at(i.view).has_value();
			if (!present) {
				next = static_cast<std::size_t>(i.imm);
			}
			break;
		}
		case Opcode::loop:
			dst.scalar = 0;
			if (view_rows(i.view) == 0) {
				next = static_cast<std::size_t>(i.imm);
			}
			break;
		case Opcode::endloop: {
			auto& r = m_regs[i.a];
			++r.scalar;
			if (static_cast<std::size_t>(r.scalar) < view_rows(i.view)) {
				next = static_cast<std::size_t>(i.imm);
			}
			break;
		}
	}
	m_pc = next;
}

void Machine::run()
{
	while (!done()) {
		step();
	}
}

} // namespace hyplas::ppuvm
