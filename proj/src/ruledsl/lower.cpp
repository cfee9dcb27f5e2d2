#include "hyplas/ruledsl/bytecode.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace hyplas::ruledsl {

namespace {

using simd::VecOp;

struct ViewKey
{
	ViewKind kind;
	std::uint32_t index;

	friend auto operator<=>(ViewKey const&, ViewKey const&) = default;
};

using ViewSet = std::set<ViewKey>;

struct Local
{
	std::uint16_t reg;
	ViewSet deps;
};

class Lowerer
{
public:
	Lowerer(TypedKernel const& k, RuleViews const& views, CostTable const& costs, bool enforce) :
	    m_kernel(k), m_enforce(enforce)
	{
		m_prog.rule = k.ast.rule_name;
		m_prog.costs = costs;
		m_prog.synapse_views = k.signature.synapse_views;
		m_prog.neuron_views = k.signature.neuron_views;
		m_prog.observables = k.signature.observables;
		m_prog.tables = views;
		for (auto const& t : m_prog.tables) {
			if (t.synapses.size() != m_prog.synapse_views || t.neurons.size() != m_prog.neuron_views) {
				throw Error(Errc::UnknownView, "view tables do not match the rule signature");
			}
		}
	}

	BytecodeProgram run()
	{
		for (std::size_t i = 0; i < m_kernel.ast.states.size(); ++i) {
			auto const& s = m_kernel.ast.states[i];
			m_prog.states.push_back(
			    {s.name, s.global, s.type, static_cast<std::int32_t>(s.init)});
			m_state_index[s.name] = static_cast<std::int32_t>(i);
		}
		m_scopes.emplace_back();
		block(m_kernel.ast.body, {});
		auto const bytes = image_bytes(m_prog);
		if (m_enforce && bytes > kImageBudgetBytes) {
			throw Error(
			    Errc::BudgetExceeded, "program image of rule '" + m_prog.rule + "' needs " +
			                              std::to_string(bytes) + " bytes, budget is " +
			                              std::to_string(kImageBudgetBytes));
		}
		validate(m_prog);
		return std::move(m_prog);
	}

private:
	std::uint16_t reg(Type t)
	{
		if (m_prog.registers.size() >= 0xffff) {
			throw Error(Errc::BudgetExceeded, "kernel needs too many registers");
		}
		m_prog.registers.push_back(t);
		return static_cast<std::uint16_t>(m_prog.registers.size() - 1);
	}

	Type type_of(std::uint16_t r) const { return m_prog.registers[r]; }

	std::size_t emit(Instr i)
	{
		m_prog.code.push_back(i);
		return m_prog.code.size() - 1;
	}

	std::int32_t constant(LaneType lane, std::int64_t value)
	{
		Constant const c{lane, static_cast<std::int32_t>(value)};
		auto const it = std::find(m_prog.constants.begin(), m_prog.constants.end(), c);
		if (it != m_prog.constants.end()) {
			return static_cast<std::int32_t>(it - m_prog.constants.begin());
		}
		m_prog.constants.push_back(c);
		return static_cast<std::int32_t>(m_prog.constants.size() - 1);
	}

	Local const* lookup(std::string const& name) const
	{
		for (auto it = m_scopes.rbegin(); it != m_scopes.rend(); ++it) {
			if (auto f = it->find(name); f != it->end()) {
				return &f->second;
			}
		}
		return nullptr;
	}

	// Views a statement touches, directly or through the locals it reads.
	void deps_of(Expr const& e, ViewSet& out) const
	{
		if (e.kind == ExprKind::name) {
			if (auto const* l = lookup(e.name)) {
				out.insert(l->deps.begin(), l->deps.end());
			}
		}
		for (auto const& o : e.operands) {
			deps_of(*o, out);
		}
		for (auto const& a : e.args) {
			if (auto const* v = std::get_if<ViewRef>(&a.value)) {
				out.insert({v->kind, v->index});
			} else if (auto const* p = std::get_if<ExprPtr>(&a.value)) {
				deps_of(**p, out);
			}
		}
	}

	ViewSet deps_of(Stmt const& s) const
	{
		ViewSet out;
		switch (s.kind) {
			case StmtKind::for_rows:
			case StmtKind::record: out.insert({s.view.kind, s.view.index}); break;
			default: break;
		}
		if (s.kind != StmtKind::for_rows) {
			deps_of(*s.value, out);
		}
		return out;
	}

	// Consecutive statements needing the same views share one guard region.
	void block(std::vector<Stmt> const& body, ViewSet const& guarded)
	{
		m_scopes.emplace_back();
		ViewSet region;
		std::vector<std::size_t> guards;
		auto close = [&] {
			for (auto g : guards) {
				m_prog.code[g].imm = static_cast<std::int32_t>(m_prog.code.size());
			}
			guards.clear();
			region.clear();
		};
		for (auto const& s : body) {
			auto deps = deps_of(s);
			ViewSet needed;
			for (auto const& v : deps) {
				if (!guarded.count(v)) {
					needed.insert(v);
				}
			}
			if (needed != region) {
				close();
				region = needed;
				for (auto const& v : needed) {
					Instr g;
					g.op = Opcode::guard;
					g.view_kind = v.kind;
					g.view = static_cast<std::uint16_t>(v.index);
					guards.push_back(emit(g));
				}
			}
			ViewSet inner = guarded;
			inner.insert(deps.begin(), deps.end());
			statement(s, inner);
			if (s.kind == StmtKind::let) {
				m_scopes.back()[s.name].deps = std::move(deps);
			}
		}
		close();
		m_scopes.pop_back();
	}

	std::uint16_t vectorize(std::uint16_t r)
	{
		auto const t = type_of(r);
		if (t.shape == Shape::vector) {
			return r;
		}
		Instr i;
		i.op = Opcode::splat;
		i.lane = t.lane;
		i.a = r;
		i.dst = reg({t.lane, Shape::vector});
		emit(i);
		return i.dst;
	}

	void statement(Stmt const& s, ViewSet const& guarded)
	{
		switch (s.kind) {
			case StmtKind::let: m_scopes.back()[s.name] = Local{expr(*s.value), {}}; break;
			case StmtKind::assign: {
				auto const k = m_state_index.at(s.name);
				auto r = expr(*s.value);
				if (m_prog.states[static_cast<std::size_t>(k)].type.shape == Shape::vector) {
					r = vectorize(r);
				}
				Instr i;
				i.op = Opcode::st;
				i.imm = k;
				i.a = r;
				emit(i);
				break;
			}
			case StmtKind::for_rows: {
				Instr l;
				l.op = Opcode::loop;
				l.view_kind = s.view.kind;
				l.view = static_cast<std::uint16_t>(s.view.index);
				l.dst = reg({LaneType::u16, Shape::scalar});
				auto const at = emit(l);
				m_scopes.emplace_back();
				m_scopes.back()[s.name] = Local{l.dst, {}};
				block(s.body, guarded);
				m_scopes.pop_back();
				Instr e = l;
				e.op = Opcode::endloop;
				e.dst = 0;
				e.a = l.dst;
				e.imm = static_cast<std::int32_t>(at + 1);
				emit(e);
				m_prog.code[at].imm = static_cast<std::int32_t>(m_prog.code.size());
				break;
			}
			case StmtKind::call: call(*s.value); break;
			case StmtKind::record: {
				auto const it = std::find_if(
				    m_prog.observables.begin(), m_prog.observables.end(),
				    [&](auto const& o) { return o.name == s.name; });
				Instr i;
				i.op = Opcode::rec;
				i.imm = static_cast<std::int32_t>(it - m_prog.observables.begin());
				i.view_kind = s.view.kind;
				i.view = static_cast<std::uint16_t>(s.view.index);
				if (s.row) {
					i.b = lookup(*s.row)->reg;
				}
				i.a = vectorize(expr(*s.value));
				emit(i);
				break;
			}
		}
	}

	std::uint16_t row_of(Expr const& call, std::size_t arg) const
	{
		return lookup(std::get<ExprPtr>(call.args[arg].value)->name)->reg;
	}

	static ViewRef const& view_of(Expr const& call, std::size_t arg)
	{
		return std::get<ViewRef>(call.args[arg].value);
	}

	std::uint16_t call(Expr const& e)
	{
		Instr i;
		auto set_view = [&](std::size_t arg) {
			auto const& v = view_of(e, arg);
			i.view_kind = v.kind;
			i.view = static_cast<std::uint16_t>(v.index);
		};
		switch (e.builtin) {
			case Builtin::read_weights:
				i.op = Opcode::rdw;
				set_view(0);
				i.b = row_of(e, 1);
				break;
			case Builtin::write_weights:
				i.op = Opcode::wrw;
				set_view(0);
				i.a = vectorize(expr(*std::get<ExprPtr>(e.args[2].value)));
				i.b = row_of(e, 1);
				emit(i);
				return 0;
			case Builtin::read_counters:
				i.op = Opcode::rdcnt;
				set_view(0);
				i.flags = std::get<Flag>(e.args[1].value) == Flag::reset ? kFlagReset : 0;
				break;
			case Builtin::read_correlation:
				i.op = Opcode::rdcor;
				set_view(0);
				i.b = row_of(e, 1);
				i.flags = static_cast<std::uint8_t>(
				    (std::get<Flag>(e.args[2].value) == Flag::causal ? kFlagCausal : 0) |
				    (std::get<Flag>(e.args[3].value) == Flag::reset ? kFlagReset : 0));
				break;
			case Builtin::processor_id: i.op = Opcode::spid; break;
			case Builtin::sign:
			case Builtin::abs: return unary(e.vec_op, arg(e, 0), *e.type);
			case Builtin::min:
			case Builtin::max:
			case Builtin::sat_sub: {
				auto const a = arg(e, 0);
				auto const b = arg(e, 1);
				return binary(e.vec_op, a, b, *e.type, 0);
			}
			case Builtin::to_u8:
			case Builtin::to_i8:
			case Builtin::to_u16:
			case Builtin::to_i16: {
				auto const src = arg(e, 0);
				auto const from = type_of(src);
				if (from.lane == e.type->lane) {
					return src;
				}
				i.op = from.shape == Shape::vector ? Opcode::vcvt : Opcode::scvt;
				i.from = from.lane;
				i.lane = e.type->lane;
				i.a = src;
				break;
			}
			case Builtin::none: throw Error(Errc::TypeMismatch, "unchecked call '" + e.name + "'");
		}
		i.dst = reg(*e.type);
		emit(i);
		return i.dst;
	}

	std::uint16_t arg(Expr const& e, std::size_t i) { return expr(*std::get<ExprPtr>(e.args[i].value)); }

	std::uint16_t unary(VecOp op, std::uint16_t a, Type result)
	{
		Instr i;
		i.op = result.shape == Shape::vector ? Opcode::vop : Opcode::sop;
		i.vop = op;
		i.lane = type_of(a).lane;
		i.a = a;
		i.dst = reg(result);
		emit(i);
		return i.dst;
	}

	std::uint16_t binary(VecOp op, std::uint16_t a, std::uint16_t b, Type result, std::int32_t imm)
	{
		Instr i;
		i.vop = op;
		i.imm = imm;
		if (result.shape == Shape::vector) {
			i.op = Opcode::vop;
			a = vectorize(a);
			if (!simd::is_shift(op)) {
				b = vectorize(b);
			}
		} else {
			i.op = Opcode::sop;
		}
		i.lane = type_of(a).lane;
		i.a = a;
		i.b = b;
		i.dst = reg(result);
		emit(i);
		return i.dst;
	}

	std::uint16_t expr(Expr const& e)
	{
		switch (e.kind) {
			case ExprKind::literal: {
				Instr i;
				i.op = Opcode::sconst;
				i.imm = constant(e.type->lane, e.literal);
				i.dst = reg(*e.type);
				emit(i);
				return i.dst;
			}
			case ExprKind::name: {
				if (auto const* l = lookup(e.name)) {
					return l->reg;
				}
				if (auto const s = m_state_index.find(e.name); s != m_state_index.end()) {
					Instr i;
					i.op = Opcode::ld;
					i.imm = s->second;
					i.dst = reg(*e.type);
					emit(i);
					return i.dst;
				}
				for (auto const& p : m_kernel.ast.params) {
					if (p.name == e.name) {
						Instr i;
						i.op = Opcode::sconst;
						i.imm = constant(p.type, p.value);
						i.dst = reg(*e.type);
						emit(i);
						return i.dst;
					}
				}
				throw Error(Errc::UnknownName, "unresolved name '" + e.name + "'");
			}
			case ExprKind::negate: return unary(VecOp::neg_sat, expr(*e.operands[0]), *e.type);
			case ExprKind::binary: {
				if (simd::is_shift(e.vec_op)) {
					return binary(
					    e.vec_op, expr(*e.operands[0]), 0, *e.type,
					    static_cast<std::int32_t>(e.operands[1]->literal));
				}
				auto a = expr(*e.operands[0]);
				auto b = expr(*e.operands[1]);
				if (e.swapped) {
					std::swap(a, b);
				}
				return binary(e.vec_op, a, b, *e.type, 0);
			}
			case ExprKind::call: return call(e);
		}
		throw Error(Errc::TypeMismatch, "malformed expression");
	}

	TypedKernel const& m_kernel;
	bool m_enforce;
	BytecodeProgram m_prog;
	std::map<std::string, std::int32_t> m_state_index;
	std::vector<std::map<std::string, Local>> m_scopes;
};

} // namespace

std::size_t table_entries(ProcessorViews const& views)
{
	std::size_t n = 0;
	for (auto const& v : views.synapses) {
		if (v) {
			n += v->rows.size() + v->columns.size();
		}
	}
	for (auto const& v : views.neurons) {
		if (v) {
			n += v->columns.size();
		}
	}
	return n;
}

std::size_t image_bytes(BytecodeProgram const& p)
{
	std::size_t words = p.code.size() + p.constants.size();
	for (auto const& t : p.tables) {
		words += table_entries(t);
	}
	std::size_t state = 0;
	for (auto const& s : p.states) {
		auto const bytes =
		    simd::lane_bytes(s.type.lane) * (s.type.shape == Shape::vector ? simd::kRowLanes : 1);
		state += bytes * (s.global ? 1 : std::max<std::size_t>(p.tables.size(), 1));
	}
	return 4 * words + state;
}

BytecodeProgram lower(
    TypedKernel const& kernel, RuleViews const& views, CostTable const& costs, bool enforce_budget)
{
	return Lowerer(kernel, views, costs, enforce_budget).run();
}

} // namespace hyplas::ruledsl
