#include "hyplas/ruledsl/typecheck.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace hyplas::ruledsl {

namespace {

using simd::VecOp;

constexpr std::array kSpikeTimeNames = {
    "spike_time", "spike_times", "last_spike", "last_spike_time", "read_spike_times", "read_spikes",
};

bool fits(LaneType t, std::int64_t v)
{
	return v >= simd::lane_min(t) && v <= simd::lane_max(t);
}

Shape join(Shape a, Shape b)
{
	return a == Shape::vector || b == Shape::vector ? Shape::vector : Shape::scalar;
}

struct Binding
{
	enum class Kind
	{
		param,
		state,
		let,
		row,
	} kind;
	Type type;
	ViewRef view; // row variables only
};

class Checker
{
public:
	explicit Checker(RuleSignature const& sig) : m_sig(sig) {}

	void run(KernelAst& ast)
	{
		push();
		for (auto const& p : ast.params) {
			declare(p.name, p.pos, {Binding::Kind::param, {p.type, Shape::scalar}, {}});
			if (!fits(p.type, p.value)) {
				throw PositionedError(
				    Errc::TypeMismatch, p.pos,
				    "value " + std::to_string(p.value) + " of param '" + p.name + "' does not fit " +
				        std::string(simd::to_string(p.type)));
			}
		}
		for (auto const& s : ast.states) {
			declare(s.name, s.pos, {Binding::Kind::state, s.type, {}});
			if (!fits(s.type.lane, s.init)) {
				throw PositionedError(
				    Errc::TypeMismatch, s.pos,
				    "initial value of '" + s.name + "' does not fit " + to_string(s.type));
			}
		}
		block(ast.body);
		pop();
	}

private:
	void push() { m_scopes.emplace_back(); }
	void pop() { m_scopes.pop_back(); }

	Binding const* lookup(std::string const& name) const
	{
		for (auto it = m_scopes.rbegin(); it != m_scopes.rend(); ++it) {
			if (auto f = it->find(name); f != it->end()) {
				return &f->second;
			}
		}
		return nullptr;
	}

	void declare(std::string const& name, SourcePos pos, Binding b)
	{
		reject_spike_time(name, pos);
		if (lookup(name)) {
			throw PositionedError(Errc::Redefinition, pos, "'" + name + "' is already defined");
		}
		m_scopes.back().emplace(name, b);
	}

	static void reject_spike_time(std::string const& name, SourcePos pos)
	{
		if (is_spike_time_name(name)) {
			throw PositionedError(
			    Errc::SpikeTimeAccess, pos,
			    "'" + name + "': spike times are not accessible to plasticity kernels");
		}
	}

	void check_view(ViewRef const& v) const
	{
		auto const count = v.kind == ViewKind::synapses ? m_sig.synapse_views : m_sig.neuron_views;
		if (v.index >= count) {
			throw PositionedError(
			    Errc::UnknownView, v.pos,
			    std::string(v.kind == ViewKind::synapses ? "synapses" : "neurons") + "[" +
			        std::to_string(v.index) + "] is not bound (rule has " + std::to_string(count) +
			        ")");
		}
	}

	void check_row(std::string const& name, SourcePos pos, ViewRef const& view) const
	{
		auto const* b = lookup(name);
		if (!b) {
			throw PositionedError(Errc::UnknownName, pos, "unknown name '" + name + "'");
		}
		if (b->kind != Binding::Kind::row || !(b->view == view)) {
			throw PositionedError(
			    Errc::TypeMismatch, pos,
			    "row index '" + name + "' must be the loop variable over the same view");
		}
	}

	void block(std::vector<Stmt>& body)
	{
		push();
		for (auto& s : body) {
			statement(s);
		}
		pop();
	}

	void statement(Stmt& s)
	{
		switch (s.kind) {
			case StmtKind::let: {
				auto const t = expr(*s.value, std::nullopt);
				declare(s.name, s.pos, {Binding::Kind::let, t, {}});
				break;
			}
			case StmtKind::assign: {
				reject_spike_time(s.name, s.pos);
				auto const* b = lookup(s.name);
				if (!b) {
					throw PositionedError(Errc::UnknownName, s.pos, "unknown name '" + s.name + "'");
				}
				if (b->kind != Binding::Kind::state) {
					throw PositionedError(
					    Errc::TypeMismatch, s.pos,
					    "'" + s.name + "' is not assignable; only static and global state is");
				}
				auto const target = b->type;
				auto const t = expr(*s.value, target.lane);
				if (t.lane != target.lane ||
				    (target.shape == Shape::scalar && t.shape == Shape::vector)) {
					throw PositionedError(
					    Errc::TypeMismatch, s.value->pos,
					    "cannot assign " + to_string(t) + " to '" + s.name + "' of type " +
					        to_string(target));
				}
				break;
			}
			case StmtKind::for_rows: {
				check_view(s.view);
				if (s.view.kind != ViewKind::synapses) {
					throw PositionedError(
					    Errc::TypeMismatch, s.view.pos, "rows() requires a synapses view");
				}
				push();
				declare(s.name, s.pos, {Binding::Kind::row, {LaneType::u16, Shape::scalar}, s.view});
				block(s.body);
				pop();
				break;
			}
			case StmtKind::call: {
				auto& e = *s.value;
				if (e.kind != ExprKind::call) {
					throw PositionedError(Errc::TypeMismatch, e.pos, "expected a call statement");
				}
				call(e, true);
				break;
			}
			case StmtKind::record: record(s); break;
		}
	}

	void record(Stmt& s)
	{
		auto const it =
		    std::find_if(m_sig.observables.begin(), m_sig.observables.end(), [&](auto const& o) {
			    return o.name == s.name;
		    });
		if (it == m_sig.observables.end()) {
			throw PositionedError(
			    Errc::UnknownObservable, s.pos, "observable '" + s.name + "' is not declared");
		}
		check_view(s.view);
		if (it->scope == ObservableScope::synapse) {
			if (s.view.kind != ViewKind::synapses || !s.row) {
				throw PositionedError(
				    Errc::TypeMismatch, s.view.pos,
				    "synapse observable '" + s.name + "' needs a synapses view and a row");
			}
			check_row(*s.row, s.view.pos, s.view);
		} else if (s.view.kind != ViewKind::neurons || s.row) {
			throw PositionedError(
			    Errc::TypeMismatch, s.view.pos,
			    "neuron observable '" + s.name + "' needs a neurons view and no row");
		}
		auto const t = expr(*s.value, it->dtype);
		if (t.lane != it->dtype) {
			throw PositionedError(
			    Errc::TypeMismatch, s.value->pos,
			    "observable '" + s.name + "' has dtype " + std::string(simd::to_string(it->dtype)) +
			        " but the value is " + to_string(t));
		}
	}

	Type literal(Expr& e, std::optional<LaneType> hint)
	{
		LaneType lane;
		if (hint && fits(*hint, e.literal)) {
			lane = *hint;
		} else if (fits(LaneType::i16, e.literal)) {
			lane = LaneType::i16;
		} else if (fits(LaneType::u16, e.literal)) {
			lane = LaneType::u16;
		} else {
			throw PositionedError(
			    Errc::TypeMismatch, e.pos, "literal " + std::to_string(e.literal) + " is out of range");
		}
		e.type = Type{lane, Shape::scalar};
		return *e.type;
	}

	// Checks two operands so that a literal adopts the other side's lane type.
	std::pair<Type, Type> operands(Expr& a, Expr& b, std::optional<LaneType> hint, bool allow_signed)
	{
		auto literal_for = [&](Expr& lit, LaneType other) {
			if (allow_signed && !simd::is_signed(other) && !fits(other, lit.literal) &&
			    fits(signed_of(other), lit.literal)) {
				return literal(lit, signed_of(other));
			}
			return literal(lit, other);
		};
		if (a.kind == ExprKind::literal && b.kind != ExprKind::literal) {
			auto const tb = expr(b, hint);
			return {literal_for(a, tb.lane), tb};
		}
		auto const ta = expr(a, hint);
		if (b.kind == ExprKind::literal) {
			return {ta, literal_for(b, ta.lane)};
		}
		return {ta, expr(b, hint)};
	}

	[[noreturn]] static void mismatch(Expr const& e, std::string_view what, Type a, Type b)
	{
		throw PositionedError(
		    Errc::TypeMismatch, e.pos,
		    std::string(what) + " is not defined for " + to_string(a) + " and " + to_string(b));
	}

	Type binary(Expr& e, std::optional<LaneType> hint)
	{
		auto& lhs = *e.operands[0];
		auto& rhs = *e.operands[1];
		if (e.op == BinaryOp::shl || e.op == BinaryOp::shr) {
			auto const t = expr(lhs, hint);
			auto const bits = static_cast<std::int64_t>(simd::lane_bytes(t.lane) * 8);
			if (rhs.kind != ExprKind::literal || rhs.literal < 0 || rhs.literal >= bits) {
				throw PositionedError(
				    Errc::TypeMismatch, rhs.pos,
				    "shift amount must be an integer literal in [0, " + std::to_string(bits - 1) +
				        "]");
			}
			rhs.type = Type{LaneType::u8, Shape::scalar};
			e.vec_op = e.op == BinaryOp::shl ? VecOp::shl_sat : VecOp::shr;
			return t;
		}
		bool const additive = e.op == BinaryOp::add || e.op == BinaryOp::sub;
		auto const [ta, tb] = operands(lhs, rhs, hint, additive);
		auto const shape = join(ta.shape, tb.shape);
		auto const a = ta.lane;
		auto const b = tb.lane;
		auto const op_name = to_string(e.op);
		switch (e.op) {
			case BinaryOp::add:
				if (a == b) {
					e.vec_op = VecOp::add_sat;
					return {a, shape};
				}
				if (!simd::is_signed(a) && b == signed_of(a)) {
					e.vec_op = VecOp::add_signed;
					return {a, shape};
				}
				if (!simd::is_signed(b) && a == signed_of(b)) {
					e.vec_op = VecOp::add_signed;
					e.swapped = true;
					return {b, shape};
				}
				mismatch(e, op_name, ta, tb);
			case BinaryOp::sub:
				if (a == b) {
					if (simd::is_signed(a)) {
						e.vec_op = VecOp::sub_sat;
						return {a, shape};
					}
					e.vec_op = VecOp::diff;
					return {signed_of(a), shape};
				}
				if (!simd::is_signed(a) && b == signed_of(a)) {
					e.vec_op = VecOp::sub_signed;
					return {a, shape};
				}
				mismatch(e, op_name, ta, tb);
			case BinaryOp::add_wrap:
			case BinaryOp::sub_wrap:
				if (a != b || simd::is_signed(a)) {
					mismatch(e, op_name, ta, tb);
				}
				e.vec_op = e.op == BinaryOp::add_wrap ? VecOp::add_wrap : VecOp::sub_wrap;
				return {a, shape};
			case BinaryOp::mul:
				if (a != b) {
					mismatch(e, op_name, ta, tb);
				}
				e.vec_op = VecOp::mul_sat;
				return {a, shape};
			default: break;
		}
		mismatch(e, op_name, ta, tb);
	}

	std::size_t expect_args(Expr const& e, std::size_t n) const
	{
		if (e.args.size() != n) {
			throw PositionedError(
			    Errc::TypeMismatch, e.pos,
			    e.name + "() takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") +
			        ", got " + std::to_string(e.args.size()));
		}
		return n;
	}

	ViewRef const& view_arg(Expr const& e, std::size_t i, ViewKind kind) const
	{
		auto const* v = std::get_if<ViewRef>(&e.args[i].value);
		if (!v) {
			throw PositionedError(
			    Errc::TypeMismatch, e.pos,
			    e.name + "(): argument " + std::to_string(i + 1) + " must be a view");
		}
		check_view(*v);
		if (v->kind != kind) {
			throw PositionedError(
			    Errc::TypeMismatch, v->pos,
			    e.name + "() requires a " +
			        std::string(kind == ViewKind::synapses ? "synapses" : "neurons") + " view");
		}
		return *v;
	}

	Expr& expr_arg(Expr& e, std::size_t i) const
	{
		auto* p = std::get_if<ExprPtr>(&e.args[i].value);
		if (!p) {
			throw PositionedError(
			    Errc::TypeMismatch, e.pos,
			    e.name + "(): argument " + std::to_string(i + 1) + " must be an expression");
		}
		return **p;
	}

	void row_arg(Expr& e, std::size_t i, ViewRef const& view) const
	{
		auto& r = expr_arg(e, i);
		if (r.kind != ExprKind::name) {
			throw PositionedError(
			    Errc::TypeMismatch, r.pos, e.name + "(): row must be a loop variable");
		}
		check_row(r.name, r.pos, view);
		r.type = Type{LaneType::u16, Shape::scalar};
	}

	void flag_arg(Expr const& e, std::size_t i, Flag a, Flag b) const
	{
		auto const* f = std::get_if<Flag>(&e.args[i].value);
		if (!f || (*f != a && *f != b)) {
			static constexpr std::array kNames = {"reset", "keep", "causal", "anticausal"};
			throw PositionedError(
			    Errc::TypeMismatch, e.pos,
			    e.name + "(): argument " + std::to_string(i + 1) + " must be '" +
			        kNames[static_cast<int>(a)] + "' or '" + kNames[static_cast<int>(b)] + "'");
		}
	}

	Type unary_arg(Expr& e, std::optional<LaneType> hint)
	{
		expect_args(e, 1);
		auto& a = expr_arg(e, 0);
		return a.kind == ExprKind::literal ? literal(a, hint) : expr(a, hint);
	}

	Type call(Expr& e, bool statement, std::optional<LaneType> hint = std::nullopt)
	{
		reject_spike_time(e.name, e.pos);
		auto const& n = e.name;
		Type result;
		if (n == "read_weights") {
			e.builtin = Builtin::read_weights;
			expect_args(e, 2);
			row_arg(e, 1, view_arg(e, 0, ViewKind::synapses));
			result = {LaneType::u8, Shape::vector};
		} else if (n == "write_weights") {
			e.builtin = Builtin::write_weights;
			expect_args(e, 3);
			row_arg(e, 1, view_arg(e, 0, ViewKind::synapses));
			auto& v = expr_arg(e, 2);
			auto const t = expr(v, LaneType::u8);
			if (t.lane != LaneType::u8) {
				throw PositionedError(
				    Errc::TypeMismatch, v.pos, "write_weights() expects u8 values, got " + to_string(t));
			}
			if (!statement) {
				throw PositionedError(
				    Errc::TypeMismatch, e.pos, "write_weights() does not produce a value");
			}
			e.type = Type{LaneType::u8, Shape::vector};
			return *e.type;
		} else if (n == "read_counters") {
			e.builtin = Builtin::read_counters;
			expect_args(e, 2);
			view_arg(e, 0, ViewKind::neurons);
			flag_arg(e, 1, Flag::reset, Flag::keep);
			result = {LaneType::u16, Shape::vector};
		} else if (n == "read_correlation") {
			e.builtin = Builtin::read_correlation;
			expect_args(e, 4);
			row_arg(e, 1, view_arg(e, 0, ViewKind::synapses));
			flag_arg(e, 2, Flag::causal, Flag::anticausal);
			flag_arg(e, 3, Flag::reset, Flag::keep);
			result = {LaneType::u8, Shape::vector};
		} else if (n == "processor_id") {
			e.builtin = Builtin::processor_id;
			expect_args(e, 0);
			result = {LaneType::u8, Shape::scalar};
		} else if (n == "sign") {
			e.builtin = Builtin::sign;
			e.vec_op = VecOp::sign;
			auto const t = unary_arg(e, hint);
			result = {LaneType::i8, t.shape};
		} else if (n == "abs") {
			e.builtin = Builtin::abs;
			e.vec_op = VecOp::abs_sat;
			auto const t = unary_arg(e, hint);
			if (!simd::is_signed(t.lane)) {
				throw PositionedError(
				    Errc::TypeMismatch, e.pos, "abs() requires a signed operand, got " + to_string(t));
			}
			result = t;
		} else if (n == "min" || n == "max" || n == "sat_sub") {
			e.builtin = n == "min" ? Builtin::min : n == "max" ? Builtin::max : Builtin::sat_sub;
			e.vec_op = n == "min" ? VecOp::min : n == "max" ? VecOp::max : VecOp::sub_sat;
			expect_args(e, 2);
			auto const [ta, tb] = operands(expr_arg(e, 0), expr_arg(e, 1), hint, false);
			if (ta.lane != tb.lane) {
				mismatch(e, n + "()", ta, tb);
			}
			result = {ta.lane, join(ta.shape, tb.shape)};
		} else if (auto const lane = simd::parse_lane_type(n)) {
			e.builtin = *lane == LaneType::u8   ? Builtin::to_u8
			            : *lane == LaneType::i8 ? Builtin::to_i8
			            : *lane == LaneType::u16 ? Builtin::to_u16
			                                    : Builtin::to_i16;
			auto const t = unary_arg(e, *lane);
			result = {*lane, t.shape};
		} else {
			throw PositionedError(Errc::UnknownName, e.pos, "unknown function '" + n + "'");
		}
		e.type = result;
		return result;
	}

	Type expr(Expr& e, std::optional<LaneType> hint)
	{
		switch (e.kind) {
			case ExprKind::literal: return literal(e, hint);
			case ExprKind::name: {
				reject_spike_time(e.name, e.pos);
				auto const* b = lookup(e.name);
				if (!b) {
					throw PositionedError(Errc::UnknownName, e.pos, "unknown name '" + e.name + "'");
				}
				if (b->kind == Binding::Kind::row) {
					throw PositionedError(
					    Errc::TypeMismatch, e.pos,
					    "row variable '" + e.name + "' can only index a view");
				}
				e.type = b->type;
				return b->type;
			}
			case ExprKind::negate: {
				auto& a = *e.operands[0];
				auto const t = a.kind == ExprKind::literal ? literal(a, hint) : expr(a, hint);
				if (!simd::is_signed(t.lane)) {
					throw PositionedError(
					    Errc::TypeMismatch, e.pos, "cannot negate unsigned " + to_string(t));
				}
				e.vec_op = VecOp::neg_sat;
				e.type = t;
				return t;
			}
			case ExprKind::binary: {
				auto const t = binary(e, hint);
				e.type = t;
				return t;
			}
			case ExprKind::call: return call(e, false, hint);
		}
		throw PositionedError(Errc::TypeMismatch, e.pos, "malformed expression");
	}

	RuleSignature const& m_sig;
	std::vector<std::map<std::string, Binding>> m_scopes;
};

} // namespace

bool is_spike_time_name(std::string_view name)
{
	return std::find(kSpikeTimeNames.begin(), kSpikeTimeNames.end(), name) != kSpikeTimeNames.end();
}

TypedKernel typecheck(KernelAst ast, RuleSignature const& signature)
{
	Checker(signature).run(ast);
	return TypedKernel{std::move(ast), signature};
}

} // namespace hyplas::ruledsl
