#pragma once

// Reference evaluator that walks the typed AST directly, independent of lowering, the
// bytecode interpreter and the SIMD kernels.

#include "hyplas/core_access.hpp"
#include "hyplas/ruledsl/typecheck.hpp"
#include "hyplas/views.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyplas::test {

struct OValue
{
	ruledsl::Type type;
	std::vector<std::int64_t> lanes; // 1 entry for scalars, 256 for vectors

	bool is_vector() const { return type.shape == ruledsl::Shape::vector; }
	std::int64_t at(std::size_t i) const { return lanes.size() == 1 ? lanes[0] : lanes[i]; }
};

struct RecordEntry
{
	std::size_t observable;
	ruledsl::ViewKind kind;
	std::uint32_t view;
	std::int64_t row;
	std::vector<std::int64_t> lanes;

	friend bool operator==(RecordEntry const&, RecordEntry const&) = default;
};

/// Persistent state of the oracle: static per processor, global shared.
struct OracleState
{
	std::map<std::string, OValue> shared;
	std::map<std::uint32_t, std::map<std::string, OValue>> per_processor;
};

inline std::int64_t oracle_min(simd::LaneType t)
{
	switch (t) {
		case simd::LaneType::u8:
		case simd::LaneType::u16: return 0;
		case simd::LaneType::i8: return -128;
		case simd::LaneType::i16: return -32768;
	}
	return 0;
}

inline std::int64_t oracle_max(simd::LaneType t)
{
	switch (t) {
		case simd::LaneType::u8: return 255;
		case simd::LaneType::i8: return 127;
		case simd::LaneType::u16: return 65535;
		case simd::LaneType::i16: return 32767;
	}
	return 0;
}

inline std::int64_t oracle_sat(simd::LaneType t, std::int64_t v)
{
	return std::clamp(v, oracle_min(t), oracle_max(t));
}

inline std::int64_t oracle_wrap(simd::LaneType t, std::int64_t v)
{
	auto const span = oracle_max(t) - oracle_min(t) + 1;
	auto r = (v - oracle_min(t)) % span;
	if (r < 0) {
		r += span;
	}
	return r + oracle_min(t);
}

class KernelOracle
{
public:
	KernelOracle(
	    ruledsl::TypedKernel const& kernel, ProcessorViews const& tables, std::uint32_t processor,
	    CoreAccess& core, OracleState& state)
	    : m_k(kernel), m_t(tables), m_p(processor), m_core(core), m_state(state)
	{
		for (auto const& s : kernel.ast.states) {
			auto& home = s.global ? m_state.shared : m_state.per_processor[processor];
			if (!home.count(s.name)) {
				home[s.name] = OValue{s.type, std::vector<std::int64_t>(s.type.shape == ruledsl::Shape::vector ? 256 : 1, s.init)};
			}
		}
	}

	std::vector<RecordEntry> run()
	{
		m_scopes.emplace_back();
		block(m_k.ast.body);
		return m_records;
	}

private:
	using Views = std::set<std::pair<ruledsl::ViewKind, std::uint32_t>>;

	struct Local
	{
		OValue value;
		Views deps;
	};

	bool present(ruledsl::ViewKind k, std::uint32_t i) const
	{
		return k == ruledsl::ViewKind::synapses ? m_t.synapses.at(i).has_value() : m_t.neurons.at(i).has_value();
	}

	bool all_present(Views const& v) const
	{
		return std::all_of(v.begin(), v.end(), [&](auto const& x) { return present(x.first, x.second); });
	}

	Local const* local(std::string const& name) const
	{
		for (auto it = m_scopes.rbegin(); it != m_scopes.rend(); ++it) {
			if (auto f = it->find(name); f != it->end()) {
				return &f->second;
			}
		}
		return nullptr;
	}

	OValue* state(std::string const& name)
	{
		for (auto const& s : m_k.ast.states) {
			if (s.name == name) {
				return &(s.global ? m_state.shared : m_state.per_processor[m_p])[name];
			}
		}
		return nullptr;
	}

	// Views an expression depends on, directly or through let bindings.
	void deps(ruledsl::Expr const& e, Views& out) const
	{
		using ruledsl::ExprKind;
		if (e.kind == ExprKind::name) {
			if (auto const* l = local(e.name)) {
				out.insert(l->deps.begin(), l->deps.end());
			}
			return;
		}
		for (auto const& o : e.operands) {
			deps(*o, out);
		}
		for (auto const& a : e.args) {
			if (auto const* v = std::get_if<ruledsl::ViewRef>(&a.value)) {
				out.insert({v->kind, v->index});
			} else if (auto const* x = std::get_if<ruledsl::ExprPtr>(&a.value)) {
				deps(**x, out);
			}
		}
	}

	void block(std::vector<ruledsl::Stmt> const& body)
	{
		for (auto const& s : body) {
			statement(s);
		}
	}

	void statement(ruledsl::Stmt const& s)
	{
		using ruledsl::StmtKind;
		Views d;
		if (s.value) {
			deps(*s.value, d);
		}
		if (s.kind == StmtKind::for_rows || s.kind == StmtKind::record) {
			d.insert({s.view.kind, s.view.index});
		}
		if (s.row) {
			auto const* l = local(*s.row);
			d.insert(l->deps.begin(), l->deps.end());
		}
		if (!all_present(d)) {
			if (s.kind == StmtKind::let) {
				// Bind a placeholder so later users are skipped as well.
				m_scopes.back()[s.name] = Local{OValue{*s.value->type, {0}}, d};
			}
			return;
		}
		switch (s.kind) {
			case StmtKind::let: m_scopes.back()[s.name] = Local{eval(*s.value), d}; break;
			case StmtKind::assign: {
				auto* target = state(s.name);
				auto v = eval(*s.value);
				OValue out{target->type, {}};
				for (std::size_t i = 0; i < target->lanes.size(); ++i) {
					out.lanes.push_back(v.at(i));
				}
				*target = std::move(out);
				break;
			}
			case StmtKind::for_rows: {
				auto const rows = m_t.synapses.at(s.view.index)->rows.size();
				for (std::size_t r = 0; r < rows; ++r) {
					m_scopes.emplace_back();
					m_scopes.back()[s.name] =
					    Local{OValue{{simd::LaneType::u16, ruledsl::Shape::scalar}, {static_cast<std::int64_t>(r)}}, {{s.view.kind, s.view.index}}};
					block(s.body);
					m_scopes.pop_back();
				}
				break;
			}
			case StmtKind::call: eval(*s.value); break;
			case StmtKind::record: {
				auto const& obs = m_k.signature.observables;
				auto const it = std::find_if(obs.begin(), obs.end(), [&](auto const& o) { return o.name == s.name; });
				auto const v = eval(*s.value);
				RecordEntry e{static_cast<std::size_t>(it - obs.begin()), s.view.kind, s.view.index,
				              s.row ? local(*s.row)->value.lanes[0] : 0, {}};
				for (std::size_t i = 0; i < 256; ++i) {
					e.lanes.push_back(v.at(i));
				}
				m_records.push_back(std::move(e));
				break;
			}
		}
	}

	OValue const& arg_value(ruledsl::Expr const& e, std::size_t i, std::vector<OValue>& hold)
	{
		hold.push_back(eval(*std::get<ruledsl::ExprPtr>(e.args[i].value)));
		return hold.back();
	}

	static OValue from_vector(simd::Vector const& v, ruledsl::Type t)
	{
		OValue out{t, {}};
		for (std::size_t i = 0; i < 256; ++i) {
			out.lanes.push_back(v.lane(i));
		}
		return out;
	}

	static simd::Vector to_vector(OValue const& v)
	{
		simd::Vector out(v.type.lane);
		for (std::size_t i = 0; i < 256; ++i) {
			out.set_lane(i, static_cast<std::int32_t>(v.at(i)));
		}
		return out;
	}

	template <class F>
	static OValue map(ruledsl::Type t, std::vector<OValue const*> const& in, F f)
	{
		bool const vec = t.shape == ruledsl::Shape::vector;
		OValue out{t, {}};
		for (std::size_t i = 0; i < (vec ? 256u : 1u); ++i) {
			std::vector<std::int64_t> xs;
			for (auto const* v : in) {
				xs.push_back(v->at(i));
			}
			out.lanes.push_back(f(xs));
		}
		return out;
	}

	std::uint16_t physical_row(ruledsl::Expr const& call, std::size_t arg, SynapseArrayView const& v) const
	{
		auto const& name = std::get<ruledsl::ExprPtr>(call.args[arg].value)->name;
		return v.rows.at(static_cast<std::size_t>(local(name)->value.lanes[0]));
	}

	OValue eval(ruledsl::Expr const& e)
	{
		using namespace ruledsl;
		auto const t = *e.type;
		auto const lt = t.lane;
		switch (e.kind) {
			case ExprKind::literal: return OValue{t, {e.literal}};
			case ExprKind::name: {
				if (auto const* l = local(e.name)) {
					return l->value;
				}
				if (auto* s = state(e.name)) {
					return *s;
				}
				for (auto const& p : m_k.ast.params) {
					if (p.name == e.name) {
						return OValue{t, {p.value}};
					}
				}
				throw std::logic_error("oracle: unknown name " + e.name);
			}
			case ExprKind::negate: {
				auto const a = eval(*e.operands[0]);
				return map(t, {&a}, [&](auto const& x) { return oracle_sat(lt, -x[0]); });
			}
			case ExprKind::binary: {
				auto const a = eval(*e.operands[0]);
				auto const b = eval(*e.operands[1]);
				return map(t, {&a, &b}, [&](auto const& x) -> std::int64_t {
					switch (e.op) {
						case BinaryOp::add: return oracle_sat(lt, x[0] + x[1]);
						case BinaryOp::sub: return oracle_sat(lt, x[0] - x[1]);
						case BinaryOp::add_wrap: return oracle_wrap(lt, x[0] + x[1]);
						case BinaryOp::sub_wrap: return oracle_wrap(lt, x[0] - x[1]);
						case BinaryOp::mul: return oracle_sat(lt, x[0] * x[1]);
						case BinaryOp::shl: return oracle_sat(lt, x[0] * (std::int64_t{1} << x[1]));
						case BinaryOp::shr: return x[0] >= 0 ? x[0] >> x[1] : -((-x[0] - 1) >> x[1]) - 1;
					}
					return 0;
				});
			}
			case ExprKind::call: break;
		}
		std::vector<OValue> hold;
		hold.reserve(4);
		auto view = [&](std::size_t i) { return std::get<ViewRef>(e.args[i].value); };
		auto flag = [&](std::size_t i) { return std::get<Flag>(e.args[i].value); };
		switch (e.builtin) {
			case Builtin::read_weights: {
				auto const& v = *m_t.synapses.at(view(0).index);
				return from_vector(m_core.read_weights(v.hemisphere, physical_row(e, 1, v), v.columns), t);
			}
			case Builtin::write_weights: {
				auto const& v = *m_t.synapses.at(view(0).index);
				auto const row = physical_row(e, 1, v);
				auto value = arg_value(e, 2, hold);
				value.type.shape = Shape::vector;
				m_core.write_weights(v.hemisphere, row, v.columns, to_vector(value));
				return OValue{t, std::vector<std::int64_t>(256, 0)};
			}
			case Builtin::read_counters: {
				auto const& v = *m_t.neurons.at(view(0).index);
				return from_vector(m_core.read_counters(v.hemisphere, v.columns, flag(1) == Flag::reset), t);
			}
			case Builtin::read_correlation: {
				auto const& v = *m_t.synapses.at(view(0).index);
				return from_vector(
				    m_core.read_correlation(
				        v.hemisphere, physical_row(e, 1, v), v.columns, flag(2) == Flag::causal,
				        flag(3) == Flag::reset),
				    t);
			}
			case Builtin::processor_id: return OValue{t, {m_p}};
			case Builtin::sign: {
				auto const& a = arg_value(e, 0, hold);
				return map(t, {&a}, [](auto const& x) -> std::int64_t { return (x[0] > 0) - (x[0] < 0); });
			}
			case Builtin::abs: {
				auto const& a = arg_value(e, 0, hold);
				return map(t, {&a}, [&](auto const& x) { return oracle_sat(lt, x[0] < 0 ? -x[0] : x[0]); });
			}
			case Builtin::min:
			case Builtin::max:
			case Builtin::sat_sub: {
				auto const& a = arg_value(e, 0, hold);
				auto const& b = arg_value(e, 1, hold);
				return map(t, {&a, &b}, [&](auto const& x) -> std::int64_t {
					if (e.builtin == Builtin::min) {
						return std::min(x[0], x[1]);
					}
					if (e.builtin == Builtin::max) {
						return std::max(x[0], x[1]);
					}
					return oracle_sat(lt, x[0] - x[1]);
				});
			}
			case Builtin::to_u8:
			case Builtin::to_i8:
			case Builtin::to_u16:
			case Builtin::to_i16: {
				auto const& a = arg_value(e, 0, hold);
				return map(t, {&a}, [&](auto const& x) { return oracle_sat(lt, x[0]); });
			}
			case Builtin::none: break;
		}
		throw std::logic_error("oracle: unresolved call " + e.name);
	}

	ruledsl::TypedKernel const& m_k;
	ProcessorViews const& m_t;
	std::uint32_t m_p;
	CoreAccess& m_core;
	OracleState& m_state;
	std::vector<std::map<std::string, Local>> m_scopes;
	std::vector<RecordEntry> m_records;
};

} // namespace hyplas::test
