#include "hyplas/ruledsl/ast.hpp"

#include <sstream>

namespace hyplas::ruledsl {

std::string to_string(Type const& t)
{
	auto const lane = std::string(simd::to_string(t.lane));
	return t.shape == Shape::vector ? "vec<" + lane + ">" : lane;
}

std::string_view to_string(BinaryOp op)
{
	switch (op) {
		case BinaryOp::add: return "+";
		case BinaryOp::sub: return "-";
		case BinaryOp::add_wrap: return "+%";
		case BinaryOp::sub_wrap: return "-%";
		case BinaryOp::mul: return "*";
		case BinaryOp::shl: return "<<";
		case BinaryOp::shr: return ">>";
	}
	return "?";
}

namespace {

std::string_view flag_name(Flag f)
{
	switch (f) {
		case Flag::reset: return "reset";
		case Flag::keep: return "keep";
		case Flag::causal: return "causal";
		case Flag::anticausal: return "anticausal";
	}
	return "?";
}

void view(std::ostream& os, ViewRef const& v)
{
	os << "(view " << (v.kind == ViewKind::synapses ? "synapses" : "neurons") << ' ' << v.index
	   << ')';
}

void expr(std::ostream& os, Expr const& e)
{
	auto const typed = [&] {
		if (e.type) {
			os << " ^" << to_string(*e.type);
		}
	};
	switch (e.kind) {
		case ExprKind::literal:
			os << "(int " << e.literal;
			typed();
			os << ')';
			return;
		case ExprKind::name:
			os << "(name " << e.name;
			typed();
			os << ')';
			return;
		case ExprKind::negate:
			os << "(neg ";
			expr(os, *e.operands[0]);
			typed();
			os << ')';
			return;
		case ExprKind::binary:
			os << '(' << to_string(e.op) << ' ';
			expr(os, *e.operands[0]);
			os << ' ';
			expr(os, *e.operands[1]);
			typed();
			os << ')';
			return;
		case ExprKind::call:
			os << "(call " << e.name;
			for (auto const& a : e.args) {
				os << ' ';
				if (auto const* p = std::get_if<ExprPtr>(&a.value)) {
					expr(os, **p);
				} else if (auto const* v = std::get_if<ViewRef>(&a.value)) {
					view(os, *v);
				} else {
					os << flag_name(std::get<Flag>(a.value));
				}
			}
			typed();
			os << ')';
			return;
	}
}

void stmt(std::ostream& os, Stmt const& s, int depth)
{
	os << std::string(2 * static_cast<std::size_t>(depth), ' ');
	switch (s.kind) {
		case StmtKind::let:
			os << "(let " << s.name << ' ';
			expr(os, *s.value);
			os << ")\n";
			return;
		case StmtKind::assign:
			os << "(set " << s.name << ' ';
			expr(os, *s.value);
			os << ")\n";
			return;
		case StmtKind::call:
			os << "(do ";
			expr(os, *s.value);
			os << ")\n";
			return;
		case StmtKind::record:
			os << "(record " << s.name << ' ';
			view(os, s.view);
			if (s.row) {
				os << ' ' << *s.row;
			}
			os << ' ';
			expr(os, *s.value);
			os << ")\n";
			return;
		case StmtKind::for_rows:
			os << "(for " << s.name << ' ';
			view(os, s.view);
			os << '\n';
			for (auto const& inner : s.body) {
				stmt(os, inner, depth + 1);
			}
			os << std::string(2 * static_cast<std::size_t>(depth), ' ') << ")\n";
			return;
	}
}

} // namespace

std::string dump_ast(KernelAst const& ast)
{
	std::ostringstream os;
	os << "(rule " << ast.rule_name << '\n';
	for (auto const& p : ast.params) {
		os << "  (param " << p.name << ' ' << simd::to_string(p.type) << ' ' << p.value << ")\n";
	}
	for (auto const& s : ast.states) {
		os << "  (" << (s.global ? "global " : "static ") << s.name << ' ' << to_string(s.type)
		   << ' ' << s.init << ")\n";
	}
	for (auto const& s : ast.body) {
		stmt(os, s, 1);
	}
	os << ")\n";
	return os.str();
}

} // namespace hyplas::ruledsl
