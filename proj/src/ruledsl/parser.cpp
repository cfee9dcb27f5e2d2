#include "hyplas/ruledsl/parser.hpp"

#include "hyplas/ruledsl/lexer.hpp"

namespace hyplas::ruledsl {

namespace {

class Parser
{
public:
	explicit Parser(std::vector<Token> tokens) : m_tokens(std::move(tokens)) {}

	KernelAst kernel()
	{
		KernelAst ast;
		expect_keyword("rule");
		ast.rule_name = expect_identifier();
		expect("{");
		while (!at("}")) {
			if (at_end()) {
				fail("expected '}' before end of input");
			}
			if (at_keyword("param")) {
				ast.params.push_back(param());
			} else if (at_keyword("static") || at_keyword("global")) {
				ast.states.push_back(state());
			} else {
				ast.body.push_back(statement());
			}
		}
		expect("}");
		if (!at_end()) {
			fail("unexpected tokens after rule body");
		}
		return ast;
	}

private:
	Token const& peek(std::size_t ahead = 0) const
	{
		return m_tokens[std::min(m_pos + ahead, m_tokens.size() - 1)];
	}

	bool at_end() const { return peek().kind == TokenKind::end; }

	bool at(std::string_view punct) const
	{
		return peek().kind == TokenKind::punct && peek().text == punct;
	}

	bool at_keyword(std::string_view word) const
	{
		return peek().kind == TokenKind::keyword && peek().text == word;
	}

	[[noreturn]] void fail(std::string const& message) const
	{
		auto const& t = peek();
		std::string const found = t.kind == TokenKind::end ? "end of input" : "'" + t.text + "'";
		throw PositionedError(Errc::SyntaxError, t.pos, message + ", found " + found);
	}

	Token take() { return m_tokens[m_pos < m_tokens.size() - 1 ? m_pos++ : m_pos]; }

	void expect(std::string_view punct)
	{
		if (!at(punct)) {
			fail("expected '" + std::string(punct) + "'");
		}
		take();
	}

	void expect_keyword(std::string_view word)
	{
		if (!at_keyword(word)) {
			fail("expected '" + std::string(word) + "'");
		}
		take();
	}

	std::string expect_identifier()
	{
		if (peek().kind != TokenKind::identifier) {
			fail("expected identifier");
		}
		return take().text;
	}

	std::int64_t signed_integer()
	{
		bool negative = false;
		if (at("-")) {
			take();
			negative = true;
		}
		if (peek().kind != TokenKind::integer) {
			fail("expected integer literal");
		}
		auto const v = take().value;
		return negative ? -v : v;
	}

	LaneType lane_type()
	{
		if (peek().kind == TokenKind::keyword) {
			if (auto t = simd::parse_lane_type(peek().text)) {
				take();
				return *t;
			}
		}
		fail("expected lane type (u8, i8, u16, i16)");
	}

	Type type()
	{
		if (at_keyword("vec")) {
			take();
			expect("<");
			auto const lane = lane_type();
			expect(">");
			return {lane, Shape::vector};
		}
		return {lane_type(), Shape::scalar};
	}

	ParamDecl param()
	{
		ParamDecl p;
		p.pos = take().pos;
		p.name = expect_identifier();
		expect(":");
		p.type = lane_type();
		expect("=");
		p.value = signed_integer();
		expect(";");
		return p;
	}

	StateDecl state()
	{
		StateDecl s;
		s.pos = peek().pos;
		s.global = take().text == "global";
		s.name = expect_identifier();
		expect(":");
		s.type = type();
		expect("=");
		s.init = signed_integer();
		expect(";");
		return s;
	}

	ViewRef view()
	{
		ViewRef v;
		v.pos = peek().pos;
		if (at_keyword("synapses")) {
			v.kind = ViewKind::synapses;
		} else if (at_keyword("neurons")) {
			v.kind = ViewKind::neurons;
		} else {
			fail("expected view 'synapses[i]' or 'neurons[i]'");
		}
		take();
		expect("[");
		if (peek().kind != TokenKind::integer) {
			fail("expected view index");
		}
		v.index = static_cast<std::uint32_t>(take().value);
		expect("]");
		return v;
	}

	bool at_view() const { return at_keyword("synapses") || at_keyword("neurons"); }

	Stmt statement()
	{
		Stmt s;
		s.pos = peek().pos;
		if (at_keyword("let")) {
			take();
			s.kind = StmtKind::let;
			s.name = expect_identifier();
			expect("=");
			s.value = expression();
			expect(";");
		} else if (at_keyword("for")) {
			take();
			s.kind = StmtKind::for_rows;
			s.name = expect_identifier();
			expect_keyword("in");
			expect_keyword("rows");
			expect("(");
			s.view = view();
			expect(")");
			expect("{");
			while (!at("}")) {
				if (at_end()) {
					fail("expected '}' before end of input");
				}
				s.body.push_back(statement());
			}
			expect("}");
		} else if (at_keyword("record")) {
			take();
			s.kind = StmtKind::record;
			s.name = expect_identifier();
			expect("(");
			s.view = view();
			if (at(",")) {
				take();
				s.row = expect_identifier();
			}
			expect(")");
			expect("=");
			s.value = expression();
			expect(";");
		} else if (peek().kind == TokenKind::identifier && peek(1).kind == TokenKind::punct &&
		           peek(1).text == "=") {
			s.kind = StmtKind::assign;
			s.name = take().text;
			take();
			s.value = expression();
			expect(";");
		} else if (peek().kind == TokenKind::identifier && peek(1).kind == TokenKind::punct &&
		           peek(1).text == "(") {
			s.kind = StmtKind::call;
			s.value = primary();
			expect(";");
		} else {
			fail("expected statement");
		}
		return s;
	}

	ExprPtr expression() { return shift(); }

	ExprPtr binary(ExprPtr lhs, BinaryOp op, ExprPtr rhs, SourcePos pos)
	{
		auto e = std::make_unique<Expr>();
		e->kind = ExprKind::binary;
		e->op = op;
		e->pos = pos;
		e->operands.push_back(std::move(lhs));
		e->operands.push_back(std::move(rhs));
		return e;
	}

	ExprPtr shift()
	{
		auto lhs = additive();
		while (at("<<") || at(">>")) {
			auto const t = take();
			auto rhs = additive();
			lhs = binary(std::move(lhs), t.text == "<<" ? BinaryOp::shl : BinaryOp::shr, std::move(rhs), t.pos);
		}
		return lhs;
	}

	ExprPtr additive()
	{
		auto lhs = multiplicative();
		while (at("+") || at("-") || at("+%") || at("-%")) {
			auto const t = take();
			BinaryOp op = BinaryOp::add;
			if (t.text == "-") {
				op = BinaryOp::sub;
			} else if (t.text == "+%") {
				op = BinaryOp::add_wrap;
			} else if (t.text == "-%") {
				op = BinaryOp::sub_wrap;
			}
			auto rhs = multiplicative();
			lhs = binary(std::move(lhs), op, std::move(rhs), t.pos);
		}
		return lhs;
	}

	ExprPtr multiplicative()
	{
		auto lhs = unary();
		while (at("*")) {
			auto const t = take();
			auto rhs = unary();
			lhs = binary(std::move(lhs), BinaryOp::mul, std::move(rhs), t.pos);
		}
		return lhs;
	}

	ExprPtr unary()
	{
		if (at("-")) {
			auto const t = take();
			if (peek().kind == TokenKind::integer) {
				auto e = std::make_unique<Expr>();
				e->kind = ExprKind::literal;
				e->pos = t.pos;
				e->literal = -take().value;
				return e;
			}
			auto e = std::make_unique<Expr>();
			e->kind = ExprKind::negate;
			e->pos = t.pos;
			e->operands.push_back(unary());
			return e;
		}
		return primary();
	}

	ExprPtr primary()
	{
		auto e = std::make_unique<Expr>();
		e->pos = peek().pos;
		if (peek().kind == TokenKind::integer) {
			e->kind = ExprKind::literal;
			e->literal = take().value;
			return e;
		}
		if (at("(")) {
			take();
			auto inner = expression();
			expect(")");
			return inner;
		}
		// Lane type keywords double as conversion functions: u8(x).
		bool const conversion = peek().kind == TokenKind::keyword &&
		                        simd::parse_lane_type(peek().text).has_value() &&
		                        peek(1).kind == TokenKind::punct && peek(1).text == "(";
		if (peek().kind != TokenKind::identifier && !conversion) {
			fail("expected expression");
		}
		e->name = take().text;
		if (!at("(")) {
			if (conversion) {
				fail("expected '('");
			}
			e->kind = ExprKind::name;
			return e;
		}
		e->kind = ExprKind::call;
		take();
		if (!at(")")) {
			while (true) {
				e->args.push_back(call_arg());
				if (!at(",")) {
					break;
				}
				take();
			}
		}
		expect(")");
		return e;
	}

	CallArg call_arg()
	{
		if (at_view()) {
			return CallArg{view()};
		}
		if (peek().kind == TokenKind::keyword) {
			auto const& w = peek().text;
			std::optional<Flag> flag;
			if (w == "reset") {
				flag = Flag::reset;
			} else if (w == "keep") {
				flag = Flag::keep;
			} else if (w == "causal") {
				flag = Flag::causal;
			} else if (w == "anticausal") {
				flag = Flag::anticausal;
			}
			if (flag) {
				take();
				return CallArg{*flag};
			}
		}
		return CallArg{expression()};
	}

	std::vector<Token> m_tokens;
	std::size_t m_pos = 0;
};

} // namespace

KernelAst parse(std::string_view source)
{
	return Parser(tokenize(source)).kernel();
}

} // namespace hyplas::ruledsl
