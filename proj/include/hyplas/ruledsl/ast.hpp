#pragma once

#include "hyplas/error.hpp"
#include "hyplas/simd/lane.hpp"
#include "hyplas/simd/ops.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hyplas::ruledsl {

using simd::LaneType;

enum class Shape : std::uint8_t
{
	scalar,
	vector,
};

struct Type
{
	LaneType lane = LaneType::i16;
	Shape shape = Shape::scalar;

	friend bool operator==(Type const&, Type const&) = default;
};

std::string to_string(Type const& t);

enum class ViewKind : std::uint8_t
{
	synapses,
	neurons,
};

struct ViewRef
{
	ViewKind kind = ViewKind::synapses;
	std::uint32_t index = 0;
	SourcePos pos;

	friend bool operator==(ViewRef const& a, ViewRef const& b)
	{
		return a.kind == b.kind && a.index == b.index;
	}
};

enum class Flag : std::uint8_t
{
	reset,
	keep,
	causal,
	anticausal,
};

enum class BinaryOp : std::uint8_t
{
	add,
	sub,
	add_wrap,
	sub_wrap,
	mul,
	shl,
	shr,
};

std::string_view to_string(BinaryOp op);

/// Built-in functions and intrinsics, resolved during type checking.
enum class Builtin : std::uint8_t
{
	none,
	read_weights,
	write_weights,
	read_counters,
	read_correlation,
	processor_id,
	sign,
	abs,
	min,
	max,
	sat_sub,
	to_u8,
	to_i8,
	to_u16,
	to_i16,
};

enum class ExprKind : std::uint8_t
{
	literal,
	name,
	negate,
	binary,
	call,
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct CallArg
{
	std::variant<ExprPtr, ViewRef, Flag> value;
};

struct Expr
{
	ExprKind kind = ExprKind::literal;
	SourcePos pos;
	std::int64_t literal = 0;
	std::string name; // identifier or callee
	BinaryOp op = BinaryOp::add;
	std::vector<ExprPtr> operands; // negate: 1, binary: 2
	std::vector<CallArg> args;

	// Filled in by the type checker.
	std::optional<Type> type;
	simd::VecOp vec_op = simd::VecOp::add_sat;
	Builtin builtin = Builtin::none;
	bool swapped = false; // operands exchanged to fit a (uN, iN) op
};

enum class StmtKind : std::uint8_t
{
	let,
	assign,
	for_rows,
	call,
	record,
};

struct Stmt
{
	StmtKind kind = StmtKind::let;
	SourcePos pos;
	std::string name; // let / assign target, loop variable, record observable
	ExprPtr value;    // let / assign / record value, or the call expression
	ViewRef view;     // loop or record view
	std::optional<std::string> row; // record row variable
	std::vector<Stmt> body;         // loop body
};

struct ParamDecl
{
	std::string name;
	LaneType type = LaneType::i16;
	std::int64_t value = 0;
	SourcePos pos;
};

/// Rule-local (`static`, one instance per processor) or shared (`global`) state.
struct StateDecl
{
	std::string name;
	bool global = false;
	Type type;
	std::int64_t init = 0;
	SourcePos pos;
};

struct KernelAst
{
	std::string rule_name;
	std::vector<ParamDecl> params;
	std::vector<StateDecl> states;
	std::vector<Stmt> body;
};

/// Deterministic S-expression rendering, used for `--emit ast` and golden fixtures.
std::string dump_ast(KernelAst const& ast);

} // namespace hyplas::ruledsl
