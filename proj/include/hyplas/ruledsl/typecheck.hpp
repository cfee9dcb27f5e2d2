#pragma once

#include "hyplas/observable.hpp"
#include "hyplas/ruledsl/ast.hpp"

#include <vector>

namespace hyplas::ruledsl {

/// The handle set a kernel is invoked with: how many synapse and neuron views the rule's
/// targets provide, and which observables it may record.
struct RuleSignature
{
	std::uint32_t synapse_views = 0;
	std::uint32_t neuron_views = 0;
	std::vector<ObservableDecl> observables;
};

struct TypedKernel
{
	KernelAst ast;
	RuleSignature signature;
};

/// Identifiers reserved for spike-timing access, which the hardware does not expose to kernels.
bool is_spike_time_name(std::string_view name);

/// Annotates every expression with its type and resolves operators and builtins.
/// Throws PositionedError with TypeMismatch, UnknownObservable, UnknownView, UnknownName,
/// Redefinition or SpikeTimeAccess.
TypedKernel typecheck(KernelAst ast, RuleSignature const& signature);

} // namespace hyplas::ruledsl
