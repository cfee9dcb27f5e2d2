#pragma once

#include "hyplas/ruledsl/typecheck.hpp"
#include "hyplas/topology/network.hpp"

namespace hyplas::topology {

/// Handle set of a rule: one synapse view per attached projection, one neuron view per
/// attached population, plus its declared observables.
ruledsl::RuleSignature signature_of(Network const& network, RuleId rule);

/// Parses and type-checks the rule's kernel. Throws the PositionedError of the failing stage.
ruledsl::TypedKernel compile_rule(Network const& network, RuleId rule);

} // namespace hyplas::topology
