#include "hyplas/topology/compile.hpp"

#include "hyplas/ruledsl/parser.hpp"

namespace hyplas::topology {

ruledsl::RuleSignature signature_of(Network const& network, RuleId rule)
{
	ruledsl::RuleSignature sig;
	sig.synapse_views = static_cast<std::uint32_t>(network.projection_targets(rule).size());
	sig.neuron_views = static_cast<std::uint32_t>(network.population_targets(rule).size());
	sig.observables = network.rules().at(rule).observables;
	return sig;
}

ruledsl::TypedKernel compile_rule(Network const& network, RuleId rule)
{
	return ruledsl::typecheck(
	    ruledsl::parse(network.rules().at(rule).kernel_source), signature_of(network, rule));
}

} // namespace hyplas::topology
