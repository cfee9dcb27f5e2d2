#include "hyplas/placement/placement.hpp"
#include "hyplas/topology/compile.hpp"
#include "hyplas/topology/network.hpp"

namespace hyplas::topology {

std::vector<Diagnostic> validate(Network const& net)
{
	std::vector<Diagnostic> out;
	auto error = [&](Errc code, std::string entity, std::string message,
	                 std::optional<SourcePos> pos = std::nullopt) {
		out.push_back({Severity::error, code, std::move(entity), std::move(message), pos});
	};

	if (net.runtime().ns() <= 0) {
		error(Errc::InvalidParams, "experiment", "runtime must be positive");
	}
	auto check_rule_ref = [&](std::string const& entity, std::optional<std::string> const& rule) {
		if (rule && !net.find_rule(*rule)) {
			error(Errc::UnknownRule, entity, "unknown plasticity rule '" + *rule + "'");
		}
	};
	for (auto const& p : net.populations()) {
		check_rule_ref(p.id, p.plasticity_rule);
	}
	for (auto const& p : net.projections()) {
		check_rule_ref(p.id, p.plasticity_rule);
	}
	for (RuleId r = 0; r < net.rules().size(); ++r) {
		auto const& rule = net.rules()[r];
		if (net.projection_targets(r).empty() && net.population_targets(r).empty()) {
			out.push_back(
			    {Severity::warning, Errc::UnknownRule, rule.id, "rule is not attached to any entity", {}});
		}
		if (rule.timer.last_deadline() > net.runtime()) {
			error(
			    Errc::InvalidParams, rule.id,
			    "last deadline " + format_us(rule.timer.last_deadline()) + " us exceeds runtime " +
			        format_us(net.runtime()) + " us");
		}
		try {
			(void) compile_rule(net, r);
		} catch (PositionedError const& e) {
			error(e.code(), rule.id, e.detail(), e.pos());
		}
	}
	try {
		(void) placement::map_network(net);
	} catch (Error const& e) {
		error(e.code(), "placement", e.what());
	}
	return out;
}

} // namespace hyplas::topology
