#include "hyplas/cli/commands.hpp"

#include <cmath>

namespace hyplas::cli {

std::string homeostasis_kernel(std::uint32_t target_count, int w_max)
{
	return "// Homeostatic rate control: every period, nudge each afferent weight one step\n"
	       "// towards the target spike count of its postsynaptic neuron.\n"
	       "rule homeostasis {\n"
	       "    param target: u16 = " +
	       std::to_string(target_count) +
	       ";\n"
	       "    param w_max: u8 = " +
	       std::to_string(w_max) +
	       ";\n"
	       "\n"
	       "    let counts = read_counters(neurons[0], reset);\n"
	       "    let dw = sign(target - counts);\n"
	       "    record counts(neurons[0]) = counts;\n"
	       "    for r in rows(synapses[0]) {\n"
	       "        let w = min(read_weights(synapses[0], r) + dw, w_max);\n"
	       "        write_weights(synapses[0], r, w);\n"
	       "        record weight(synapses[0], r) = w;\n"
	       "        record dw(synapses[0], r) = dw;\n"
	       "    }\n"
	       "}\n";
}

topology::Network homeostasis_network(HomeostasisParams const& p)
{
	using namespace topology;
	auto range = [](std::string const& what) { throw Error(Errc::RangeError, what); };
	if (p.targets < 1 || p.targets > kMaxNeurons) {
		range("targets must be in 1.." + std::to_string(kMaxNeurons));
	}
	if (!(p.rate_in_hz > 0.0) || !std::isfinite(p.rate_in_hz)) {
		range("input rate must be positive");
	}
	if (p.period.ns() <= 0 || p.runtime < p.period) {
		range("period must be positive and no longer than the runtime");
	}
	auto const target = std::llround(p.rate_target_hz * static_cast<double>(p.period.ns()) * 1e-9);
	if (!(p.rate_target_hz > 0.0) || target < 1 || target > 0xffff) {
		range("target rate times period must give 1..65535 counts");
	}
	if (p.weight_init < 0 || p.weight_init > kDefaultWMax) {
		range("initial weight must be in 0.." + std::to_string(kDefaultWMax));
	}

	Network net;
	net.set_runtime(p.runtime);
	net.set_seed(p.seed);
	net.add_source({"drive", 1, p.rate_in_hz, std::nullopt});
	PopulationDesc pop;
	pop.id = "targets";
	pop.size = p.targets;
	pop.plasticity_rule = "homeostasis";
	net.add_population(pop);

	PlasticityRuleDesc rule;
	rule.id = "homeostasis";
	rule.kernel_source = homeostasis_kernel(static_cast<std::uint32_t>(target), net.w_max());
	rule.timer = {p.period, p.period, static_cast<std::uint32_t>(p.runtime.ns() / p.period.ns())};
	rule.observables = {
	    {"counts", simd::LaneType::u16, ObservableScope::neuron, RecordLayout::packed},
	    {"weight", simd::LaneType::u8, ObservableScope::synapse, RecordLayout::packed},
	    {"dw", simd::LaneType::i8, ObservableScope::synapse, RecordLayout::packed},
	};
	net.define_rule(rule);

	ProjectionDesc proj;
	proj.id = "plastic";
	proj.pre = "drive";
	proj.post = "targets";
	proj.weight_init = p.weight_init;
	proj.plasticity_rule = "homeostasis";
	net.add_projection(proj);
	return net;
}

} // namespace hyplas::cli
