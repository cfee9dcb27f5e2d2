#pragma once

#include "hyplas/recording/recording.hpp"

#include <random>

namespace hyplas::test {

using simd::LaneType;
using topology::Network;

inline recording::RecordingStore store_for(Network const& net, std::uint64_t budget = placement::kDramBudgetBytes)
{
	auto const pl = placement::map_network(net);
	std::vector<recording::RuleLayout> layouts;
	for (topology::RuleId r = 0; r < net.rules().size(); ++r) {
		layouts.push_back(recording::allocate_layout(net, pl, r));
	}
	return recording::RecordingStore(std::move(layouts), budget);
}

/// One rule "r" over 1..3 populations and 1..3 projections with random observables.
inline Network random_network(std::mt19937_64& rng)
{
	auto pick = [&](std::uint32_t lo, std::uint32_t hi) {
		return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
	};
	Network net;
	net.set_runtime(Time::from_us(100'000));
	auto const npops = pick(1, 3);
	std::uint32_t neurons_left = 512;
	for (std::uint32_t i = 0; i < npops; ++i) {
		topology::PopulationDesc pop;
		pop.id = "pop" + std::to_string(i);
		pop.size = pick(1, std::max(1u, neurons_left / (npops - i)));
		neurons_left -= pop.size;
		if (pick(0, 3) != 0) {
			pop.plasticity_rule = "r";
		}
		net.add_population(pop);
	}
	topology::PlasticityRuleDesc r;
	r.id = "r";
	r.kernel_source = "rule r { }";
	r.timer = {Time::from_us(1000), Time::from_us(1000), pick(1, 50)};
	auto const nobs = pick(0, 4);
	for (std::uint32_t i = 0; i < nobs; ++i) {
		r.observables.push_back(
		    {"o" + std::to_string(i), static_cast<LaneType>(pick(0, 3)),
		     pick(0, 1) ? ObservableScope::synapse : ObservableScope::neuron,
		     pick(0, 1) ? RecordLayout::packed : RecordLayout::unpacked});
	}
	net.define_rule(r);
	auto const nproj = pick(1, 3);
	for (std::uint32_t i = 0; i < nproj; ++i) {
		auto const src = "src" + std::to_string(i);
		net.add_source({src, pick(1, 60), 1.0, std::nullopt});
		topology::ProjectionDesc p;
		p.id = "proj" + std::to_string(i);
		p.pre = src;
		p.post = "pop" + std::to_string(pick(0, npops - 1));
		if (pick(0, 3) != 0) {
			p.plasticity_rule = "r";
		}
		net.add_projection(p);
	}
	return net;
}

inline simd::Vector random_vector(std::mt19937_64& rng, LaneType t)
{
	std::uniform_int_distribution<std::int32_t> d(simd::lane_min(t), simd::lane_max(t));
	simd::Vector v(t);
	for (std::size_t i = 0; i < simd::kRowLanes; ++i) {
		v.set_lane(i, d(rng));
	}
	return v;
}

} // namespace hyplas::test
