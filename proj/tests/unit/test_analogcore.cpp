#include "doctest.h"

#include "hyplas/analogcore/core.hpp"
#include "hyplas/analogcore/poisson.hpp"
#include "hyplas/placement/placement.hpp"

#include <array>
#include <cmath>
#include <random>

using namespace hyplas;
using namespace hyplas::analogcore;
using namespace hyplas::topology;

namespace {

std::array<std::uint16_t, 1> const kCol0{0};

/// Two silent single-neuron sources "a" and "b" onto one neuron; a→n is row 0, b→n is row 1.
Network pair_network(int weight_a, int weight_b)
{
	Network net;
	net.set_runtime(Time::from_us(1'000'000));
	net.add_source({"a", 1, 0.0, std::nullopt});
	net.add_source({"b", 1, 0.0, std::nullopt});
	PopulationDesc pop;
	pop.id = "n";
	net.add_population(pop);
	ProjectionDesc pa;
	pa.id = "pa";
	pa.pre = "a";
	pa.post = "n";
	pa.weight_init = weight_a;
	net.add_projection(pa);
	ProjectionDesc pb = pa;
	pb.id = "pb";
	pb.pre = "b";
	pb.weight_init = weight_b;
	net.add_projection(pb);
	return net;
}

/// One 120 kHz source onto `n` neurons all-to-all with the given weight.
Network driven_network(std::uint32_t n, int weight, double runtime_us)
{
	Network out;
	out.set_runtime(Time::from_us(runtime_us));
	out.add_source({"drive", 1, 120'000.0, std::nullopt});
	PopulationDesc pop;
	pop.id = "n";
	pop.size = n;
	out.add_population(pop);
	ProjectionDesc p;
	p.id = "p";
	p.pre = "drive";
	p.post = "n";
	p.weight_init = weight;
	out.add_projection(p);
	return out;
}

CoreParams unit_kick()
{
	CoreParams params;
	params.kick_scale = 1.0 / 63.0; // weight 63 reaches threshold in one kick
	return params;
}

std::uint16_t counter_of(AnalogCore& core, bool reset = false)
{
	return static_cast<std::uint16_t>(core.read_counters(0, kCol0, reset).lane(0));
}

} // namespace

TEST_CASE("decay_to")
{
	CellParams cell;
	auto n = resting(cell);
	SUBCASE("zero interval is the identity")
	{
		kick(n, cell, 0.0, 0.4);
		decay_to(n, cell, 0.0);
		CHECK(n.v == 0.4);
	}
	SUBCASE("rest is a fixed point")
	{
		for (double t : {0.0, 1.0, 17.5, 1e6}) {
			decay_to(n, cell, t);
			CHECK(n.v == cell.rest);
		}
	}
	SUBCASE("one time constant scales by 1/e")
	{
		kick(n, cell, 0.0, 0.75);
		decay_to(n, cell, cell.tau_m_us);
		CHECK(std::abs(n.v / (0.75 * std::exp(-1.0)) - 1.0) < 1e-12);
	}
	SUBCASE("non-zero rest")
	{
		cell.rest = 0.2;
		n = resting(cell);
		kick(n, cell, 0.0, 0.5);
		decay_to(n, cell, 2 * cell.tau_m_us);
		CHECK(n.v == doctest::Approx(0.2 + 0.5 * std::exp(-2.0)).epsilon(1e-12));
	}
}

TEST_CASE("kick")
{
	CellParams cell;
	auto n = resting(cell);
	SUBCASE("crossing threshold fires and resets")
	{
		CHECK_FALSE(kick(n, cell, 0.0, 0.6));
		CHECK(kick(n, cell, 0.0, 0.6));
		CHECK(n.v == cell.reset);
		CHECK(n.counter == 1);
	}
	SUBCASE("kicks during the refractory window are ignored")
	{
		CHECK(kick(n, cell, 5.0, 1.5));
		CHECK_FALSE(kick(n, cell, 5.5, 0.3));
		CHECK(membrane_at(n, cell, 5.5) == cell.reset);
		CHECK_FALSE(kick(n, cell, 6.0, 0.3));
		CHECK(membrane_at(n, cell, 6.0) == doctest::Approx(0.3));
	}
	SUBCASE("membrane stays below threshold between events")
	{
		std::mt19937_64 rng(3);
		std::uniform_real_distribution<double> amt(0.0, 0.7);
		double t = 0.0;
		for (int i = 0; i < 2000; ++i) {
			t += 0.5;
			kick(n, cell, t, amt(rng));
			CHECK(membrane_at(n, cell, t) < cell.threshold);
		}
	}
}

TEST_CASE("poisson_events")
{
	CHECK(poisson_events(0.0, 0.0, 1e6, 1).empty());
	CHECK(poisson_events(120'000.0, 0.0, 500'000.0, 9) == poisson_events(120'000.0, 0.0, 500'000.0, 9));
	CHECK(poisson_events(120'000.0, 0.0, 500'000.0, 9) != poisson_events(120'000.0, 0.0, 500'000.0, 10));
	for (std::uint64_t seed = 0; seed < 8; ++seed) {
		auto const ev = poisson_events(120'000.0, 0.0, 500'000.0, seed);
		double const tol = 4.0 * std::sqrt(60'000.0);
		CHECK(std::abs(static_cast<double>(ev.size()) - 60'000.0) < tol);
		CHECK(std::is_sorted(ev.begin(), ev.end()));
		CHECK(ev.front() >= 0.0);
		CHECK(ev.back() < 500'000.0);
	}
	// Empirical rate converges as the window grows.
	auto const long_run = poisson_events(1'000.0, 0.0, 1e9, 4);
	CHECK(static_cast<double>(long_run.size()) / 1e6 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("spike delivery")
{
	SUBCASE("a suprathreshold kick fires at the delivery time")
	{
		auto const net = pair_network(63, 0);
		AnalogCore core(net, placement::map_network(net), unit_kick(), 1);
		core.deliver_source_spike(0, 0, 3.0);
		core.advance_to(3.0);
		REQUIRE(core.spikes().size() == 1);
		CHECK(core.spikes()[0] == SpikeRecord{3.0, 0, 0});
		CHECK(core.neuron(0, 0).v == 0.0);
		CHECK(counter_of(core) == 1);
	}
	SUBCASE("weight 0 leaves the membrane unchanged but still bumps the pre trace")
	{
		auto const net = pair_network(63, 0);
		AnalogCore core(net, placement::map_network(net), unit_kick(), 1);
		core.deliver_source_spike(1, 0, 0.0);
		core.advance_to(0.0);
		CHECK(core.neuron(0, 0).v_anchor == 0.0);
		CHECK(core.spikes().empty());
		core.deliver_source_spike(0, 0, 1.0);
		core.advance_to(1.0);
		CHECK(core.causal(0, 1, 0) == 1); // round(exp(-0.1))
	}
	SUBCASE("events are processed only up to the requested time")
	{
		auto const net = pair_network(63, 0);
		AnalogCore core(net, placement::map_network(net), unit_kick(), 1);
		core.deliver_source_spike(0, 0, 10.0);
		core.advance_to(9.999);
		CHECK(core.spikes().empty());
		CHECK(core.pending_events() == 1);
		core.advance_to(10.0);
		CHECK(core.spikes().size() == 1);
		CHECK(core.pending_events() == 0);
	}
}

TEST_CASE("correlation sensors")
{
	auto const net = pair_network(63, 0);
	auto const pl = placement::map_network(net);
	SUBCASE("pre before post is causal")
	{
		AnalogCore core(net, pl, unit_kick(), 1);
		core.deliver_source_spike(0, 0, 0.0);
		core.advance_to(0.0);
		CHECK(core.causal(0, 0, 0) > 0);
		CHECK(core.anticausal(0, 0, 0) == 0);
	}
	SUBCASE("post before pre is anticausal")
	{
		AnalogCore core(net, pl, unit_kick(), 1);
		core.deliver_source_spike(0, 0, 0.0); // drives the neuron through row 0
		core.deliver_source_spike(1, 0, 2.0);
		core.advance_to(2.0);
		CHECK(core.anticausal(0, 1, 0) == 1); // round(exp(-0.2))
		CHECK(core.causal(0, 1, 0) == 0);
	}
	SUBCASE("rapid pairings saturate")
	{
		AnalogCore core(net, pl, unit_kick(), 1);
		for (int k = 0; k < 300; ++k) {
			core.deliver_source_spike(0, 0, 2.0 * k);
		}
		core.advance_to(600.0);
		CHECK(core.spikes().size() == 300);
		CHECK(core.causal(0, 0, 0) == 255);
	}
	SUBCASE("isolated causal pairings never touch the anticausal branch")
	{
		AnalogCore core(net, pl, unit_kick(), 1);
		for (int k = 0; k < 50; ++k) {
			core.deliver_source_spike(0, 0, 1000.0 * k);
		}
		core.advance_to(50'000.0);
		CHECK(core.spikes().size() == 50);
		CHECK(core.causal(0, 0, 0) == 50);
		CHECK(core.anticausal(0, 0, 0) == 0);
	}
	SUBCASE("reads reset when asked")
	{
		AnalogCore core(net, pl, unit_kick(), 1);
		core.deliver_source_spike(0, 0, 0.0);
		core.advance_to(0.0);
		CHECK(core.read_correlation(0, 0, kCol0, true, true).lane(0) == 1);
		CHECK(core.read_correlation(0, 0, kCol0, true, false).lane(0) == 0);
	}
}

TEST_CASE("spike counters")
{
	auto const net = pair_network(63, 0);
	auto const pl = placement::map_network(net);
	SUBCASE("30 spikes read 30")
	{
		AnalogCore core(net, pl, unit_kick(), 1);
		for (int k = 0; k < 30; ++k) {
			core.deliver_source_spike(0, 0, 5.0 * k);
		}
		core.advance_to(1000.0);
		CHECK(counter_of(core, true) == 30);
		CHECK(counter_of(core) == 0);
	}
	SUBCASE("counter wraps at 2^16")
	{
		AnalogCore core(net, pl, unit_kick(), 1);
		for (int k = 0; k < 65'540; ++k) {
			core.deliver_source_spike(0, 0, 2.0 * k);
		}
		core.advance_to(2.0 * 65'540);
		CHECK(core.spikes().size() == 65'540);
		CHECK(counter_of(core) == 4);
	}
}

TEST_CASE("weight access is masked and clamped")
{
	Network net;
	net.set_runtime(Time::from_us(1000));
	net.add_source({"s", 3, 0.0, std::nullopt});
	PopulationDesc pop;
	pop.id = "n";
	pop.size = 3;
	net.add_population(pop);
	ProjectionDesc p;
	p.id = "p";
	p.pre = "s";
	p.post = "n";
	p.connector.kind = ConnectorKind::one_to_one;
	p.weight_init = 10;
	net.add_projection(p);
	AnalogCore core(net, placement::map_network(net), {}, 1);
	std::array<std::uint16_t, 3> const cols{0, 1, 2};
	auto v = simd::Vector::splat(simd::LaneType::i16, 100);
	core.write_weights(0, 1, cols, v);
	CHECK(core.weight(0, 1, 0) == 0);
	CHECK(core.weight(0, 1, 1) == 63);
	CHECK(core.weight(0, 1, 2) == 0);
	v = simd::Vector::splat(simd::LaneType::i16, -5);
	core.write_weights(0, 1, cols, v);
	CHECK(core.weight(0, 1, 1) == 0);
	CHECK(core.read_weights(0, 2, cols).lane(2) == 10);
	CHECK(core.kick_scale() == doctest::Approx(0.5 / 63));
}

TEST_CASE("properties of driven runs")
{
	SUBCASE("checkpointing does not change the spike train")
	{
		auto const net = driven_network(8, 40, 20'000.0);
		auto const pl = placement::map_network(net);
		AnalogCore straight(net, pl, {}, 7);
		straight.advance_to(20'000.0);
		AnalogCore stepped(net, pl, {}, 7);
		std::mt19937_64 rng(11);
		std::uniform_real_distribution<double> step(0.0, 40.0);
		for (double t = 0.0; t < 20'000.0; t += step(rng)) {
			stepped.advance_to(t);
		}
		stepped.advance_to(20'000.0);
		REQUIRE_FALSE(straight.spikes().empty());
		CHECK(straight.spikes() == stepped.spikes());
	}
	SUBCASE("same seed, same spikes; other seed, other spikes")
	{
		auto const net = driven_network(4, 40, 10'000.0);
		auto const pl = placement::map_network(net);
		AnalogCore a(net, pl, {}, 3), b(net, pl, {}, 3), c(net, pl, {}, 4);
		a.advance_to(10'000.0);
		b.advance_to(10'000.0);
		c.advance_to(10'000.0);
		CHECK(a.spikes() == b.spikes());
		CHECK(a.spikes() != c.spikes());
	}
	SUBCASE("output rate is non-decreasing in the weight")
	{
		std::size_t previous = 0;
		for (int w = 0; w <= 63; ++w) {
			auto const net = driven_network(1, w, 20'000.0);
			AnalogCore core(net, placement::map_network(net), {}, 5);
			core.advance_to(20'000.0);
			CHECK(core.spikes().size() >= previous);
			previous = core.spikes().size();
		}
		CHECK(previous > 0);
	}
	SUBCASE("counters match the spike log")
	{
		auto const net = driven_network(16, 50, 30'000.0);
		AnalogCore core(net, placement::map_network(net), {}, 2);
		core.advance_to(30'000.0);
		std::array<std::uint16_t, 16> cols{};
		std::array<std::size_t, 16> logged{};
		for (std::uint16_t i = 0; i < 16; ++i) {
			cols[i] = i;
		}
		for (auto const& s : core.spikes()) {
			++logged.at(s.index);
		}
		auto const counts = core.read_counters(0, cols, false);
		for (std::size_t i = 0; i < 16; ++i) {
			CHECK(counts.lane(i) == static_cast<std::int32_t>(logged[i] % 65536));
		}
	}
}
