#include "doctest.h"

#include "hyplas/topology/compile.hpp"
#include "hyplas/topology/experiment.hpp"
#include "hyplas/topology/network.hpp"
#include "support/networks.hpp"

#include <algorithm>

using namespace hyplas;
using namespace hyplas::topology;

namespace {

Errc error_of(auto&& f)
{
	try {
		f();
	} catch (Error const& e) {
		return e.code();
	}
	FAIL("no error raised");
	return Errc::Io;
}

PopulationDesc population(std::string id, std::uint32_t size)
{
	PopulationDesc p;
	p.id = std::move(id);
	p.size = size;
	return p;
}

std::string const kMinimalExperiment = R"({
  "runtime": 1000,
  "seed": 3,
  "sources": [{"id": "in", "rate": 1000}],
  "populations": [{"id": "pop", "size": 4, "plasticity_rule": "r"}],
  "rules": [{"id": "r", "kernel": "rule r { }", "timer": {"start": 0, "period": 100, "count": 3}}],
  "projections": [{"id": "p", "pre": "in", "post": "pop", "connector": "all_to_all", "weight_init": 5}]
})";

} // namespace

TEST_CASE("add_population: capacity boundary")
{
	Network net;
	CHECK(net.add_population(population("a", 512)) == 0);
	CHECK(error_of([&] { net.add_population(population("b", 1)); }) == Errc::CapacityExceeded);

	Network two;
	auto const x = two.add_population(population("x", 1));
	auto const y = two.add_population(population("y", 1));
	CHECK(x != y);
}

TEST_CASE("add_population: parameter checks")
{
	Network net;
	auto p = population("a", 4);
	p.cell.tau_m_us = 0;
	CHECK(error_of([&] { net.add_population(p); }) == Errc::InvalidParams);
	p.cell.tau_m_us = 10;
	p.cell.threshold = p.cell.reset;
	CHECK(error_of([&] { net.add_population(p); }) == Errc::InvalidParams);
	CHECK(error_of([&] { net.add_population(population("b", 0)); }) == Errc::InvalidParams);
	net.add_population(population("c", 1));
	CHECK(error_of([&] { net.add_population(population("c", 1)); }) == Errc::DuplicateId);
}

TEST_CASE("add_projection: synapse counts and errors")
{
	Network net;
	net.add_source({"src", 1, 1000.0, std::nullopt});
	net.add_source({"src256", 256, 1000.0, std::nullopt});
	net.add_population(population("a", 64));
	net.add_population(population("b", 256));
	ProjectionDesc p;
	p.id = "p";
	p.pre = "src";
	p.post = "a";
	CHECK(net.synapse_count(net.add_projection(p)) == 64);
	p.id = "q";
	p.pre = "src256";
	p.post = "b";
	p.connector.kind = ConnectorKind::one_to_one;
	CHECK(net.synapse_count(net.add_projection(p)) == 256);

	p.id = "bad";
	p.pre = "nowhere";
	CHECK(error_of([&] { net.add_projection(p); }) == Errc::UnknownEndpoint);
	p.pre = "src";
	p.post = "nowhere";
	CHECK(error_of([&] { net.add_projection(p); }) == Errc::UnknownEndpoint);
	p.post = "a";
	p.connector.kind = ConnectorKind::all_to_all;
	p.weight_init = net.w_max() + 1;
	CHECK(error_of([&] { net.add_projection(p); }) == Errc::WeightOutOfRange);
	p.weight_init = net.w_max();
	CHECK_NOTHROW(net.add_projection(p));
}

TEST_CASE("define_rule: observables, kernels and timers")
{
	Network net;
	PlasticityRuleDesc r;
	r.id = "r";
	r.kernel_source = "rule r { }";
	r.observables = {{"w", simd::LaneType::u8, ObservableScope::synapse, RecordLayout::packed}};
	CHECK(net.define_rule(r) == 0);

	r.id = "dup";
	r.observables.push_back(r.observables.front());
	CHECK(error_of([&] { net.define_rule(r); }) == Errc::DuplicateObservableName);

	r.id = "syntax";
	r.observables.clear();
	r.kernel_source = "rule r { let }";
	CHECK(error_of([&] { net.define_rule(r); }) == Errc::KernelSyntaxError);

	r.id = "oneshot";
	r.kernel_source = "rule r { }";
	r.timer = {Time::from_us(10), Time::from_us(1), 1};
	net.define_rule(r);
	CHECK(net.rules().back().timer.last_deadline() == Time::from_us(10));
}

TEST_CASE("validate: homeostasis network is clean")
{
	auto const net = test::homeostasis_network(64);
	CHECK(validate(net).empty());
	CHECK(validate(net) == validate(net));
}

TEST_CASE("validate: diagnostics")
{
	SUBCASE("unattached rule warns")
	{
		Network net;
		net.set_runtime(Time::from_us(100));
		net.define_rule({"lonely", "rule lonely { }", {}, {}});
		auto const d = validate(net);
		REQUIRE(d.size() == 1);
		CHECK(d[0].severity == Severity::warning);
		CHECK_FALSE(has_errors(d));
	}
	SUBCASE("deadline beyond runtime")
	{
		auto net = test::homeostasis_network(8);
		net.set_runtime(Time::from_us(1000));
		auto const d = validate(net);
		CHECK(has_errors(d));
		CHECK(d.front().entity == "homeostasis");
	}
	SUBCASE("unknown rule")
	{
		Network net;
		net.set_runtime(Time::from_us(100));
		auto p = population("p", 1);
		p.plasticity_rule = "missing";
		net.add_population(p);
		auto const d = validate(net);
		REQUIRE(d.size() == 1);
		CHECK(d[0].code == Errc::UnknownRule);
	}
	SUBCASE("type errors carry kernel positions")
	{
		Network net;
		net.set_runtime(Time::from_us(100));
		auto p = population("p", 1);
		p.plasticity_rule = "r";
		net.add_population(p);
		net.define_rule({"r", "rule r {\n  let c = read_counters(neurons[3], keep);\n}", {}, {}});
		auto const d = validate(net);
		REQUIRE(d.size() == 1);
		CHECK(d[0].code == Errc::UnknownView);
		REQUIRE(d[0].pos.has_value());
		CHECK(d[0].pos->line == 2);
	}
}

TEST_CASE("validate: permuted construction gives the same diagnostics")
{
	auto build = [](bool reversed) {
		Network net;
		net.set_runtime(Time::from_us(100));
		std::vector<std::string> ids = {"a", "b", "c"};
		if (reversed) {
			std::reverse(ids.begin(), ids.end());
		}
		for (auto const& id : ids) {
			auto p = population(id, 3);
			p.plasticity_rule = "r";
			net.add_population(p);
		}
		net.define_rule({"r", "rule r { let c = read_counters(neurons[2], keep); }", {}, {}});
		return net;
	};
	auto const a = build(false);
	auto const b = build(true);
	CHECK(validate(a) == validate(b));
	CHECK(a.populations()[a.population_targets(0)[2]].id == "c");
	CHECK(b.populations()[b.population_targets(0)[2]].id == "c");
}

TEST_CASE("experiment: load, defaults and round trip")
{
	auto const net = parse_experiment(kMinimalExperiment, ".");
	CHECK(net.runtime() == Time::from_us(1000));
	CHECK(net.seed() == 3);
	CHECK(net.w_max() == 63);
	CHECK(net.populations().at(0).cell == CellParams{});
	CHECK(net.rules().at(0).timer.count == 3);
	CHECK(validate(net).empty());

	auto const again = parse_experiment(to_json(net), ".");
	CHECK(to_json(again) == to_json(net));
}

TEST_CASE("experiment: kernel file relative to the experiment")
{
	std::string const text = R"({
  "runtime": 500000, "seed": 1,
  "sources": [{"id": "drive", "rate": 120000}],
  "populations": [{"id": "targets", "size": 4, "plasticity_rule": "homeostasis"}],
  "rules": [{"id": "homeostasis", "kernel_file": "homeostasis.prk",
             "timer": {"start": 5000, "period": 5000, "count": 100},
             "observables": [{"name": "counts", "dtype": "u16", "scope": "neuron"},
                             {"name": "weight", "dtype": "u8", "scope": "synapse", "layout": "packed"},
                             {"name": "dw", "dtype": "i8", "scope": "synapse"}]}],
  "projections": [{"id": "plastic", "pre": "drive", "post": "targets", "connector": "all_to_all",
                   "weight_init": 31, "plasticity_rule": "homeostasis"}]
})";
	auto const net = parse_experiment(text, "data");
	CHECK(net.rules()[0].kernel_source == test::homeostasis_kernel());
	CHECK(validate(net).empty());
}

TEST_CASE("experiment: schema errors")
{
	auto mutate = [](std::string const& from, std::string const& to) {
		auto s = kMinimalExperiment;
		auto const at = s.find(from);
		REQUIRE(at != std::string::npos);
		s.replace(at, from.size(), to);
		return s;
	};
	CHECK(error_of([&] { parse_experiment(mutate("\"runtime\": 1000,", ""), "."); }) == Errc::InvalidExperiment);
	CHECK(error_of([&] { parse_experiment(mutate("\"seed\"", "\"sead\""), "."); }) == Errc::InvalidExperiment);
	CHECK(error_of([&] { parse_experiment(mutate("\"all_to_all\"", "\"ring\""), "."); }) == Errc::InvalidExperiment);
	CHECK(error_of([&] { parse_experiment(mutate("\"weight_init\": 5", "\"weight_init\": 64"), "."); }) == Errc::WeightOutOfRange);
	CHECK(error_of([&] { parse_experiment(mutate("\"pre\": \"in\"", "\"pre\": \"out\""), "."); }) == Errc::UnknownEndpoint);
	CHECK(error_of([&] { parse_experiment(mutate("rule r { }", "rule r {"), "."); }) == Errc::KernelSyntaxError);
	CHECK(error_of([&] { parse_experiment("{\n  \"runtime\": ,\n}", "."); }) == Errc::InvalidExperiment);
	try {
		parse_experiment("{\n  \"runtime\": ,\n}", ".");
	} catch (PositionedError const& e) {
		CHECK(e.pos().line == 2);
	}
	auto const zero = parse_experiment(mutate("\"runtime\": 1000", "\"runtime\": 0"), ".");
	CHECK(has_errors(validate(zero)));
}

TEST_CASE("compile: signature follows attached entities")
{
	auto const net = test::homeostasis_network(64);
	auto const sig = signature_of(net, 0);
	CHECK(sig.synapse_views == 1);
	CHECK(sig.neuron_views == 1);
	CHECK(sig.observables.size() == 3);
	CHECK_NOTHROW(compile_rule(net, 0));
}
