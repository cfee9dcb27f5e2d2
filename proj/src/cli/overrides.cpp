#include "hyplas/cli/commands.hpp"
#include "hyplas/topology/experiment.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

namespace hyplas::cli {

namespace {

[[noreturn]] void bad(std::string const& key, std::string const& why)
{
	throw Error(Errc::BadOverride, key + ": " + why);
}

double parse_real(std::string const& key, std::string const& text)
{
	double v = 0.0;
	auto const* end = text.data() + text.size();
	auto const [ptr, ec] = std::from_chars(text.data(), end, v);
	if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
		bad(key, "expected a number, got '" + text + "'");
	}
	return v;
}

std::uint64_t parse_count(std::string const& key, std::string const& text, std::uint64_t min)
{
	std::uint64_t v = 0;
	auto const* end = text.data() + text.size();
	auto const [ptr, ec] = std::from_chars(text.data(), end, v);
	if (ec != std::errc{} || ptr != end) {
		bad(key, "expected a non-negative integer, got '" + text + "'");
	}
	if (v < min) {
		bad(key, "must be at least " + std::to_string(min));
	}
	return v;
}

double positive(std::string const& key, std::string const& text)
{
	auto const v = parse_real(key, text);
	if (v <= 0.0) {
		bad(key, "must be positive");
	}
	return v;
}

double non_negative(std::string const& key, std::string const& text)
{
	auto const v = parse_real(key, text);
	if (v < 0.0) {
		bad(key, "must not be negative");
	}
	return v;
}

std::uint32_t cost(std::string const& key, std::string const& text)
{
	auto const v = parse_count(key, text, 0);
	if (v > std::numeric_limits<std::uint32_t>::max()) {
		bad(key, "out of range");
	}
	return static_cast<std::uint32_t>(v);
}

using Setter = std::function<void(Overrides&, std::string const&, std::string const&)>;

std::map<std::string, Setter> const& registry()
{
	static std::map<std::string, Setter> const r = {
	    {"clock_hz", [](Overrides& o, auto const& k, auto const& v) { o.sim.vm.clock_hz = parse_count(k, v, 1); }},
	    {"dispatch_cycles",
	     [](Overrides& o, auto const& k, auto const& v) { o.sim.vm.dispatch_cycles = parse_count(k, v, 0); }},
	    {"cold_cycles", [](Overrides& o, auto const& k, auto const& v) { o.sim.vm.cold_cycles = parse_count(k, v, 0); }},
	    {"cost.vector_per_hw",
	     [](Overrides& o, auto const& k, auto const& v) { o.sim.costs.vector_per_hw = cost(k, v); }},
	    {"cost.scalar", [](Overrides& o, auto const& k, auto const& v) { o.sim.costs.scalar = cost(k, v); }},
	    {"cost.intrinsic_row",
	     [](Overrides& o, auto const& k, auto const& v) { o.sim.costs.intrinsic_row = cost(k, v); }},
	    {"cost.loop_iteration",
	     [](Overrides& o, auto const& k, auto const& v) { o.sim.costs.loop_iteration = cost(k, v); }},
	    {"cost.packed_entry", [](Overrides& o, auto const& k, auto const& v) { o.sim.costs.packed_entry = cost(k, v); }},
	    {"cost.unpacked_row", [](Overrides& o, auto const& k, auto const& v) { o.sim.costs.unpacked_row = cost(k, v); }},
	    {"neuron.tau_m_us", [](Overrides& o, auto const& k, auto const& v) { o.cell.tau_m_us = positive(k, v); }},
	    {"neuron.threshold", [](Overrides& o, auto const& k, auto const& v) { o.cell.threshold = parse_real(k, v); }},
	    {"neuron.reset", [](Overrides& o, auto const& k, auto const& v) { o.cell.reset = parse_real(k, v); }},
	    {"neuron.rest", [](Overrides& o, auto const& k, auto const& v) { o.cell.rest = parse_real(k, v); }},
	    {"neuron.refractory_us",
	     [](Overrides& o, auto const& k, auto const& v) { o.cell.refractory_us = non_negative(k, v); }},
	    {"correlation.tau_us",
	     [](Overrides& o, auto const& k, auto const& v) { o.sim.core.correlation.tau_us = positive(k, v); }},
	    {"correlation.amplitude",
	     [](Overrides& o, auto const& k, auto const& v) { o.sim.core.correlation.amplitude = non_negative(k, v); }},
	    {"kick_scale", [](Overrides& o, auto const& k, auto const& v) { o.sim.core.kick_scale = non_negative(k, v); }},
	    {"runtime_us",
	     [](Overrides& o, auto const& k, auto const& v) { o.runtime = Time::from_us(positive(k, v)); }},
	};
	return r;
}

} // namespace

std::vector<std::string> override_keys()
{
	std::vector<std::string> keys;
	for (auto const& [k, _] : registry()) {
		keys.push_back(k);
	}
	return keys;
}

void apply_override(Overrides& o, std::string const& assignment)
{
	auto const eq = assignment.find('=');
	if (eq == std::string::npos || eq == 0) {
		throw Error(Errc::BadOverride, "expected KEY=VALUE, got '" + assignment + "'");
	}
	auto const key = assignment.substr(0, eq);
	auto const value = assignment.substr(eq + 1);
	auto const it = registry().find(key);
	if (it == registry().end()) {
		throw Error(Errc::BadOverride, "unknown key '" + key + "'");
	}
	it->second(o, key, value);
}

Overrides parse_overrides(std::vector<std::string> const& assignments)
{
	Overrides o;
	for (auto const& a : assignments) {
		apply_override(o, a);
	}
	return o;
}

topology::Network load(std::filesystem::path const& path, Overrides const& o)
{
	auto net = topology::load_experiment(path, o.cell);
	if (o.runtime) {
		net.set_runtime(*o.runtime);
	}
	return net;
}

} // namespace hyplas::cli
