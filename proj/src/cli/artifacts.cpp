#include "hyplas/cli/commands.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace hyplas::cli {

namespace {

std::string shortest(double v)
{
	char buf[64];
	auto const [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
	return std::string(buf, end);
}

std::size_t plastic_synapses(placement::Placement const& pl, topology::Network const& net, topology::RuleId r)
{
	std::size_t n = 0;
	for (auto const p : net.projection_targets(r)) {
		for (auto const& f : pl.projections[p]) {
			n += static_cast<std::size_t>(std::count(f.connected.begin(), f.connected.end(), 1));
		}
	}
	return n;
}

} // namespace

std::string traces_csv(topology::Network const& net, std::vector<ppuvm::ExecutionTrace> const& traces)
{
	std::string out = "rule,ordinal,deadline_us,start_us,duration_us,skipped,processor\n";
	for (auto const& t : traces) {
		out += net.rules()[t.rule].id;
		out += ',' + std::to_string(t.ordinal) + ',' + format_us(t.deadline) + ',';
		if (!t.skipped) {
			out += format_us(t.start) + ',' + format_us(t.duration);
		} else {
			out += ',';
		}
		out += t.skipped ? ",1," : ",0,";
		out += std::to_string(t.processor) + '\n';
	}
	return out;
}

std::string spikes_csv(topology::Network const& net, std::vector<analogcore::SpikeRecord> const& spikes)
{
	std::string out = "time_us,population,neuron_index\n";
	for (auto const& s : spikes) {
		out += shortest(s.time_us) + ',' + net.populations()[s.population].id + ',' + std::to_string(s.index) + '\n';
	}
	return out;
}

std::string summary_json(ppuvm::Simulation const& sim, Time bin)
{
	using nlohmann::ordered_json;
	auto const& net = sim.network();
	ordered_json j;
	j["runtime_us"] = net.runtime().us();
	j["seed"] = net.seed();

	j["rules"] = ordered_json::array();
	for (topology::RuleId r = 0; r < net.rules().size(); ++r) {
		std::size_t traces = 0;
		std::size_t skipped = 0;
		std::int64_t offset_sum = 0;
		std::int64_t offset_max = 0;
		std::int64_t duration_sum = 0;
		std::map<std::uint32_t, std::int64_t> wall; // ordinal -> longest processor duration
		for (auto const& t : sim.traces()) {
			if (t.rule != r) {
				continue;
			}
			++traces;
			if (t.skipped) {
				++skipped;
				continue;
			}
			auto const offset = (t.start - t.deadline).ns();
			offset_sum += offset;
			offset_max = std::max(offset_max, offset);
			duration_sum += t.duration.ns();
			auto& w = wall[t.ordinal];
			w = std::max(w, t.duration.ns());
		}
		auto const executed = traces - skipped;
		auto const synapses = plastic_synapses(sim.placement(), net, r);
		ordered_json s;
		s["rule"] = net.rules()[r].id;
		s["events"] = net.rules()[r].timer.count;
		s["traces"] = traces;
		s["executed"] = executed;
		s["skipped"] = skipped;
		auto const mean = [](std::int64_t sum, std::size_t n) {
			return n == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(n) / 1000.0;
		};
		s["mean_offset_us"] = mean(offset_sum, executed);
		s["max_offset_us"] = static_cast<double>(offset_max) / 1000.0;
		s["mean_duration_us"] = mean(duration_sum, executed);
		s["plastic_synapses"] = synapses;
		std::int64_t wall_sum = 0;
		for (auto const& [_, w] : wall) {
			wall_sum += w;
		}
		s["duration_per_synapse_us"] =
		    synapses == 0 || wall.empty() ? 0.0 : mean(wall_sum, wall.size()) / static_cast<double>(synapses);
		j["rules"].push_back(s);
	}

	auto const bin_ns = bin.ns();
	auto const runtime_ns = net.runtime().ns();
	auto const bins = static_cast<std::size_t>((runtime_ns + bin_ns - 1) / bin_ns);
	std::vector<std::vector<std::uint64_t>> counts(net.populations().size(), std::vector<std::uint64_t>(bins, 0));
	for (auto const& sp : sim.spikes()) {
		auto const b = static_cast<std::size_t>(sp.time_us * 1000.0 / static_cast<double>(bin_ns));
		if (b < bins) {
			++counts[sp.population][b];
		}
	}
	j["bin_us"] = bin.us();
	j["populations"] = ordered_json::array();
	for (std::size_t p = 0; p < net.populations().size(); ++p) {
		auto const& pop = net.populations()[p];
		ordered_json e;
		e["population"] = pop.id;
		e["size"] = pop.size;
		e["spikes"] = ordered_json::array();
		e["rate_hz"] = ordered_json::array();
		for (std::size_t b = 0; b < bins; ++b) {
			auto const begin = static_cast<std::int64_t>(b) * bin_ns;
			auto const width = std::min(bin_ns, runtime_ns - begin);
			e["spikes"].push_back(counts[p][b]);
			e["rate_hz"].push_back(
			    static_cast<double>(counts[p][b]) / (static_cast<double>(pop.size) * static_cast<double>(width) * 1e-9));
		}
		j["populations"].push_back(e);
	}
	auto const costs = sim.programs().empty() ? ruledsl::CostTable{} : sim.programs().front().costs;
	j["budget"] = ordered_json::parse(placement::format_json(placement::check_budgets(net, sim.placement(), costs)));
	return j.dump(2) + '\n';
}

} // namespace hyplas::cli
