#include "hyplas/placement/placement.hpp"

#include "hyplas/topology/compile.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace hyplas::placement {

using topology::ConnectorKind;
using topology::Network;

namespace {

std::vector<std::pair<std::uint32_t, std::uint32_t>> synapses_of(Network const& net, std::size_t p)
{
	auto const& proj = net.projections()[p];
	auto const& c = proj.connector;
	auto const pre_size = net.size_of(net.pre_of(p));
	auto const post_size = net.populations()[*net.find_population(proj.post)].size;
	std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
	switch (c.kind) {
		case ConnectorKind::all_to_all:
			for (std::uint32_t i = 0; i < pre_size; ++i) {
				for (std::uint32_t j = 0; j < post_size; ++j) {
					out.emplace_back(i, j);
				}
			}
			break;
		case ConnectorKind::one_to_one:
			for (std::uint32_t i = 0; i < pre_size; ++i) {
				out.emplace_back(i, i);
			}
			break;
		case ConnectorKind::rectangle:
			for (auto i : c.pre) {
				for (auto j : c.post) {
					out.emplace_back(i, j);
				}
			}
			break;
		case ConnectorKind::pairs: out = c.pairs; break;
	}
	return out;
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> v)
{
	std::sort(v.begin(), v.end());
	v.erase(std::unique(v.begin(), v.end()), v.end());
	return v;
}

std::string ranges(std::vector<std::uint16_t> const& v)
{
	std::string s;
	for (std::size_t i = 0; i < v.size();) {
		auto j = i;
		while (j + 1 < v.size() && v[j + 1] == v[j] + 1) {
			++j;
		}
		if (!s.empty()) {
			s += ',';
		}
		s += std::to_string(v[i]);
		if (j > i) {
			s += ".." + std::to_string(v[j]);
		}
		i = j + 1;
	}
	return s.empty() ? "-" : s;
}

} // namespace

Placement map_network(Network const& net)
{
	Placement pl;
	std::uint32_t slot = 0;
	for (auto const& pop : net.populations()) {
		std::vector<NeuronSlot> slots;
		for (std::uint32_t i = 0; i < pop.size; ++i, ++slot) {
			if (slot >= kChipNeurons) {
				throw Error(Errc::Unmappable, "population '" + pop.id + "' exceeds the neuron capacity");
			}
			slots.push_back(
			    {static_cast<std::uint8_t>(slot / kNeuronsPerHemisphere),
			     static_cast<std::uint16_t>(slot % kNeuronsPerHemisphere)});
		}
		pl.populations.push_back(std::move(slots));
	}

	std::array<std::uint32_t, kHemispheres> next_row{};
	for (std::size_t p = 0; p < net.projections().size(); ++p) {
		auto const& proj = net.projections()[p];
		auto const& post_slots = pl.populations[*net.find_population(proj.post)];
		auto const syn = synapses_of(net, p);
		if (proj.connector.kind == ConnectorKind::pairs && sorted_unique(syn).size() != syn.size()) {
			throw Error(Errc::Unmappable, "projection '" + proj.id + "': duplicate synapses");
		}
		std::vector<Footprint> parts;
		for (std::uint8_t h = 0; h < kHemispheres; ++h) {
			std::vector<std::uint32_t> pre;
			std::vector<std::uint32_t> post;
			std::vector<std::pair<std::uint32_t, std::uint32_t>> local;
			for (auto const& s : syn) {
				if (post_slots[s.second].hemisphere == h) {
					pre.push_back(s.first);
					post.push_back(s.second);
					local.push_back(s);
				}
			}
			if (local.empty()) {
				continue;
			}
			Footprint f;
			f.hemisphere = h;
			f.pre = sorted_unique(pre);
			f.post = sorted_unique(post);
			if (proj.connector.kind == ConnectorKind::pairs &&
			    local.size() != f.pre.size() * f.post.size()) {
				throw Error(
				    Errc::Unmappable,
				    "projection '" + proj.id + "': connector is not a rectangle on hemisphere " +
				        std::to_string(h));
			}
			if (next_row[h] + f.pre.size() > kRowsPerHemisphere) {
				throw Error(
				    Errc::Unmappable, "projection '" + proj.id + "': synapse rows exhausted on hemisphere " +
				                          std::to_string(h));
			}
			for (std::size_t r = 0; r < f.pre.size(); ++r) {
				f.rows.push_back(static_cast<std::uint16_t>(next_row[h] + r));
			}
			next_row[h] += static_cast<std::uint32_t>(f.pre.size());
			std::vector<std::size_t> col_of(post_slots.size(), 0);
			for (std::size_t c = 0; c < f.post.size(); ++c) {
				f.columns.push_back(post_slots[f.post[c]].column);
				col_of[f.post[c]] = c;
			}
			std::vector<std::size_t> row_of(net.size_of(net.pre_of(p)), 0);
			for (std::size_t r = 0; r < f.pre.size(); ++r) {
				row_of[f.pre[r]] = r;
			}
			f.connected.assign(f.pre.size() * f.post.size(), 0);
			for (auto const& s : local) {
				f.connected[row_of[s.first] * f.post.size() + col_of[s.second]] = 1;
			}
			parts.push_back(std::move(f));
		}
		pl.projections.push_back(std::move(parts));
	}

	for (topology::RuleId r = 0; r < net.rules().size(); ++r) {
		RuleViews views(kHemispheres);
		for (std::uint8_t h = 0; h < kHemispheres; ++h) {
			for (auto p : net.projection_targets(r)) {
				std::optional<SynapseArrayView> v;
				for (auto const& f : pl.projections[p]) {
					if (f.hemisphere == h) {
						v = SynapseArrayView{h, f.rows, f.columns};
					}
				}
				views[h].synapses.push_back(std::move(v));
			}
			for (auto q : net.population_targets(r)) {
				NeuronView v{h, {}};
				for (auto const& s : pl.populations[q]) {
					if (s.hemisphere == h) {
						v.columns.push_back(s.column);
					}
				}
				views[h].neurons.push_back(
				    v.columns.empty() ? std::nullopt : std::optional<NeuronView>(std::move(v)));
			}
		}
		pl.rules.push_back(std::move(views));
	}
	return pl;
}

std::string describe(Placement const& pl, Network const& net)
{
	std::ostringstream os;
	for (std::size_t q = 0; q < pl.populations.size(); ++q) {
		os << "population " << net.populations()[q].id << ":";
		for (std::uint8_t h = 0; h < kHemispheres; ++h) {
			std::vector<std::uint16_t> cols;
			for (auto const& s : pl.populations[q]) {
				if (s.hemisphere == h) {
					cols.push_back(s.column);
				}
			}
			if (!cols.empty()) {
				os << " h" << int{h} << " columns " << ranges(cols);
			}
		}
		os << '\n';
	}
	for (std::size_t p = 0; p < pl.projections.size(); ++p) {
		os << "projection " << net.projections()[p].id << ":";
		for (auto const& f : pl.projections[p]) {
			auto const n = static_cast<std::size_t>(std::count(f.connected.begin(), f.connected.end(), 1));
			os << " h" << int{f.hemisphere} << " rows " << ranges(f.rows) << " columns "
			   << ranges(f.columns) << " (" << n << " synapses)";
		}
		os << '\n';
	}
	for (std::size_t r = 0; r < pl.rules.size(); ++r) {
		os << "rule " << net.rules()[r].id << ":";
		auto const proj = net.projection_targets(r);
		auto const pops = net.population_targets(r);
		for (std::size_t h = 0; h < pl.rules[r].size(); ++h) {
			os << " p" << h << " {";
			bool first = true;
			auto item = [&](std::string const& s) {
				os << (first ? "" : " ") << s;
				first = false;
			};
			for (std::size_t i = 0; i < proj.size(); ++i) {
				if (pl.rules[r][h].synapses[i]) {
					item("synapses[" + std::to_string(i) + "]=" + net.projections()[proj[i]].id);
				}
			}
			for (std::size_t i = 0; i < pops.size(); ++i) {
				if (pl.rules[r][h].neurons[i]) {
					item("neurons[" + std::to_string(i) + "]=" + net.populations()[pops[i]].id);
				}
			}
			os << "}";
		}
		os << '\n';
	}
	return os.str();
}

std::size_t location_entries(
    std::vector<ProjectionShape> const& projections, std::vector<std::size_t> const& populations)
{
	std::size_t n = 0;
	for (auto const& p : projections) {
		n += p.rows + p.columns;
	}
	for (auto q : populations) {
		n += q;
	}
	return n;
}

std::array<std::size_t, kHemispheres> location_memory_entries(Placement const& pl, topology::RuleId rule)
{
	std::array<std::size_t, kHemispheres> out{};
	auto const& views = pl.rules.at(rule);
	for (std::size_t h = 0; h < kHemispheres; ++h) {
		std::vector<ProjectionShape> shapes;
		std::vector<std::size_t> pops;
		for (auto const& v : views[h].synapses) {
			if (v) {
				shapes.push_back({v->rows.size(), v->columns.size()});
			}
		}
		for (auto const& v : views[h].neurons) {
			if (v) {
				pops.push_back(v->columns.size());
			}
		}
		out[h] = location_entries(shapes, pops);
	}
	return out;
}

std::size_t block_bytes(simd::LaneType dtype, RecordLayout layout, std::size_t rows, std::size_t used)
{
	auto const per_row = layout == RecordLayout::unpacked ? std::size_t{simd::kRowLanes} : used;
	return simd::lane_bytes(dtype) * rows * per_row;
}

namespace {

std::size_t recording_bytes(
    Network const& net, Placement const& pl, topology::RuleId rule, bool force_packed)
{
	std::size_t total = 0;
	auto const& views = pl.rules.at(rule);
	for (auto const& o : net.rules().at(rule).observables) {
		auto const layout = force_packed ? RecordLayout::packed : o.layout;
		for (auto const& pv : views) {
			if (o.scope == ObservableScope::synapse) {
				for (auto const& v : pv.synapses) {
					if (v) {
						total += block_bytes(o.dtype, layout, v->rows.size(), v->columns.size());
					}
				}
			} else {
				for (auto const& v : pv.neurons) {
					if (v) {
						total += block_bytes(o.dtype, layout, 1, v->columns.size());
					}
				}
			}
		}
	}
	return total;
}

} // namespace

std::size_t recording_bytes_per_invocation(Network const& net, Placement const& pl, topology::RuleId rule)
{
	return recording_bytes(net, pl, rule, false);
}

BudgetReport check_budgets(Network const& net, Placement const& pl, ruledsl::CostTable const& costs)
{
	BudgetReport report;
	for (topology::RuleId r = 0; r < net.rules().size(); ++r) {
		RuleBudget b;
		b.rule = net.rules()[r].id;
		b.location_entries = location_memory_entries(pl, r);
		auto const program = ruledsl::lower(topology::compile_rule(net, r), pl.rules[r], costs, false);
		b.image_bytes = ruledsl::image_bytes(program);
		b.recording_per_invocation = recording_bytes(net, pl, r, false);
		b.packed_equivalent = recording_bytes(net, pl, r, true);
		b.invocations = net.rules()[r].timer.count;
		b.recording_total = std::uint64_t{b.recording_per_invocation} * b.invocations;
		report.image_bytes += b.image_bytes;
		report.recording_bytes += b.recording_total;
		report.rules.push_back(std::move(b));
	}
	return report;
}

std::string format_text(BudgetReport const& report)
{
	std::ostringstream os;
	char line[160];
	for (auto const& b : report.rules) {
		os << "rule " << b.rule << '\n';
		std::snprintf(
		    line, sizeof line, "  %-26s p0 %zu  p1 %zu\n", "location entries", b.location_entries[0],
		    b.location_entries[1]);
		os << line;
		std::snprintf(line, sizeof line, "  %-26s %zu\n", "program image bytes", b.image_bytes);
		os << line;
		std::snprintf(
		    line, sizeof line, "  %-26s %zu\n", "recording bytes/invocation", b.recording_per_invocation);
		os << line;
		double const factor = b.packed_equivalent == 0
		                          ? 1.0
		                          : static_cast<double>(b.recording_per_invocation) /
		                                static_cast<double>(b.packed_equivalent);
		std::snprintf(
		    line, sizeof line, "  %-26s %zu (overhead x%.2f)\n", "packed equivalent", b.packed_equivalent,
		    factor);
		os << line;
		std::snprintf(line, sizeof line, "  %-26s %u\n", "invocations", b.invocations);
		os << line;
		std::snprintf(
		    line, sizeof line, "  %-26s %llu\n", "recording bytes total",
		    static_cast<unsigned long long>(b.recording_total));
		os << line;
	}
	std::snprintf(
	    line, sizeof line, "%-28s %zu / %zu bytes  %s\n", "program image (SRAM+BRAM)", report.image_bytes,
	    report.image_budget, report.image_ok() ? "PASS" : "FAIL");
	os << line;
	std::snprintf(
	    line, sizeof line, "%-28s %llu / %llu bytes  %s\n", "recording (DRAM)",
	    static_cast<unsigned long long>(report.recording_bytes),
	    static_cast<unsigned long long>(report.dram_budget), report.dram_ok() ? "PASS" : "FAIL");
	os << line;
	return os.str();
}

std::string format_json(BudgetReport const& report)
{
	nlohmann::ordered_json j;
	j["rules"] = nlohmann::ordered_json::array();
	for (auto const& b : report.rules) {
		nlohmann::ordered_json r;
		r["rule"] = b.rule;
		r["location_entries"] = b.location_entries;
		r["image_bytes"] = b.image_bytes;
		r["recording_bytes_per_invocation"] = b.recording_per_invocation;
		r["packed_equivalent_bytes"] = b.packed_equivalent;
		r["invocations"] = b.invocations;
		r["recording_bytes_total"] = b.recording_total;
		j["rules"].push_back(r);
	}
	j["image_bytes"] = report.image_bytes;
	j["image_budget"] = report.image_budget;
	j["image_ok"] = report.image_ok();
	j["recording_bytes"] = report.recording_bytes;
	j["dram_budget"] = report.dram_budget;
	j["dram_ok"] = report.dram_ok();
	return j.dump(2);
}

} // namespace hyplas::placement
