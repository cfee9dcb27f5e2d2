#include "hyplas/error.hpp"
#include "hyplas/recording/recording.hpp"

#include <algorithm>

namespace hyplas::recording {

std::size_t RuleLayout::bytes_per_invocation() const
{
	std::size_t total = 0;
	for (auto const& p : processors) {
		total += p.bytes;
	}
	return total;
}

namespace {

placement::Footprint const* footprint_on(
    placement::Placement const& pl, topology::ProjectionId proj, std::uint8_t hemisphere)
{
	for (auto const& f : pl.projections.at(proj)) {
		if (f.hemisphere == hemisphere) {
			return &f;
		}
	}
	return nullptr;
}

} // namespace

RuleLayout allocate_layout(
    topology::Network const& net, placement::Placement const& pl, topology::RuleId rule)
{
	auto const& desc = net.rules().at(rule);
	auto const& views = pl.rules.at(rule);
	auto const projections = net.projection_targets(rule);
	auto const populations = net.population_targets(rule);

	RuleLayout out;
	out.rule = desc.id;
	out.observables = desc.observables;
	out.invocations = desc.timer.count;
	out.processors.resize(views.size());
	for (std::size_t p = 0; p < views.size(); ++p) {
		auto& proc = out.processors[p];
		auto const hemisphere = static_cast<std::uint8_t>(p);
		for (std::size_t o = 0; o < desc.observables.size(); ++o) {
			auto const& decl = desc.observables[o];
			auto const extent = [&](std::size_t used) {
				return static_cast<std::uint16_t>(
				    decl.layout == RecordLayout::unpacked ? simd::kRowLanes : used);
			};
			if (decl.scope == ObservableScope::synapse) {
				for (std::size_t t = 0; t < views[p].synapses.size(); ++t) {
					auto const& v = views[p].synapses[t];
					if (!v) {
						continue;
					}
					auto const* f = footprint_on(pl, projections.at(t), hemisphere);
					BlockLayout b;
					b.observable = static_cast<std::uint16_t>(o);
					b.target = static_cast<std::uint16_t>(t);
					b.rows = static_cast<std::uint16_t>(v->rows.size());
					b.row_extent = extent(v->columns.size());
					b.columns = v->columns;
					b.row_labels = f->pre;
					b.column_labels = f->post;
					proc.blocks.push_back(std::move(b));
				}
			} else {
				for (std::size_t t = 0; t < views[p].neurons.size(); ++t) {
					auto const& v = views[p].neurons[t];
					if (!v) {
						continue;
					}
					auto const& slots = pl.populations.at(populations.at(t));
					BlockLayout b;
					b.observable = static_cast<std::uint16_t>(o);
					b.target = static_cast<std::uint16_t>(t);
					b.rows = 1;
					b.row_extent = extent(v->columns.size());
					b.columns = v->columns;
					b.row_labels = {0};
					for (std::uint32_t i = 0; i < slots.size(); ++i) {
						if (slots[i].hemisphere == hemisphere) {
							b.column_labels.push_back(i);
						}
					}
					proc.blocks.push_back(std::move(b));
				}
			}
		}
		for (auto& b : proc.blocks) {
			b.offset = proc.bytes;
			proc.bytes += b.bytes(desc.observables[b.observable].dtype);
		}
		proc.stride = (proc.bytes + kSlotAlignment - 1) / kSlotAlignment * kSlotAlignment;
	}
	return out;
}

} // namespace hyplas::recording
