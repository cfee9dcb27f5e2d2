#include "hyplas/error.hpp"
#include "hyplas/recording/recording.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace hyplas::recording {

namespace {

std::vector<std::uint32_t> sorted_union(std::vector<std::uint32_t> v)
{
	std::sort(v.begin(), v.end());
	v.erase(std::unique(v.begin(), v.end()), v.end());
	return v;
}

std::size_t position(std::vector<std::uint32_t> const& sorted, std::uint32_t label)
{
	return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), label) - sorted.begin());
}

} // namespace

std::vector<ObservableSeries> to_series(RecordingStore const& store)
{
	std::vector<ObservableSeries> out;
	auto const& layouts = store.layouts();
	for (std::uint32_t r = 0; r < layouts.size(); ++r) {
		auto const& rule = layouts[r];
		// (observable, target) -> blocks as (processor, block index)
		std::map<std::pair<std::uint16_t, std::uint16_t>, std::vector<std::pair<std::uint32_t, std::size_t>>> groups;
		for (std::uint32_t p = 0; p < rule.processors.size(); ++p) {
			auto const& blocks = rule.processors[p].blocks;
			for (std::size_t b = 0; b < blocks.size(); ++b) {
				groups[{blocks[b].observable, blocks[b].target}].emplace_back(p, b);
			}
		}
		for (auto const& [key, members] : groups) {
			ObservableSeries s;
			s.rule = rule.rule;
			s.observable = rule.observables[key.first];
			s.target = key.second;
			std::vector<std::uint32_t> rows, cols;
			for (auto [p, b] : members) {
				auto const& blk = rule.processors[p].blocks[b];
				rows.insert(rows.end(), blk.row_labels.begin(), blk.row_labels.end());
				cols.insert(cols.end(), blk.column_labels.begin(), blk.column_labels.end());
			}
			s.rows = sorted_union(std::move(rows));
			s.columns = sorted_union(std::move(cols));
			for (std::uint32_t k = 0; k < rule.invocations; ++k) {
				ObservableSeries::Sample sample;
				sample.ordinal = k;
				sample.values.assign(s.rows.size() * s.columns.size(), 0);
				bool any_written = false;
				bool any_skipped = false;
				for (auto [p, b] : members) {
					SlotRef const slot{r, p, k};
					auto const st = store.status(slot);
					if (st == SlotStatus::absent) {
						continue;
					}
					sample.deadline = store.deadline(slot);
					if (st == SlotStatus::skipped) {
						any_skipped = true;
						continue;
					}
					any_written = true;
					auto const& blk = rule.processors[p].blocks[b];
					bool const unpacked = s.observable.layout == RecordLayout::unpacked;
					for (std::size_t i = 0; i < blk.rows; ++i) {
						auto const row = position(s.rows, blk.row_labels[i]);
						for (std::size_t c = 0; c < blk.columns.size(); ++c) {
							auto const col = position(s.columns, blk.column_labels[c]);
							sample.values[row * s.columns.size() + col] =
							    store.read(slot, b, i, unpacked ? blk.columns[c] : c);
						}
					}
				}
				sample.status = any_skipped ? SlotStatus::skipped
				                : any_written ? SlotStatus::written
				                              : SlotStatus::absent;
				s.samples.push_back(std::move(sample));
			}
			out.push_back(std::move(s));
		}
	}
	return out;
}

std::vector<ObservableSeries> deserialize(std::span<std::uint8_t const> image)
{
	return to_series(deserialize_store(image));
}

std::string csv_name(ObservableSeries const& s)
{
	return s.rule + "." + s.observable.name + "." + std::to_string(s.target) + ".csv";
}

std::string to_csv(ObservableSeries const& s)
{
	std::ostringstream os;
	os << "ordinal,deadline_us,row,column,value\n";
	for (auto const& sample : s.samples) {
		if (sample.status != SlotStatus::written) {
			continue;
		}
		auto const deadline = format_us(sample.deadline);
		for (std::size_t r = 0; r < s.rows.size(); ++r) {
			for (std::size_t c = 0; c < s.columns.size(); ++c) {
				os << sample.ordinal << ',' << deadline << ',' << s.rows[r] << ',' << s.columns[c] << ','
				   << sample.values[r * s.columns.size() + c] << '\n';
			}
		}
	}
	return os.str();
}

void export_csv(std::vector<ObservableSeries> const& series, std::filesystem::path const& dir)
{
	std::error_code ec;
	std::filesystem::create_directories(dir, ec);
	if (ec) {
		throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
	}
	for (auto const& s : series) {
		auto const path = dir / csv_name(s);
		std::ofstream f(path, std::ios::binary);
		f << to_csv(s);
		if (!f) {
			throw Error(Errc::Io, "cannot write " + path.string());
		}
	}
}

} // namespace hyplas::recording
