#include "doctest.h"

#include "hyplas/recording/recording.hpp"
#include "support/networks.hpp"
#include "support/random_recording.hpp"

#include <filesystem>
#include <map>
#include <random>
#include <tuple>

using namespace hyplas;
using namespace hyplas::recording;
using namespace hyplas::topology;
using simd::LaneType;
using test::random_network;
using test::random_vector;
using test::store_for;

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

/// Source "s" (`rows` neurons) all-to-all onto population "n" (`neurons`), both under rule "r".
Network single_rule(std::uint32_t rows, std::uint32_t neurons, std::vector<ObservableDecl> obs, std::uint32_t count = 2)
{
	Network net;
	net.set_runtime(Time::from_us(1'000'000));
	net.add_source({"s", rows, 1.0, std::nullopt});
	PopulationDesc pop;
	pop.id = "n";
	pop.size = neurons;
	pop.plasticity_rule = "r";
	net.add_population(pop);
	PlasticityRuleDesc r;
	r.id = "r";
	r.kernel_source = "rule r { }";
	r.timer = {Time::from_us(100), Time::from_us(100), count};
	r.observables = std::move(obs);
	net.define_rule(r);
	ProjectionDesc p;
	p.id = "p";
	p.pre = "s";
	p.post = "n";
	p.plasticity_rule = "r";
	net.add_projection(p);
	return net;
}

} // namespace

TEST_CASE("allocate_layout")
{
	SUBCASE("unpacked u8 synapse rows take 256 entries each")
	{
		auto const net = single_rule(2, 10, {{"w", LaneType::u8, ObservableScope::synapse, RecordLayout::unpacked}});
		auto const l = allocate_layout(net, placement::map_network(net), 0);
		REQUIRE(l.processors[0].blocks.size() == 1);
		auto const& b = l.processors[0].blocks[0];
		CHECK(b.rows == 2);
		CHECK(b.row_extent == 256);
		CHECK(b.bytes(LaneType::u8) == 512);
		CHECK(l.processors[1].blocks.empty());
		CHECK(l.processors[1].stride == 0);
	}
	SUBCASE("packed u16 neuron block of 64 neurons is 128 bytes")
	{
		auto const net = single_rule(1, 64, {{"c", LaneType::u16, ObservableScope::neuron, RecordLayout::packed}});
		auto const l = allocate_layout(net, placement::map_network(net), 0);
		REQUIRE(l.processors[0].blocks.size() == 1);
		CHECK(l.processors[0].blocks[0].bytes(LaneType::u16) == 128);
		CHECK(l.processors[0].stride == 128);
	}
	SUBCASE("blocks follow declaration order and slots are 128-byte aligned")
	{
		auto const net = single_rule(
		    3, 5,
		    {{"a", LaneType::i8, ObservableScope::synapse, RecordLayout::packed},
		     {"b", LaneType::u16, ObservableScope::neuron, RecordLayout::packed}});
		auto const l = allocate_layout(net, placement::map_network(net), 0);
		auto const& p = l.processors[0];
		REQUIRE(p.blocks.size() == 2);
		CHECK(p.blocks[0].observable == 0);
		CHECK(p.blocks[0].offset == 0);
		CHECK(p.blocks[1].offset == 15);
		CHECK(p.bytes == 25);
		CHECK(p.stride == 128);
		CHECK(p.blocks[0].row_labels == std::vector<std::uint32_t>{0, 1, 2});
		CHECK(p.blocks[1].column_labels == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
	}
	SUBCASE("layout size equals the placement estimate for random rules")
	{
		std::mt19937_64 rng(42);
		for (int i = 0; i < 20; ++i) {
			auto const net = random_network(rng);
			auto const pl = placement::map_network(net);
			auto const l = allocate_layout(net, pl, 0);
			CHECK(l.bytes_per_invocation() == placement::recording_bytes_per_invocation(net, pl, 0));
			// Totality: blocks tile [0, bytes) and the rest of the stride is padding.
			for (auto const& p : l.processors) {
				std::size_t end = 0;
				for (auto const& b : p.blocks) {
					CHECK(b.offset == end);
					end += b.bytes(l.observables[b.observable].dtype);
				}
				CHECK(end == p.bytes);
				CHECK(p.stride % kSlotAlignment == 0);
				CHECK(p.stride - p.bytes < kSlotAlignment);
			}
		}
	}
	SUBCASE("over-budget recordings are rejected")
	{
		auto const net = single_rule(
		    2, 10, {{"w", LaneType::u8, ObservableScope::synapse, RecordLayout::unpacked}}, 1000);
		CHECK(error_of([&] { store_for(net, 512 * 999); }) == Errc::DramBudgetExceeded);
		CHECK(store_for(net, 512 * 1000).arena().size() == 512 * 1000);
	}
}

TEST_CASE("RecordingStore writes")
{
	auto const net = single_rule(
	    2, 100,
	    {{"w", LaneType::u8, ObservableScope::synapse, RecordLayout::unpacked},
	     {"c", LaneType::u8, ObservableScope::neuron, RecordLayout::packed}});
	auto store = store_for(net);
	std::mt19937_64 rng(5);
	SUBCASE("unpacked rows round-trip all 256 entries")
	{
		auto const s = store.open(0, 0, 1, Time::from_us(200));
		auto const v = random_vector(rng, LaneType::u8);
		store.write_row(s, 0, 1, v);
		for (std::size_t i = 0; i < 256; ++i) {
			CHECK(store.read(s, 0, 1, i) == v.lane(i));
		}
	}
	SUBCASE("a packed write of 100 entries touches exactly 100 bytes")
	{
		auto const before = store.arena();
		auto const s = store.open(0, 0, 0, Time::from_us(100));
		auto v = simd::Vector::splat(LaneType::u8, 0xAB);
		store.write_packed(s, 1, 0, v);
		std::size_t changed = 0;
		for (std::size_t i = 0; i < before.size(); ++i) {
			changed += before[i] != store.arena()[i];
		}
		CHECK(changed == 100);
	}
	SUBCASE("writes outside allocated slots overflow")
	{
		auto const s = store.open(0, 0, 0, Time::from_us(100));
		auto const v = simd::Vector(LaneType::u8);
		CHECK(error_of([&] { store.write_row(s, 0, 2, v); }) == Errc::RecordingOverflow);
		CHECK(error_of([&] { store.write_row(s, 5, 0, v); }) == Errc::RecordingOverflow);
		CHECK(error_of([&] { store.write_packed(s, 0, 0, v); }) == Errc::RecordingOverflow);
		CHECK(error_of([&] { store.open(0, 0, 2, Time::from_us(300)); }) == Errc::RecordingOverflow);
		CHECK(error_of([&] { store.open(0, 2, 0, Time::from_us(100)); }) == Errc::RecordingOverflow);
		CHECK(error_of([&] { store.write_row(s, 0, 0, simd::Vector(LaneType::i8)); }) == Errc::TypeMismatch);
	}
}

TEST_CASE("serialize")
{
	SUBCASE("an empty store is a header-only image")
	{
		auto const image = serialize(RecordingStore{});
		std::vector<std::uint8_t> const expected{
		    'H', 'Y', 'P', 'L', 'A', 'R', 'E', 'C', 0, 1, 1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
		CHECK(image == expected);
		CHECK(deserialize(image).empty());
	}
	SUBCASE("u16 values are big-endian")
	{
		auto const net = single_rule(1, 1, {{"c", LaneType::u16, ObservableScope::neuron, RecordLayout::packed}}, 1);
		auto store = store_for(net);
		auto const s = store.open(0, 0, 0, Time::from_us(100));
		store.write_packed(s, 0, 0, simd::Vector::splat(LaneType::u16, 0x0102));
		auto const image = serialize(store);
		// The arena is the image tail: one 128-byte slot.
		auto const arena = image.size() - 128;
		CHECK(image[arena] == 0x01);
		CHECK(image[arena + 1] == 0x02);
	}
	SUBCASE("malformed images are rejected")
	{
		auto const net = single_rule(2, 3, {{"c", LaneType::u16, ObservableScope::neuron, RecordLayout::packed}});
		auto image = serialize(store_for(net));
		CHECK(error_of([&] { deserialize({image.data(), image.size() - 1}); }) == Errc::TruncatedImage);
		CHECK(error_of([&] { deserialize({image.data(), 20}); }) == Errc::TruncatedImage);
		auto bad = image;
		bad[0] ^= 0xff;
		CHECK(error_of([&] { deserialize(bad); }) == Errc::BadMagic);
		bad = image;
		bad[9] = 2;
		CHECK(error_of([&] { deserialize(bad); }) == Errc::VersionMismatch);
		bad = image;
		bad.push_back(0);
		CHECK(error_of([&] { deserialize(bad); }) == Errc::CorruptImage);
	}
}

TEST_CASE("round trip of randomized stores")
{
	std::mt19937_64 rng(7);
	for (int iter = 0; iter < 20; ++iter) {
		auto const net = random_network(rng);
		auto store = store_for(net);
		auto const& layout = store.layouts()[0];
		// Oracle: expected value per (processor, ordinal, block, row, stored index).
		std::map<std::tuple<std::uint32_t, std::uint32_t, std::size_t, std::size_t, std::size_t>, std::int32_t> written;
		for (std::uint32_t p = 0; p < layout.processors.size(); ++p) {
			for (std::uint32_t k = 0; k < layout.invocations; ++k) {
				auto const what = std::uniform_int_distribution<int>(0, 2)(rng);
				auto const deadline = Time::from_us(1000.0 * (k + 1));
				if (what == 1) {
					store.mark_skipped(0, p, k, deadline);
					continue;
				}
				if (what == 2) {
					continue;
				}
				auto const s = store.open(0, p, k, deadline);
				auto const& blocks = layout.processors[p].blocks;
				for (std::size_t b = 0; b < blocks.size(); ++b) {
					auto const& o = layout.observables[blocks[b].observable];
					for (std::size_t r = 0; r < blocks[b].rows; ++r) {
						auto const v = random_vector(rng, o.dtype);
						store.write(s, b, r, v);
						for (std::size_t c = 0; c < blocks[b].columns.size(); ++c) {
							auto const idx = o.layout == RecordLayout::unpacked ? blocks[b].columns[c] : c;
							written[{p, k, b, r, idx}] = v.lane(blocks[b].columns[c]);
						}
					}
				}
			}
		}
		auto const image = serialize(store);
		auto const back = deserialize_store(image);
		CHECK(serialize(back) == image);
		CHECK(back.layouts() == store.layouts());
		auto const series = deserialize(image);
		CHECK(series == to_series(store));

		// Every written value appears at its logical position; everything else is zero.
		std::size_t nonzero_expected = 0, nonzero_seen = 0;
		for (auto const& [key, value] : written) {
			nonzero_expected += value != 0;
		}
		for (auto const& s : series) {
			for (auto const& sample : s.samples) {
				for (auto v : sample.values) {
					nonzero_seen += v != 0;
				}
			}
			for (std::uint32_t p = 0; p < layout.processors.size(); ++p) {
				auto const& blocks = layout.processors[p].blocks;
				for (std::size_t b = 0; b < blocks.size(); ++b) {
					if (blocks[b].observable != s.observable.name.back() - '0' || blocks[b].target != s.target) {
						continue;
					}
					for (auto const& sample : s.samples) {
						for (std::size_t r = 0; r < blocks[b].rows; ++r) {
							for (std::size_t c = 0; c < blocks[b].columns.size(); ++c) {
								auto const idx = s.observable.layout == RecordLayout::unpacked ? blocks[b].columns[c] : c;
								auto const it = written.find({p, sample.ordinal, b, r, idx});
								auto const row = std::find(s.rows.begin(), s.rows.end(), blocks[b].row_labels[r]) - s.rows.begin();
								auto const col = std::find(s.columns.begin(), s.columns.end(), blocks[b].column_labels[c]) - s.columns.begin();
								auto const got = s.at(&sample - s.samples.data(), row, col);
								CHECK(got == (it == written.end() ? 0 : it->second));
							}
						}
					}
				}
			}
		}
		CHECK(nonzero_seen == nonzero_expected);
	}
}

TEST_CASE("decoding does not depend on host byte order")
{
	// Independent decoder run as if on a little-endian and on a big-endian host.
	auto const net = single_rule(1, 40, {{"c", LaneType::i16, ObservableScope::neuron, RecordLayout::packed}}, 3);
	auto store = store_for(net);
	std::mt19937_64 rng(9);
	std::vector<simd::Vector> vs;
	for (std::uint32_t k = 0; k < 3; ++k) {
		auto const s = store.open(0, 0, k, Time::from_us(100.0 * (k + 1)));
		vs.push_back(random_vector(rng, LaneType::i16));
		store.write(s, 0, 0, vs.back());
	}
	auto const image = serialize(store);
	auto const series = deserialize(image);
	REQUIRE(series.size() == 1);
	auto const arena_at = image.size() - store.arena().size();
	for (bool host_little : {true, false}) {
		for (std::uint32_t k = 0; k < 3; ++k) {
			for (std::size_t c = 0; c < 40; ++c) {
				std::uint8_t const b0 = image[arena_at + k * 128 + 2 * c];
				std::uint8_t const b1 = image[arena_at + k * 128 + 2 * c + 1];
				// Native load on the simulated host, then the decoder's conversion to host order.
				auto raw = static_cast<std::uint16_t>(host_little ? (b0 | b1 << 8) : (b0 << 8 | b1));
				if (host_little) {
					raw = static_cast<std::uint16_t>((raw >> 8) | (raw << 8));
				}
				CHECK(static_cast<std::int16_t>(raw) == series[0].at(k, 0, c));
				CHECK(series[0].at(k, 0, c) == vs[k].lane(c));
			}
		}
	}
}

TEST_CASE("skipped invocations")
{
	auto const net = single_rule(1, 3, {{"c", LaneType::u8, ObservableScope::neuron, RecordLayout::packed}});
	auto store = store_for(net);
	auto const s = store.open(0, 0, 0, Time::from_us(100));
	store.write(s, 0, 0, simd::Vector::splat(LaneType::u8, 9));
	store.mark_skipped(0, 0, 1, Time::from_us(200));
	auto const series = deserialize(serialize(store));
	REQUIRE(series.size() == 1);
	CHECK(series[0].samples[1].status == SlotStatus::skipped);
	CHECK(series[0].samples[1].deadline == Time::from_us(200));
	CHECK(series[0].samples[1].values == std::vector<std::int32_t>{0, 0, 0});
	CHECK(series[0].samples[0].values == std::vector<std::int32_t>{9, 9, 9});
}

TEST_CASE("CSV export")
{
	auto const net = single_rule(1, 3, {{"c", LaneType::u8, ObservableScope::neuron, RecordLayout::packed}});
	auto store = store_for(net);
	auto const empty = to_series(store);
	REQUIRE(empty.size() == 1);
	CHECK(to_csv(empty[0]) == "ordinal,deadline_us,row,column,value\n");
	for (std::uint32_t k = 0; k < 2; ++k) {
		auto const s = store.open(0, 0, k, Time::from_us(100.0 * (k + 1)));
		simd::Vector v(LaneType::u8);
		for (std::size_t c = 0; c < 3; ++c) {
			v.set_lane(c, static_cast<std::int32_t>(10 * k + c));
		}
		store.write(s, 0, 0, v);
	}
	auto const series = deserialize(serialize(store));
	CHECK(csv_name(series[0]) == "r.c.0.csv");
	CHECK(to_csv(series[0]) ==
	      "ordinal,deadline_us,row,column,value\n"
	      "0,100.000,0,0,0\n0,100.000,0,1,1\n0,100.000,0,2,2\n"
	      "1,200.000,0,0,10\n1,200.000,0,1,11\n1,200.000,0,2,12\n");
	auto const dir = std::filesystem::temp_directory_path() / "hyplas_csv_test";
	std::filesystem::remove_all(dir);
	export_csv(series, dir);
	CHECK(std::filesystem::exists(dir / "r.c.0.csv"));
	std::filesystem::remove_all(dir);
}
