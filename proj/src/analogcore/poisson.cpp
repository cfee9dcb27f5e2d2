#include "hyplas/analogcore/poisson.hpp"

#include <cmath>
#include <random>

namespace hyplas::analogcore {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
{
	// splitmix64 finalizer over a combined state
	std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
	return z ^ (z >> 31);
}

std::vector<double> poisson_events(double rate_hz, double t0_us, double t1_us, std::uint64_t seed)
{
	std::vector<double> out;
	if (!(rate_hz > 0.0) || !(t1_us > t0_us)) {
		return out;
	}
	std::mt19937_64 rng(seed);
	double const mean_us = 1e6 / rate_hz;
	out.reserve(static_cast<std::size_t>((t1_us - t0_us) / mean_us * 1.1) + 16);
	double t = t0_us;
	while (true) {
		// uniform in [0, 1) with 53 random bits
		double const u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
		t += -std::log1p(-u) * mean_us;
		if (t >= t1_us) {
			break;
		}
		out.push_back(t);
	}
	return out;
}

} // namespace hyplas::analogcore
