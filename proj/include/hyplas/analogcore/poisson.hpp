#pragma once

#include <cstdint>
#include <vector>

namespace hyplas::analogcore {

/// Deterministic 64-bit mixing of seed components.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Homogeneous Poisson spike times in [t0_us, t1_us) for `rate_hz`, exponential inter-arrival
/// times drawn by inverse CDF from a seeded 64-bit Mersenne twister.
std::vector<double> poisson_events(double rate_hz, double t0_us, double t1_us, std::uint64_t seed);

} // namespace hyplas::analogcore
