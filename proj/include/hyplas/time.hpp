#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace hyplas {

/// Experiment time in the hardware time domain, nanosecond resolution.
class Time
{
public:
	constexpr Time() = default;

	static constexpr Time from_ns(std::int64_t ns) { return Time(ns); }
	static Time from_us(double us);

	constexpr std::int64_t ns() const { return m_ns; }
	constexpr double us() const { return static_cast<double>(m_ns) / 1000.0; }

	constexpr Time& operator+=(Time other)
	{
		m_ns += other.m_ns;
		return *this;
	}
	constexpr Time& operator-=(Time other)
	{
		m_ns -= other.m_ns;
		return *this;
	}
	friend constexpr Time operator+(Time a, Time b) { return Time(a.m_ns + b.m_ns); }
	friend constexpr Time operator-(Time a, Time b) { return Time(a.m_ns - b.m_ns); }
	friend constexpr Time operator*(Time a, std::int64_t k) { return Time(a.m_ns * k); }
	friend constexpr auto operator<=>(Time, Time) = default;

private:
	constexpr explicit Time(std::int64_t ns) : m_ns(ns) {}

	std::int64_t m_ns = 0;
};

/// Duration of `cycles` at `clock_hz`, rounded up to the next nanosecond.
Time cycles_to_time(std::uint64_t cycles, std::uint64_t clock_hz);

/// Exact decimal microseconds with three fractional digits, e.g. "5000.002".
std::string format_us(Time t);

} // namespace hyplas
