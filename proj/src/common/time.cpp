#include "hyplas/time.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hyplas {

Time Time::from_us(double us)
{
	return Time(std::llround(us * 1000.0));
}

Time cycles_to_time(std::uint64_t cycles, std::uint64_t clock_hz)
{
	if (clock_hz == 0) {
		throw std::invalid_argument("clock frequency must be positive");
	}
	__extension__ using u128 = unsigned __int128;
	u128 const scaled = static_cast<u128>(cycles) * 1'000'000'000u;
	u128 const ns = (scaled + clock_hz - 1) / clock_hz;
	return Time::from_ns(static_cast<std::int64_t>(ns));
}

std::string format_us(Time t)
{
	std::int64_t ns = t.ns();
	bool const negative = ns < 0;
	if (negative) {
		ns = -ns;
	}
	char buf[48];
	std::snprintf(
	    buf, sizeof(buf), "%s%lld.%03lld", negative ? "-" : "", static_cast<long long>(ns / 1000),
	    static_cast<long long>(ns % 1000));
	return buf;
}

} // namespace hyplas
