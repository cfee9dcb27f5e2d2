#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hyplas::test {

inline std::string read_file(std::string const& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw std::runtime_error("cannot open " + path);
	}
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

} // namespace hyplas::test
