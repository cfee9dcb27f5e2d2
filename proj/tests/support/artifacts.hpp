#pragma once

#include "support/io.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace hyplas::test {

using CsvRow = std::vector<std::string>;

/// Splits a header-first CSV without quoting. The header row is dropped.
inline std::vector<CsvRow> read_csv(std::filesystem::path const& path, CsvRow* header = nullptr)
{
	std::istringstream in(read_file(path.string()));
	std::vector<CsvRow> rows;
	std::string line;
	bool first = true;
	while (std::getline(in, line)) {
		CsvRow row;
		std::size_t begin = 0;
		while (true) {
			auto const comma = line.find(',', begin);
			row.push_back(line.substr(begin, comma - begin));
			if (comma == std::string::npos) {
				break;
			}
			begin = comma + 1;
		}
		if (first) {
			if (header) {
				*header = row;
			}
			first = false;
		} else {
			rows.push_back(std::move(row));
		}
	}
	return rows;
}

/// Relative path -> file bytes for every regular file below `dir`.
inline std::map<std::string, std::string> snapshot(std::filesystem::path const& dir)
{
	std::map<std::string, std::string> files;
	for (auto const& e : std::filesystem::recursive_directory_iterator(dir)) {
		if (e.is_regular_file()) {
			files[std::filesystem::relative(e.path(), dir).generic_string()] = read_file(e.path().string());
		}
	}
	return files;
}

} // namespace hyplas::test
