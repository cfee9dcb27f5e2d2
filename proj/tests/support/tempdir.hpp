#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include <unistd.h>

namespace hyplas::test {

/// Fresh directory removed on destruction.
class TempDir
{
public:
	TempDir()
	{
		static std::atomic<int> counter{0};
		m_path = std::filesystem::temp_directory_path() /
		         ("hyplas-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
		std::filesystem::remove_all(m_path);
		std::filesystem::create_directories(m_path);
	}
	~TempDir() { std::filesystem::remove_all(m_path); }
	TempDir(TempDir const&) = delete;
	TempDir& operator=(TempDir const&) = delete;

	std::filesystem::path const& path() const { return m_path; }
	std::filesystem::path operator/(std::string const& name) const { return m_path / name; }

private:
	std::filesystem::path m_path;
};

} // namespace hyplas::test
