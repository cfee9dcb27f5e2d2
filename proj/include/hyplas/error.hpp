#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyplas {

enum class Errc {
	CapacityExceeded,
	InvalidParams,
	DuplicateId,
	UnknownEndpoint,
	UnknownRule,
	WeightOutOfRange,
	KernelSyntaxError,
	DuplicateObservableName,
	Unmappable,
	SyntaxError,
	TypeMismatch,
	UnknownObservable,
	UnknownView,
	UnknownName,
	Redefinition,
	SpikeTimeAccess,
	BudgetExceeded,
	RecordingOverflow,
	DramBudgetExceeded,
	BadMagic,
	VersionMismatch,
	TruncatedImage,
	CorruptImage,
	InvalidExperiment,
	BadOverride,
	RangeError,
	Io,
};

std::string_view to_string(Errc code);

/// Exception carrying a machine-checkable error kind.
class Error : public std::runtime_error
{
public:
	Error(Errc code, std::string const& message);

	Errc code() const noexcept { return m_code; }

private:
	Errc m_code;
};

/// Source position attached to kernel and experiment-file diagnostics (1-based).
struct SourcePos
{
	int line = 1;
	int column = 1;

	friend bool operator==(SourcePos const&, SourcePos const&) = default;
};

class PositionedError : public Error
{
public:
	PositionedError(Errc code, SourcePos pos, std::string const& message);

	SourcePos pos() const noexcept { return m_pos; }
	/// Message without the position prefix.
	std::string const& detail() const noexcept { return m_detail; }

private:
	SourcePos m_pos;
	std::string m_detail;
};

} // namespace hyplas
