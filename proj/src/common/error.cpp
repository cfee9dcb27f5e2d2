#include "hyplas/error.hpp"

namespace hyplas {

std::string_view to_string(Errc code)
{
	switch (code) {
		case Errc::CapacityExceeded: return "CapacityExceeded";
		case Errc::InvalidParams: return "InvalidParams";
		case Errc::DuplicateId: return "DuplicateId";
		case Errc::UnknownEndpoint: return "UnknownEndpoint";
		case Errc::UnknownRule: return "UnknownRule";
		case Errc::WeightOutOfRange: return "WeightOutOfRange";
		case Errc::KernelSyntaxError: return "KernelSyntaxError";
		case Errc::DuplicateObservableName: return "DuplicateObservableName";
		case Errc::Unmappable: return "Unmappable";
		case Errc::SyntaxError: return "SyntaxError";
		case Errc::TypeMismatch: return "TypeMismatch";
		case Errc::UnknownObservable: return "UnknownObservable";
		case Errc::UnknownView: return "UnknownView";
		case Errc::UnknownName: return "UnknownName";
		case Errc::Redefinition: return "Redefinition";
		case Errc::SpikeTimeAccess: return "SpikeTimeAccess";
		case Errc::BudgetExceeded: return "BudgetExceeded";
		case Errc::RecordingOverflow: return "RecordingOverflow";
		case Errc::DramBudgetExceeded: return "DramBudgetExceeded";
		case Errc::BadMagic: return "BadMagic";
		case Errc::VersionMismatch: return "VersionMismatch";
		case Errc::TruncatedImage: return "TruncatedImage";
		case Errc::CorruptImage: return "CorruptImage";
		case Errc::InvalidExperiment: return "InvalidExperiment";
		case Errc::BadOverride: return "BadOverride";
		case Errc::RangeError: return "RangeError";
		case Errc::Io: return "Io";
	}
	return "Unknown";
}

Error::Error(Errc code, std::string const& message) :
    std::runtime_error(std::string(to_string(code)) + ": " + message), m_code(code)
{}

PositionedError::PositionedError(Errc code, SourcePos pos, std::string const& message) :
    Error(
        code, std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
    m_pos(pos),
    m_detail(message)
{}

} // namespace hyplas
