#include "osbk/error.hpp"

namespace osbk {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::InvalidInput: return "invalid_input";
    case ErrorCode::RankDeficient: return "rank_deficient";
    case ErrorCode::NotTransverse: return "not_transverse";
    case ErrorCode::ImmersionFailure: return "immersion_failure";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Closure: return "closure";
    case ErrorCode::SearchFailed: return "search_failed";
    case ErrorCode::UnstableCount: return "unstable_count";
    case ErrorCode::DegeneratePencil: return "degenerate_pencil";
    case ErrorCode::Consistency: return "consistency";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

void raise(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

}  // namespace osbk
