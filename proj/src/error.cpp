#include "aqi/error.hpp"

namespace aqi {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::argument: return "argument";
        case ErrorCode::validation: return "validation";
        case ErrorCode::numerical: return "numerical";
        case ErrorCode::cache: return "cache";
        case ErrorCode::domain: return "domain";
        case ErrorCode::truncation: return "truncation";
        case ErrorCode::undefined_correlation: return "undefined_correlation";
        case ErrorCode::inversion_domain: return "inversion_domain";
        case ErrorCode::insufficient_projections: return "insufficient_projections";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

}  // namespace aqi
