#pragma once

#include <stdexcept>
#include <string>

namespace jp {

enum class errc {
    parse_error,
    reducible,
    no_root_in_interval,
    multiple_roots_in_interval,
    field_mismatch,
    division_by_zero,
    not_in_domain,
    inadmissible,
    out_of_parameter_domain,
    index_out_of_range,
    window_invalid,
    horizon_invalid,
    precision_exhausted,
    rational_input,
    no_valid_n,
    t_out_of_range,
    enumeration_too_large,
    internal_check,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::parse_error: return "ParseError";
        case errc::reducible: return "Reducible";
        case errc::no_root_in_interval: return "NoRootInInterval";
        case errc::multiple_roots_in_interval: return "MultipleRootsInInterval";
        case errc::field_mismatch: return "FieldMismatch";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::not_in_domain: return "NotInDomain";
        case errc::inadmissible: return "Inadmissible";
        case errc::out_of_parameter_domain: return "OutOfParameterDomain";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::window_invalid: return "WindowInvalid";
        case errc::horizon_invalid: return "HorizonInvalid";
        case errc::precision_exhausted: return "PrecisionExhausted";
        case errc::rational_input: return "RationalInput";
        case errc::no_valid_n: return "NoValidN";
        case errc::t_out_of_range: return "TOutOfRange";
        case errc::enumeration_too_large: return "EnumerationTooLarge";
        case errc::internal_check: return "InternalCheck";
    }
    return "UnknownError";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const { return code_; }

    // Input-shaped failures map to CLI exit 2, runtime check failures to exit 1.
    bool is_usage() const {
        switch (code_) {
            case errc::parse_error:
            case errc::reducible:
            case errc::no_root_in_interval:
            case errc::multiple_roots_in_interval:
            case errc::field_mismatch:
            case errc::division_by_zero:
            case errc::not_in_domain:
            case errc::inadmissible:
            case errc::out_of_parameter_domain:
            case errc::index_out_of_range:
            case errc::window_invalid:
            case errc::horizon_invalid:
            case errc::rational_input:
            case errc::t_out_of_range:
                return true;
            default:
                return false;
        }
    }

private:
    errc code_;
};

} // namespace jp
