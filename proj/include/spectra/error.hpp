#pragma once

#include <stdexcept>
#include <string>

namespace spectra {

// Error taxonomy for the whole library. Input codes describe invalid
// parameters or out-of-domain requests; the remaining codes flag detected
// mathematical inconsistencies. The CLI maps the former to exit 2 and the
// latter to exit 1.
enum class Errc {
    NonPrime,
    EvenCharacteristic,
    ReducibleModulus,
    OrderOverflow,
    MixedFields,
    ZeroInverse,
    ZeroToZero,
    DegenerateQuadratic,
    HasseViolation,
    SingularCurve,
    WrongCongruence,
    MomentViolation,
    OutOfTheoremRange,
    NonIntegralSpectrum,
    NonIntegral,
    ClassMismatch,
    BoundViolation,
    ParityViolation,
    Overflow,
    BadElement,
    BadConfig,
    Internal,
};

constexpr const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NonPrime: return "NonPrime";
        case Errc::EvenCharacteristic: return "EvenCharacteristic";
        case Errc::ReducibleModulus: return "ReducibleModulus";
        case Errc::OrderOverflow: return "OrderOverflow";
        case Errc::MixedFields: return "MixedFields";
        case Errc::ZeroInverse: return "ZeroInverse";
        case Errc::ZeroToZero: return "ZeroToZero";
        case Errc::DegenerateQuadratic: return "DegenerateQuadratic";
        case Errc::HasseViolation: return "HasseViolation";
        case Errc::SingularCurve: return "SingularCurve";
        case Errc::WrongCongruence: return "WrongCongruence";
        case Errc::MomentViolation: return "MomentViolation";
        case Errc::OutOfTheoremRange: return "OutOfTheoremRange";
        case Errc::NonIntegralSpectrum: return "NonIntegralSpectrum";
        case Errc::NonIntegral: return "NonIntegral";
        case Errc::ClassMismatch: return "ClassMismatch";
        case Errc::BoundViolation: return "BoundViolation";
        case Errc::ParityViolation: return "ParityViolation";
        case Errc::Overflow: return "Overflow";
        case Errc::BadElement: return "BadElement";
        case Errc::BadConfig: return "BadConfig";
        case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

constexpr bool is_input_error(Errc c) {
    switch (c) {
        case Errc::NonPrime:
        case Errc::EvenCharacteristic:
        case Errc::ReducibleModulus:
        case Errc::OrderOverflow:
        case Errc::MixedFields:
        case Errc::ZeroInverse:
        case Errc::ZeroToZero:
        case Errc::DegenerateQuadratic:
        case Errc::WrongCongruence:
        case Errc::OutOfTheoremRange:
        case Errc::SingularCurve:
        case Errc::BadElement:
        case Errc::BadConfig:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(Errc c, const std::string& what)
        : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& what) { throw Error(c, what); }

}  // namespace spectra
