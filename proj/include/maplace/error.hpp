// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace maplace
{

// Failure categories raised by the library. Every throw site uses maplace::Error
// so callers can branch on code() without parsing messages.
enum class Errc
{
    AngleOutOfRange,
    DegenerateRange,
    ConvergenceFailure,
    NonRealSpectrum,
    SingularGram,
    CoincidentPoints,
    ZeroWeight,
    DegenerateExternalCharge,
    NoValidRootSet,
    ComplexRoots,
    MaxItersExceeded,
    UnknownStrategy,
    InvalidArgument,
    ConfigParse,
};

inline constexpr std::string_view errc_name(Errc c) noexcept
{
    switch (c)
    {
    case Errc::AngleOutOfRange: return "AngleOutOfRange";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::NonRealSpectrum: return "NonRealSpectrum";
    case Errc::SingularGram: return "SingularGram";
    case Errc::CoincidentPoints: return "CoincidentPoints";
    case Errc::ZeroWeight: return "ZeroWeight";
    case Errc::DegenerateExternalCharge: return "DegenerateExternalCharge";
    case Errc::NoValidRootSet: return "NoValidRootSet";
    case Errc::ComplexRoots: return "ComplexRoots";
    case Errc::MaxItersExceeded: return "MaxItersExceeded";
    case Errc::UnknownStrategy: return "UnknownStrategy";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigParse: return "ConfigParse";
    }
    return "Unknown";
}

class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string &what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace maplace
