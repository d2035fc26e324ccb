// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string_view>

namespace maplace
{

// Extended-precision scalars for the polynomial pipeline. Expression
// templates are off so generic kernels see plain value types.
using mp50 = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<50>,
                                           boost::multiprecision::et_off>;
using mp100 = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>,
                                            boost::multiprecision::et_off>;
using mp200 = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<200>,
                                            boost::multiprecision::et_off>;

enum class PrecisionTier
{
    LongDouble,
    Mp50,
    Mp100,
    Mp200,
};

inline constexpr std::string_view tier_name(PrecisionTier t) noexcept
{
    switch (t)
    {
    case PrecisionTier::LongDouble: return "long double";
    case PrecisionTier::Mp50: return "mpfr-50";
    case PrecisionTier::Mp100: return "mpfr-100";
    case PrecisionTier::Mp200: return "mpfr-200";
    }
    return "?";
}

template <typename Real>
double to_double(const Real &x)
{
    return static_cast<double>(x);
}

} // namespace maplace
