#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace charsum {

using cplx = std::complex<double>;
using std::int64_t;
using std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// e(t) = exp(2*pi*i*t)
inline cplx e_turns(double t) {
    return std::polar(1.0, two_pi * t);
}

// e(num/den) with the fraction reduced to [0,1) in exact integer arithmetic
// first, so large phases lose no accuracy to the multiplication by 2*pi.
inline cplx e_ratio(int64_t num, uint64_t den) {
    i128 r = static_cast<i128>(num) % static_cast<i128>(den);
    if (r < 0) r += static_cast<i128>(den);
    return e_turns(static_cast<double>(static_cast<uint64_t>(r)) / static_cast<double>(den));
}

} // namespace charsum
