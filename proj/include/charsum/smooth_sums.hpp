#pragma once

// Smoothed character sums S_chi(N) = sum_n chi(n) W(n/N), the basic object
// every other module feeds on.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "bump.hpp"
#include "characters.hpp"
#include "common.hpp"

namespace charsum {

inline cplx s_chi(const CompositeCharacter& chi, double n_size, const SmoothWeight& weight) {
    if (n_size <= 0.0) throw std::invalid_argument("s_chi: N must be positive");
    const auto [lo, hi] = weight.support();
    cplx total = 0.0;
    const auto nlo = std::max<int64_t>(1, static_cast<int64_t>(std::floor(lo * n_size)));
    const auto nhi = static_cast<int64_t>(std::ceil(hi * n_size));
    for (int64_t n = nlo; n <= nhi; ++n)
        total += chi(n) * weight(static_cast<double>(n) / n_size);
    return total;
}

inline cplx s_chi(const CompositeCharacter& chi, double n_size) {
    return s_chi(chi, n_size, weight_W());
}

// crude envelope |S| <= sup|W| * (interval length + 1); useful as a sanity rail
inline double trivial_envelope(double n_size, const SmoothWeight& weight) {
    const auto [lo, hi] = weight.support();
    double sup = 0.0;
    for (int i = 0; i <= 400; ++i)
        sup = std::max(sup, weight(lo + (hi - lo) * i / 400.0));
    return sup * ((hi - lo) * n_size + 1.0);
}

} // namespace charsum
