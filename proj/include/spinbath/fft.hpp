#pragma once

#include <complex>
#include <vector>

#include "spinbath/constants.hpp"
#include "spinbath/errors.hpp"

namespace spinbath::fft {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 Cooley-Tukey transform. n must be a power of 2.
inline void transform(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw numerical_error("fft length must be a power of two, got " + std::to_string(n));
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * constants::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

/// |DFT|^2 of a real sequence, bins 0..n/2 inclusive.
inline std::vector<double> power_spectrum(const std::vector<double>& x) {
    std::vector<std::complex<double>> a(x.begin(), x.end());
    transform(a);
    std::vector<double> p(x.size() / 2 + 1);
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::norm(a[j]);
    return p;
}

} // namespace spinbath::fft
