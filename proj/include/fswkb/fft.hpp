#pragma once

#include <complex>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "fswkb/errors.hpp"

namespace fswkb {

using cplx = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Twiddle factors e^{-2pi i j / n} for j < n/2, cached per size.
// The cache is filled under a mutex and entries are immutable afterwards.
inline const std::vector<cplx>& twiddles(std::size_t n) {
    static std::mutex mtx;
    static std::unordered_map<std::size_t, std::vector<cplx>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> w(n / 2);
    const double step = -2.0 * 3.141592653589793238462643383279502884 / double(n);
    for (std::size_t j = 0; j < n / 2; ++j) w[j] = std::polar(1.0, step * double(j));
    return cache.emplace(n, std::move(w)).first->second;
}

inline void fft_radix2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (!is_pow2(n)) throw validation_error("fft: size must be a power of two, got " + std::to_string(n));

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const auto& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx tw = w[j * stride];
                if (inverse) tw = std::conj(tw);
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * tw;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / double(n);
        for (auto& x : a) x *= inv;
    }
}

} // namespace detail

/// Forward DFT: F[m] = sum_j f[j] e^{-2pi i jm/n}. In place, n a power of two.
inline void fft_forward(std::vector<cplx>& a) { detail::fft_radix2(a, false); }

/// Inverse DFT with 1/n normalization: f[j] = (1/n) sum_m F[m] e^{+2pi i jm/n}.
inline void fft_inverse(std::vector<cplx>& a) { detail::fft_radix2(a, true); }

inline std::vector<cplx> fft_of(const std::vector<cplx>& a) {
    std::vector<cplx> out = a;
    fft_forward(out);
    return out;
}

inline std::vector<cplx> ifft_of(const std::vector<cplx>& a) {
    std::vector<cplx> out = a;
    fft_inverse(out);
    return out;
}

} // namespace fswkb
