#pragma once

// Circulant time-shift machinery for uniformly sampled period-1 loops.
//
// A shift by k/N samples is an exact index rotation. A fractional shift is
// evaluated through the band-limited trigonometric interpolant of the
// samples, i.e. circular convolution with the Dirichlet kernel
//     K(t) = sin(pi N t) / (N tan(pi t)),   K(m/N) = delta_{m0},
// which is spectrally accurate for smooth loops and whose adjoint is the
// shift by -delta. Everything here is plain O(N^2) with fixed summation
// order; N stays small enough that this is never the bottleneck.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "s2chor/vec3.hpp"

namespace s2chor::detail {

constexpr double pi_() { return 3.14159265358979323846; }

// Sample offset as an integer index, or -1 if the shift is fractional.
inline long integer_shift_index(double offset, std::size_t n_samples) {
    const double s = offset * static_cast<double>(n_samples);
    const double rounded = std::round(s);
    if (std::abs(s - rounded) < 1e-9) {
        long idx = static_cast<long>(rounded) % static_cast<long>(n_samples);
        if (idx < 0) idx += static_cast<long>(n_samples);
        return idx;
    }
    return -1;
}

inline std::vector<double> dirichlet_kernel(std::size_t n_samples, double delta) {
    if (n_samples % 2 != 0) {
        throw std::invalid_argument("dirichlet_kernel: sample count must be even");
    }
    const double nd = static_cast<double>(n_samples);
    std::vector<double> k(n_samples);
    for (std::size_t r = 0; r < n_samples; ++r) {
        const double t = static_cast<double>(r) / nd + delta;
        const double s = std::sin(pi_() * t);
        if (std::abs(s) < 1e-14) {
            k[r] = std::cos(pi_() * nd * std::round(t));
        } else {
            k[r] = std::sin(pi_() * nd * t) / (nd * std::tan(pi_() * t));
        }
    }
    return k;
}

// out_j = sum_m x_m k[(j - m) mod N]
inline std::vector<Vec3> apply_circulant(const std::vector<double>& kernel,
                                         const std::vector<Vec3>& x) {
    const std::size_t n = x.size();
    std::vector<Vec3> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        Vec3 acc;
        for (std::size_t m = 0; m < n; ++m) {
            acc += kernel[(j + n - m) % n] * x[m];
        }
        out[j] = acc;
    }
    return out;
}

inline std::vector<Vec3> rotate_samples(const std::vector<Vec3>& x, long idx) {
    const std::size_t n = x.size();
    std::vector<Vec3> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = x[(j + static_cast<std::size_t>(idx)) % n];
    }
    return out;
}

// Samples of the interpolated loop at t_j + delta.
inline std::vector<Vec3> shift_samples(const std::vector<Vec3>& x, double delta) {
    const long idx = integer_shift_index(delta, x.size());
    if (idx >= 0) return rotate_samples(x, idx);
    return apply_circulant(dirichlet_kernel(x.size(), delta), x);
}

// Adjoint of shift_samples(., delta) is shift_samples(., -delta).
inline std::vector<Vec3> shift_samples_adjoint(const std::vector<Vec3>& x, double delta) {
    return shift_samples(x, -delta);
}

}  // namespace s2chor::detail
