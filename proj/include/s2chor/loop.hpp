#pragma once

// Periodic loops on S^2 and the choreography structure: one shared curve Q
// traversed by n bodies with uniform phase offsets k_i = (i-1)/n, plus the
// two discrete symmetries
//     E2:  Q(t + 1/2) = diag{ 1,-1, 1} Q(t)
//     E3:  Q(-t)      = diag{-1,-1, 1} Q(t)
// and the group-average projection onto their common fixed-point set.

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "s2chor/errors.hpp"
#include "s2chor/shift.hpp"
#include "s2chor/sphere.hpp"
#include "s2chor/vec3.hpp"

namespace s2chor {

// N uniformly spaced samples Q(j/N), j = 0..N-1, period 1. Indexing is
// cyclic. N must be even so the half-period shift is an exact index map.
class DiscreteLoop {
public:
    explicit DiscreteLoop(std::vector<UnitPoint> samples) : samples_(std::move(samples)) {
        if (samples_.size() < 8 || samples_.size() % 2 != 0) {
            throw std::invalid_argument("DiscreteLoop: need an even sample count of at least 8");
        }
    }

    std::size_t size() const { return samples_.size(); }

    // cyclic access
    const UnitPoint& at(long j) const {
        const long n = static_cast<long>(samples_.size());
        return samples_[static_cast<std::size_t>(((j % n) + n) % n)];
    }

    const std::vector<UnitPoint>& samples() const { return samples_; }

    std::vector<Vec3> raw_samples() const {
        std::vector<Vec3> out;
        out.reserve(samples_.size());
        for (const auto& p : samples_) out.push_back(p.vec());
        return out;
    }

private:
    std::vector<UnitPoint> samples_;
};

// Body count, masses, and phase offsets 0 = k_1 < ... < k_n < 1.
class BodySystem {
public:
    BodySystem(int n, std::vector<double> masses, std::vector<double> offsets)
        : n_(n), masses_(std::move(masses)), offsets_(std::move(offsets)) {
        if (n_ < 1) throw std::invalid_argument("BodySystem: need at least one body");
        if (masses_.size() != static_cast<std::size_t>(n_) ||
            offsets_.size() != static_cast<std::size_t>(n_)) {
            throw std::invalid_argument("BodySystem: masses/offsets must have length n");
        }
        for (double m : masses_) {
            if (!(m > 0.0)) throw std::invalid_argument("BodySystem: masses must be positive");
        }
        if (offsets_[0] != 0.0) throw std::invalid_argument("BodySystem: first offset must be 0");
        for (int i = 1; i < n_; ++i) {
            if (!(offsets_[i] > offsets_[i - 1]) || !(offsets_[i] < 1.0)) {
                throw std::invalid_argument("BodySystem: offsets must be strictly increasing in [0,1)");
            }
        }
    }

    // choreography offsets k_i = (i-1)/n, unit masses by default
    static BodySystem choreography(int n, std::vector<double> masses = {}) {
        if (masses.empty()) masses.assign(static_cast<std::size_t>(n < 0 ? 0 : n), 1.0);
        std::vector<double> offs(static_cast<std::size_t>(n < 0 ? 0 : n));
        for (int i = 0; i < n; ++i) offs[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;
        return BodySystem(n, std::move(masses), std::move(offs));
    }

    int n() const { return n_; }
    const std::vector<double>& masses() const { return masses_; }
    const std::vector<double>& offsets() const { return offsets_; }

    double total_mass() const {
        double m = 0.0;
        for (double mi : masses_) m += mi;
        return m;
    }

private:
    int n_;
    std::vector<double> masses_;
    std::vector<double> offsets_;
};

// One element of the loop-space symmetry group: sample shift, diagonal +-1
// matrix, optional time reversal. (g L)_j = diag . L_{eps j + shift}.
struct SymmetryElement {
    long shift = 0;
    Vec3 diag{1.0, 1.0, 1.0};
    bool time_reversal = false;

    Vec3 apply_at(const DiscreteLoop& loop, long j) const {
        const long idx = (time_reversal ? -j : j) + shift;
        return hadamard(diag, loop.at(idx).vec());
    }
};

inline constexpr Vec3 kMatrixB{1.0, -1.0, 1.0};   // diag{1,-1,1}
inline constexpr Vec3 kMatrixC{-1.0, -1.0, 1.0};  // diag{-1,-1,1}

namespace detail {

inline DiscreteLoop apply_symmetry(const DiscreteLoop& loop, const SymmetryElement& g) {
    std::vector<UnitPoint> out;
    out.reserve(loop.size());
    for (std::size_t j = 0; j < loop.size(); ++j) {
        const Vec3 v = g.apply_at(loop, static_cast<long>(j));
        out.emplace_back(v.x, v.y, v.z);
    }
    return DiscreteLoop(std::move(out));
}

}  // namespace detail

// t -> B Q(t + 1/2); an involution, with fixed-point set E2.
inline DiscreteLoop apply_E2(const DiscreteLoop& loop) {
    return detail::apply_symmetry(loop, {static_cast<long>(loop.size() / 2), kMatrixB, false});
}

// t -> C Q(-t); an involution, with fixed-point set E3.
inline DiscreteLoop apply_E3(const DiscreteLoop& loop) {
    return detail::apply_symmetry(loop, {0, kMatrixC, true});
}

// Group average over {id, E2, E3, E2 E3}, renormalized to S^2. The output is
// a fixed point of apply_E2 and apply_E3 and the map is idempotent.
inline DiscreteLoop symmetrize(const DiscreteLoop& loop) {
    const std::size_t n = loop.size();
    if (n % 4 != 0) {
        throw std::invalid_argument("symmetrize: sample count must be divisible by 4");
    }
    const long half = static_cast<long>(n / 2);
    const SymmetryElement group[4] = {
        {0, {1.0, 1.0, 1.0}, false},       // id
        {half, kMatrixB, false},           // E2
        {0, kMatrixC, true},               // E3
        {-half, hadamard(kMatrixB, kMatrixC), true},  // E2 E3: (BC) Q(-t - 1/2)
    };
    std::vector<UnitPoint> out;
    out.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        Vec3 avg = (group[0].apply_at(loop, static_cast<long>(j)) +
                    group[1].apply_at(loop, static_cast<long>(j)) +
                    group[2].apply_at(loop, static_cast<long>(j)) +
                    group[3].apply_at(loop, static_cast<long>(j))) *
                   0.25;
        if (norm(avg) < kDegenerateNorm) {
            throw DegenerateError("symmetrize: group average degenerates at sample " +
                                  std::to_string(j));
        }
        out.push_back(UnitPoint::normalized(avg));
    }
    return DiscreteLoop(std::move(out));
}

// The figure-eight-shaped comparison loop
//   x(t) = 0.15 sin(4 pi t),  y(t) = 0.2275 sin(2 pi t),  z = sqrt(1-x^2-y^2),
// which lies in E2 and E3 and has q(0) = q(1/2) = (0,0,1).
//
// N must be divisible by 12 (so that the 1/3, 1/2 phase shifts and the
// reversal are all exact index maps) or a power of two (in which case the
// 1/3 shifts go through the spectral interpolant; see shift.hpp).
inline DiscreteLoop test_loop(std::size_t n_samples) {
    const bool div12 = (n_samples % 12 == 0);
    const bool pow2 = n_samples >= 32 && (n_samples & (n_samples - 1)) == 0;
    if (!div12 && !pow2) {
        throw std::invalid_argument(
            "test_loop: sample count must be divisible by 12, or a power of two (>= 32)");
    }
    std::vector<UnitPoint> out;
    out.reserve(n_samples);
    for (std::size_t j = 0; j < n_samples; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(n_samples);
        const double x = 0.15 * std::sin(4.0 * pi() * t);
        const double y = 0.2275 * std::sin(2.0 * pi() * t);
        const double z = std::sqrt(1.0 - x * x - y * y);
        out.emplace_back(x, y, z);
    }
    return DiscreteLoop(std::move(out));
}

// q_i sampled on the loop grid: body i at sample j is Q((j + (i-1)N/n) mod N).
// Requires the offsets to be exact index shifts (N divisible by n).
inline std::vector<std::vector<UnitPoint>> build_choreography(const DiscreteLoop& loop,
                                                              const BodySystem& system) {
    const std::size_t n_samples = loop.size();
    if (n_samples % static_cast<std::size_t>(system.n()) != 0) {
        throw std::invalid_argument("build_choreography: sample count not divisible by body count");
    }
    std::vector<std::vector<UnitPoint>> bodies;
    bodies.reserve(static_cast<std::size_t>(system.n()));
    for (int i = 0; i < system.n(); ++i) {
        const long idx = detail::integer_shift_index(system.offsets()[static_cast<std::size_t>(i)],
                                                     n_samples);
        if (idx < 0) {
            throw std::invalid_argument("build_choreography: offset is not an integer sample shift");
        }
        std::vector<UnitPoint> traj;
        traj.reserve(n_samples);
        for (std::size_t j = 0; j < n_samples; ++j) {
            traj.push_back(loop.at(static_cast<long>(j) + idx));
        }
        bodies.push_back(std::move(traj));
    }
    return bodies;
}

namespace detail {

// Raw per-body sample arrays induced by the phase offsets: exact index
// rotations when possible, spectral interpolation otherwise.
inline std::vector<std::vector<Vec3>> body_views(const DiscreteLoop& loop,
                                                 const BodySystem& system) {
    const std::vector<Vec3> raw = loop.raw_samples();
    std::vector<std::vector<Vec3>> views;
    views.reserve(static_cast<std::size_t>(system.n()));
    for (int i = 0; i < system.n(); ++i) {
        views.push_back(shift_samples(raw, system.offsets()[static_cast<std::size_t>(i)]));
    }
    return views;
}

// Interpolated positions are only near-unit; normalize before metric use.
inline std::vector<std::vector<UnitPoint>> body_trajectories(const DiscreteLoop& loop,
                                                             const BodySystem& system) {
    std::vector<std::vector<UnitPoint>> out;
    const auto views = body_views(loop, system);
    out.reserve(views.size());
    for (const auto& view : views) {
        std::vector<UnitPoint> traj;
        traj.reserve(view.size());
        for (const Vec3& v : view) traj.push_back(UnitPoint::normalized(v));
        out.push_back(std::move(traj));
    }
    return out;
}

}  // namespace detail

// Minimum geodesic distance between distinct bodies over all samples.
// +infinity for a single body (no pairs).
inline double min_pair_separation(const DiscreteLoop& loop, const BodySystem& system) {
    if (system.n() < 2) return std::numeric_limits<double>::infinity();
    const auto views = detail::body_views(loop, system);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < loop.size(); ++j) {
        for (int a = 0; a < system.n(); ++a) {
            for (int b = a + 1; b < system.n(); ++b) {
                const double d =
                    detail::angle_between(views[static_cast<std::size_t>(a)][j],
                                          views[static_cast<std::size_t>(b)][j]);
                best = std::min(best, d);
            }
        }
    }
    return best;
}

}  // namespace s2chor
