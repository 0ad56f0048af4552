#pragma once

// Discrete Lagrangian action over a choreography loop,
//     f(Q) = (1/N) sum_j [ 1/2 sum_i m_i |qdot_i(t_j)|^2 + U(q(t_j)) ],
// with fourth-order cyclic finite-difference velocities and equal-weight
// (rectangle-rule) quadrature, which is spectrally accurate for smooth
// periodic loops. The gradient returned by action_gradient is the exact
// gradient of this discrete functional (kinetic terms through the adjoint of
// the difference stencil, potential terms through the adjoint phase shifts),
// projected to the tangent plane at each sample.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "s2chor/errors.hpp"
#include "s2chor/loop.hpp"
#include "s2chor/shift.hpp"
#include "s2chor/sphere.hpp"
#include "s2chor/vec3.hpp"

namespace s2chor {

struct ActionBreakdown {
    double kinetic = 0.0;
    double potential_integral = 0.0;
    double total = 0.0;
};

namespace detail {

// Neumaier-compensated accumulator. The minimizer compares candidate actions
// through the (sum, compensation) pair, which resolves differences well below
// one ulp of the total.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }

    double result() const { return sum + comp; }
};

// value held as an unevaluated hi + lo pair
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
};

inline double dd_difference(const DoubleDouble& a, const DoubleDouble& b) {
    return (a.hi - b.hi) + (a.lo - b.lo);
}

// v_j = (-x_{j+2} + 8 x_{j+1} - 8 x_{j-1} + x_{j-2}) / (12 h), h = 1/N
inline std::vector<Vec3> stencil_velocities(const std::vector<Vec3>& x) {
    const std::size_t n = x.size();
    const double scale = static_cast<double>(n) / 12.0;  // 1/(12h)
    std::vector<Vec3> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        v[j] = scale * (-x[(j + 2) % n] + 8.0 * x[(j + 1) % n] - 8.0 * x[(j + n - 1) % n] +
                        x[(j + n - 2) % n]);
    }
    return v;
}

// a_j = (-x_{j+2} + 16 x_{j+1} - 30 x_j + 16 x_{j-1} - x_{j-2}) / (12 h^2)
inline std::vector<Vec3> stencil_accelerations(const std::vector<Vec3>& x) {
    const std::size_t n = x.size();
    const double nd = static_cast<double>(n);
    const double scale = nd * nd / 12.0;  // 1/(12h^2)
    std::vector<Vec3> a(n);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = scale * (-x[(j + 2) % n] + 16.0 * x[(j + 1) % n] - 30.0 * x[j] +
                        16.0 * x[(j + n - 1) % n] - x[(j + n - 2) % n]);
    }
    return a;
}

inline void require_resolution(const DiscreteLoop& loop, const BodySystem& system,
                               const char* who) {
    if (loop.size() < 8 * static_cast<std::size_t>(system.n())) {
        throw std::invalid_argument(std::string(who) + ": need at least 8 samples per body");
    }
}

// Kinetic and potential sums as compensated pairs. The per-sample kinetic
// term uses the total mass: over a full period the phase shifts permute (or
// unitarily rotate) the velocity samples, so each body contributes the same
// cyclic sum.
struct ActionSums {
    DoubleDouble kinetic;
    DoubleDouble potential;
};

inline ActionSums action_sums(const DiscreteLoop& loop, const BodySystem& system) {
    require_resolution(loop, system, "action");
    const std::size_t n_samples = loop.size();
    const int n = system.n();
    const auto& masses = system.masses();
    const auto views = body_views(loop, system);
    const auto velocities = stencil_velocities(loop.raw_samples());

    CompensatedSum kin;
    CompensatedSum pot;
    const double half_total_mass = 0.5 * system.total_mass();
    for (std::size_t j = 0; j < n_samples; ++j) {
        kin.add(half_total_mass * norm_squared(velocities[j]));
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                const Vec3& qa = views[static_cast<std::size_t>(a)][j];
                const Vec3& qb = views[static_cast<std::size_t>(b)][j];
                check_pair_admissible(qa, qb, a, b, "at loop sample " + std::to_string(j));
                pot.add(masses[static_cast<std::size_t>(a)] *
                        masses[static_cast<std::size_t>(b)] * cot_raw(qa, qb));
            }
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n_samples);
    return {{kin.sum * inv_n, kin.comp * inv_n}, {pot.sum * inv_n, pot.comp * inv_n}};
}

inline DoubleDouble total_dd(const ActionSums& s) {
    return {s.kinetic.hi + s.potential.hi, s.kinetic.lo + s.potential.lo};
}

inline ActionBreakdown to_breakdown(const ActionSums& s) {
    ActionBreakdown out;
    out.kinetic = s.kinetic.hi + s.kinetic.lo;
    out.potential_integral = s.potential.hi + s.potential.lo;
    out.total = out.kinetic + out.potential_integral;
    return out;
}

}  // namespace detail

// Fourth-order central-difference velocities of the loop samples, step 1/N.
inline std::vector<Vec3> loop_velocities(const DiscreteLoop& loop) {
    return detail::stencil_velocities(loop.raw_samples());
}

inline ActionBreakdown action(const DiscreteLoop& loop, const BodySystem& system) {
    return detail::to_breakdown(detail::action_sums(loop, system));
}

// Action of explicit per-body trajectories (each body its own sampled curve;
// all curves share the grid). Used when the configuration is not a
// choreography of a single loop.
inline ActionBreakdown action(const std::vector<std::vector<UnitPoint>>& bodies,
                              const std::vector<double>& masses) {
    if (bodies.empty() || bodies.size() != masses.size()) {
        throw std::invalid_argument("action: bodies/masses size mismatch");
    }
    const std::size_t n_samples = bodies[0].size();
    for (const auto& b : bodies) {
        if (b.size() != n_samples) {
            throw std::invalid_argument("action: trajectories must share one sample grid");
        }
    }
    const int n = static_cast<int>(bodies.size());
    std::vector<std::vector<Vec3>> raw(bodies.size());
    std::vector<std::vector<Vec3>> vel(bodies.size());
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        raw[i].reserve(n_samples);
        for (const auto& p : bodies[i]) raw[i].push_back(p.vec());
        vel[i] = detail::stencil_velocities(raw[i]);
    }
    detail::CompensatedSum kin;
    detail::CompensatedSum pot;
    for (std::size_t j = 0; j < n_samples; ++j) {
        double k = 0.0;
        for (int i = 0; i < n; ++i) {
            k += 0.5 * masses[static_cast<std::size_t>(i)] *
                 norm_squared(vel[static_cast<std::size_t>(i)][j]);
        }
        kin.add(k);
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                const Vec3& qa = raw[static_cast<std::size_t>(a)][j];
                const Vec3& qb = raw[static_cast<std::size_t>(b)][j];
                detail::check_pair_admissible(qa, qb, a, b,
                                              "at sample " + std::to_string(j));
                pot.add(masses[static_cast<std::size_t>(a)] *
                        masses[static_cast<std::size_t>(b)] * detail::cot_raw(qa, qb));
            }
        }
    }
    ActionBreakdown out;
    const double inv_n = 1.0 / static_cast<double>(n_samples);
    out.kinetic = kin.result() * inv_n;
    out.potential_integral = pot.result() * inv_n;
    out.total = out.kinetic + out.potential_integral;
    return out;
}

// Exact gradient of the discrete action with respect to each loop sample,
// projected to the tangent plane at that sample.
inline std::vector<Vec3> action_gradient(const DiscreteLoop& loop, const BodySystem& system) {
    detail::require_resolution(loop, system, "action_gradient");
    const std::size_t n_samples = loop.size();
    const int n = system.n();
    const auto& masses = system.masses();
    const std::vector<Vec3> raw = loop.raw_samples();
    const auto views = detail::body_views(loop, system);
    const auto velocities = detail::stencil_velocities(raw);
    const double inv_n = 1.0 / static_cast<double>(n_samples);

    // kinetic part: adjoint of the velocity stencil,
    // dK/dQ_p = (M/N) (1/12h) (-V_{p-2} + 8 V_{p-1} - 8 V_{p+1} + V_{p+2})
    const double scale = system.total_mass() * inv_n * static_cast<double>(n_samples) / 12.0;
    std::vector<Vec3> grad(n_samples);
    for (std::size_t p = 0; p < n_samples; ++p) {
        grad[p] = scale * (-velocities[(p + n_samples - 2) % n_samples] +
                           8.0 * velocities[(p + n_samples - 1) % n_samples] -
                           8.0 * velocities[(p + 1) % n_samples] +
                           velocities[(p + 2) % n_samples]);
    }

    // potential part: for each body a, accumulate the pair gradients felt at
    // its phase, then shift back by -k_a (adjoint of the phase shift)
    for (int a = 0; a < n; ++a) {
        std::vector<Vec3> field(n_samples);
        for (std::size_t j = 0; j < n_samples; ++j) {
            Vec3 acc;
            for (int b = 0; b < n; ++b) {
                if (b == a) continue;
                const Vec3& qa = views[static_cast<std::size_t>(a)][j];
                const Vec3& qb = views[static_cast<std::size_t>(b)][j];
                detail::check_pair_admissible(qa, qb, a, b,
                                              "at loop sample " + std::to_string(j));
                acc += masses[static_cast<std::size_t>(a)] *
                       masses[static_cast<std::size_t>(b)] * detail::cot_grad_raw(qa, qb);
            }
            field[j] = acc;
        }
        const auto pulled =
            detail::shift_samples_adjoint(field, system.offsets()[static_cast<std::size_t>(a)]);
        for (std::size_t p = 0; p < n_samples; ++p) grad[p] += inv_n * pulled[p];
    }

    // tangent projection
    for (std::size_t p = 0; p < n_samples; ++p) {
        grad[p] -= dot(grad[p], raw[p]) * raw[p];
    }
    return grad;
}

// Action lower bound for periodic binary-collision solutions of the
// three-body problem with unit masses: (3/2) (12 pi)^(2/3) - 3.
inline double collision_bound() {
    return 1.5 * std::pow(12.0 * pi(), 2.0 / 3.0) - 3.0;
}

// | sum_{i<j} |v_i - v_j|^2 + |sum_i v_i|^2 - n sum_i |v_i|^2 |, an algebraic
// identity for any n; used as a self-test of the kinetic bookkeeping.
inline double velocity_identity_residual(const std::vector<Vec3>& velocities) {
    const std::size_t n = velocities.size();
    double lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            lhs += norm_squared(velocities[i] - velocities[j]);
        }
    }
    Vec3 total;
    for (const Vec3& v : velocities) total += v;
    lhs += norm_squared(total);
    double rhs = 0.0;
    for (const Vec3& v : velocities) rhs += norm_squared(v);
    rhs *= static_cast<double>(n);
    return std::abs(lhs - rhs);
}

}  // namespace s2chor
