#pragma once

// First-order descent of the discrete action over the symmetry-constrained
// loop space: step against the gradient, retract each sample to S^2, re-apply
// the symmetry projection, and backtrack until the action decreases.
//
// Two refinements keep this robust at desk scale:
//  * the search direction is the Sobolev-preconditioned gradient, i.e. the
//    raw gradient passed through the inverse of the circulant kinetic
//    operator (M/N)(D^T D + (2 pi)^2 I). This flattens the O(N^2) spread of
//    the kinetic spectrum, so convergence takes tens of iterations instead of
//    thousands. It is still a gradient method: no curvature is estimated.
//  * candidate actions are compared through compensated (hi, lo) sums, so
//    descent can be certified below one ulp of the action value and the
//    stopping tolerance on the gradient is reachable in double precision.
//
// Termination is on the sup-norm (largest absolute component) of the raw
// tangent gradient.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "s2chor/action.hpp"
#include "s2chor/errors.hpp"
#include "s2chor/loop.hpp"
#include "s2chor/sphere.hpp"
#include "s2chor/vec3.hpp"

namespace s2chor {

struct MinimizeOptions {
    int max_iters = 100000;
    double grad_tol = 1e-8;        // stop when sup-norm of tangent gradient drops below
    double min_separation = 1e-3;  // radians; collision guard on every accepted iterate
    double step_init = 1e-2;
    double step_shrink = 0.5;
    std::size_t n_samples = 512;   // used by callers that build the starting loop
    bool use_symmetry = true;      // project onto the E2/E3 fixed-point set (n = 3 only)

    // optional seeded tangent perturbation of the start, for exploration
    std::optional<std::uint64_t> perturb_seed;
    double perturb_scale = 1e-3;
};

enum class Termination { converged, max_iters, step_underflow };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iters: return "max_iters";
        case Termination::step_underflow: return "step_underflow";
    }
    return "unknown";
}

struct MinimizeReport {
    int iterations = 0;
    std::vector<double> action_history;  // action of every accepted iterate, non-increasing
    double final_action = 0.0;
    double final_grad_norm = 0.0;
    double final_min_separation = 0.0;
    bool below_collision_bound = false;
    Termination termination = Termination::converged;
};

// One descent step: per-sample retraction normalize(Q_j - step g_j), then the
// symmetry projection.
inline DiscreteLoop descent_step(const DiscreteLoop& loop, const std::vector<Vec3>& gradient,
                                 double step, bool use_symmetry = true) {
    if (!(step > 0.0)) throw std::invalid_argument("descent_step: step must be positive");
    if (gradient.size() != loop.size()) {
        throw std::invalid_argument("descent_step: gradient size mismatch");
    }
    std::vector<UnitPoint> out;
    out.reserve(loop.size());
    for (std::size_t j = 0; j < loop.size(); ++j) {
        out.push_back(UnitPoint::normalized(loop.at(static_cast<long>(j)).vec() - step * gradient[j]));
    }
    DiscreteLoop stepped(std::move(out));
    return use_symmetry ? symmetrize(stepped) : stepped;
}

namespace detail {

// Circulant kernel of [ (M/N) (D^T D + (2 pi)^2 I) ]^{-1} where D is the
// fourth-order difference stencil. Computed once per run by a direct DFT sum.
inline std::vector<double> sobolev_kernel(std::size_t n_samples, double total_mass) {
    const double nd = static_cast<double>(n_samples);
    std::vector<double> symbol(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double theta = 2.0 * pi() * static_cast<double>(k) / nd;
        const double s = (8.0 * std::sin(theta) - std::sin(2.0 * theta)) * nd / 6.0;
        symbol[k] = (nd / total_mass) / (s * s + 4.0 * pi() * pi());
    }
    std::vector<double> kernel(n_samples, 0.0);
    for (std::size_t r = 0; r < n_samples; ++r) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_samples; ++k) {
            acc += symbol[k] * std::cos(2.0 * pi() * static_cast<double>(k * r % n_samples) / nd);
        }
        kernel[r] = acc / nd;
    }
    return kernel;
}

inline double grad_sup_norm(const std::vector<Vec3>& g) {
    double sup = 0.0;
    for (const Vec3& v : g) sup = std::max(sup, max_abs_component(v));
    return sup;
}

}  // namespace detail

// Projected descent from loop0. Returns the final loop and a report; throws
// CollisionGuardError if no step respecting min_separation can be found
// (including an inadmissible start).
inline std::pair<DiscreteLoop, MinimizeReport> minimize(const DiscreteLoop& loop0,
                                                        const BodySystem& system,
                                                        const MinimizeOptions& opts) {
    if (!(opts.grad_tol > 0.0)) throw std::invalid_argument("minimize: grad_tol must be positive");
    if (!(opts.step_shrink > 0.0) || !(opts.step_shrink < 1.0)) {
        throw std::invalid_argument("minimize: step_shrink must lie in (0,1)");
    }
    if (opts.min_separation < 10.0 * kCollisionAngle) {
        throw std::invalid_argument("minimize: min_separation must be at least 10x the collision angle");
    }
    if (opts.use_symmetry && system.n() != 3) {
        throw std::invalid_argument("minimize: symmetry projection is defined for n = 3 only");
    }

    DiscreteLoop current = opts.use_symmetry ? symmetrize(loop0) : loop0;

    if (opts.perturb_seed) {
        std::mt19937_64 rng(*opts.perturb_seed);
        std::normal_distribution<double> gauss(0.0, opts.perturb_scale);
        std::vector<UnitPoint> jittered;
        jittered.reserve(current.size());
        for (std::size_t j = 0; j < current.size(); ++j) {
            const Vec3 q = current.at(static_cast<long>(j)).vec();
            Vec3 noise(gauss(rng), gauss(rng), gauss(rng));
            noise -= dot(noise, q) * q;
            jittered.push_back(UnitPoint::normalized(q + noise));
        }
        current = DiscreteLoop(std::move(jittered));
        if (opts.use_symmetry) current = symmetrize(current);
    }

    if (!(min_pair_separation(current, system) > opts.min_separation)) {
        throw CollisionGuardError("minimize: starting loop violates the minimum separation guard");
    }

    auto sums = detail::action_sums(current, system);
    auto f = detail::total_dd(sums);
    if (!std::isfinite(f.hi)) throw std::runtime_error("minimize: starting action is not finite");

    MinimizeReport report;
    report.action_history.push_back(f.hi + f.lo);

    std::vector<Vec3> grad = action_gradient(current, system);
    double gsup = detail::grad_sup_norm(grad);

    const auto precond = detail::sobolev_kernel(current.size(), system.total_mass());
    double step = opts.step_init;
    std::vector<Vec3> prev_raw;
    std::vector<Vec3> prev_grad;
    Termination why = Termination::max_iters;

    int it = 0;
    while (true) {
        if (gsup < opts.grad_tol) {
            why = Termination::converged;
            break;
        }
        if (it >= opts.max_iters) {
            why = Termination::max_iters;
            break;
        }

        // preconditioned direction, tangent-projected; falls back to the raw
        // gradient if the projection ever spoils descent
        std::vector<Vec3> dir = detail::apply_circulant(precond, grad);
        const std::vector<Vec3> raw = current.raw_samples();
        for (std::size_t j = 0; j < dir.size(); ++j) {
            dir[j] -= dot(dir[j], raw[j]) * raw[j];
        }
        double slope = 0.0;
        for (std::size_t j = 0; j < dir.size(); ++j) slope += dot(grad[j], dir[j]);
        if (!(slope > 0.0)) {
            dir = grad;
            slope = 0.0;
            for (const Vec3& g : grad) slope += norm_squared(g);
        }

        // Barzilai-Borwein initial step from the previous accepted move
        if (!prev_raw.empty()) {
            double ss = 0.0;
            double sy = 0.0;
            for (std::size_t j = 0; j < raw.size(); ++j) {
                const Vec3 s = raw[j] - prev_raw[j];
                const Vec3 y = grad[j] - prev_grad[j];
                ss += norm_squared(s);
                sy += dot(s, y);
            }
            if (sy > 0.0) step = ss / sy;
        }

        bool accepted = false;
        bool separation_blocked = false;
        double trial = step;
        while (trial > 1e-18) {
            DiscreteLoop candidate = descent_step(current, dir, trial, opts.use_symmetry);
            if (!(min_pair_separation(candidate, system) >= opts.min_separation)) {
                separation_blocked = true;
                trial *= opts.step_shrink;
                continue;
            }
            const auto cand_sums = detail::action_sums(candidate, system);
            const auto fc = detail::total_dd(cand_sums);
            if (!std::isfinite(fc.hi)) throw std::runtime_error("minimize: action became non-finite");
            if (detail::dd_difference(fc, f) <= -1e-4 * trial * slope) {
                prev_raw = raw;
                prev_grad = grad;
                current = std::move(candidate);
                f = fc;
                step = trial;
                accepted = true;
                break;
            }
            trial *= opts.step_shrink;
        }

        if (!accepted) {
            if (separation_blocked) {
                throw CollisionGuardError(
                    "minimize: no admissible step found within the separation guard");
            }
            why = Termination::step_underflow;
            break;
        }

        report.action_history.push_back(f.hi + f.lo);
        grad = action_gradient(current, system);
        gsup = detail::grad_sup_norm(grad);
        ++it;
    }

    report.iterations = it;
    report.final_action = f.hi + f.lo;
    report.final_grad_norm = gsup;
    report.final_min_separation = min_pair_separation(current, system);
    report.below_collision_bound = report.final_action < collision_bound();
    report.termination = why;
    return {std::move(current), std::move(report)};
}

}  // namespace s2chor
