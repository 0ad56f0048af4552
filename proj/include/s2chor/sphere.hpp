#pragma once

// Pointwise geometry on the unit sphere and the cotangent pair potential:
// distances, U = sum_{i<j} m_i m_j cot(d(q_i, q_j)), its tangent gradient,
// and the chordal bounds 1/r - 1 < cot d < 1/r.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "s2chor/errors.hpp"
#include "s2chor/vec3.hpp"

namespace s2chor {

// Pairs closer than this geodesic angle are treated as collisions, and pairs
// within the same angle of pi as antipodal singularities.
inline constexpr double kCollisionAngle = 1e-8;

inline constexpr double kUnitNormTolerance = 1e-12;   // on x^2+y^2+z^2
inline constexpr double kDegenerateNorm = 1e-6;       // retraction cutoff

constexpr double pi() { return 3.14159265358979323846; }

// A point on S^2. The strict constructor accepts coordinates already on the
// sphere (|q|^2 within 1e-12 of 1) and stores them bit-exactly; normalized()
// retracts an arbitrary ambient vector.
class UnitPoint {
public:
    UnitPoint(double x, double y, double z) : v_(x, y, z) {
        if (std::abs(norm_squared(v_) - 1.0) > kUnitNormTolerance) {
            throw std::invalid_argument("UnitPoint: coordinates are not on the unit sphere");
        }
    }

    static UnitPoint normalized(const Vec3& ambient) {
        const double n = norm(ambient);
        if (n < kDegenerateNorm) {
            throw DegenerateError("UnitPoint: cannot retract near-zero vector to the sphere");
        }
        return UnitPoint(ambient / n, unchecked_tag{});
    }

    const Vec3& vec() const { return v_; }
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }

private:
    struct unchecked_tag {};
    UnitPoint(const Vec3& v, unchecked_tag) : v_(v) {}
    Vec3 v_;
};

// A vector attached to the tangent plane of its base point. Construction
// projects out any normal component, so base.vec() . v == 0 holds exactly up
// to roundoff.
struct TangentVector {
    UnitPoint base;
    Vec3 v;

    TangentVector(const UnitPoint& base_, const Vec3& ambient)
        : base(base_), v(ambient - dot(ambient, base_.vec()) * base_.vec()) {}
};

// Geodesic (arc) and chordal (straight-line) distance between the same pair,
// kept consistent: chordal is measured directly and the geodesic is recovered
// as 2 asin(chordal/2), which is accurate down to coincident points.
struct PairSeparation {
    double geodesic;  // radians, in [0, pi]
    double chordal;   // in [0, 2]

    PairSeparation(const UnitPoint& a, const UnitPoint& b)
        : geodesic(0.0), chordal(norm(a.vec() - b.vec())) {
        geodesic = 2.0 * std::asin(std::min(1.0, chordal / 2.0));
    }
};

inline double geodesic_distance(const UnitPoint& a, const UnitPoint& b) {
    return std::acos(std::clamp(dot(a.vec(), b.vec()), -1.0, 1.0));
}

namespace detail {

// Scale-free pair kernels. cot of the angle between two ambient vectors is
// (a.b)/|a x b|; for unit vectors this coincides with the chordal form
// (1 - r^2/2)/(r sqrt(1 - r^2/4)) and stays accurate at both singular ends.
// The potential is homogeneous of degree zero, so near-unit inputs (e.g.
// interpolated loop samples, RK4 stage states) are handled exactly as their
// radial projections would be.

inline double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

inline double cot_raw(const Vec3& a, const Vec3& b) {
    return dot(a, b) / norm(cross(a, b));
}

// d/da of cot(angle(a,b)); for unit inputs: (b - (a.b) a) / (1 - (a.b)^2)^{3/2}
inline Vec3 cot_grad_raw(const Vec3& a, const Vec3& b) {
    const double w = norm(cross(a, b));
    const double b2 = norm_squared(b);
    return b2 / (w * w * w) * (norm_squared(a) * b - dot(a, b) * a);
}

inline void check_pair_admissible(const Vec3& a, const Vec3& b, int i, int j,
                                  const std::string& context = {}) {
    const double d = angle_between(a, b);
    if (d < kCollisionAngle) throw CollisionError(i, j, d, context);
    if (d > pi() - kCollisionAngle) throw AntipodalError(i, j, d, context);
}

}  // namespace detail

// cot(d(a,b)), rejecting collision and antipodal pairs.
inline double cot_pair(const UnitPoint& a, const UnitPoint& b) {
    detail::check_pair_admissible(a.vec(), b.vec(), 0, 1);
    return detail::cot_raw(a.vec(), b.vec());
}

// The chordal bounds on cot d: (1/r - 1, 1/r) for 0 < r < 2.
inline std::pair<double, double> cot_bounds(double chordal) {
    if (!(chordal > 0.0) || !(chordal < 2.0)) {
        throw std::domain_error("cot_bounds: chordal distance must lie in (0, 2)");
    }
    return {1.0 / chordal - 1.0, 1.0 / chordal};
}

// U = sum_{i<j} m_i m_j cot(d(q_i, q_j)). Pair order is fixed (ascending,
// left fold) for bitwise reproducibility.
inline double potential(const std::vector<UnitPoint>& positions,
                        const std::vector<double>& masses) {
    if (positions.size() != masses.size()) {
        throw std::invalid_argument("potential: positions/masses size mismatch");
    }
    const std::size_t n = positions.size();
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            detail::check_pair_admissible(positions[i].vec(), positions[j].vec(),
                                          static_cast<int>(i), static_cast<int>(j));
            u += masses[i] * masses[j] * detail::cot_raw(positions[i].vec(), positions[j].vec());
        }
    }
    return u;
}

// dU/dq_i = sum_{j != i} m_i m_j (q_j - (q_i.q_j) q_i) / (1 - (q_i.q_j)^2)^{3/2},
// tangent at q_i by construction.
inline std::vector<TangentVector> potential_gradient(const std::vector<UnitPoint>& positions,
                                                     const std::vector<double>& masses) {
    if (positions.size() != masses.size()) {
        throw std::invalid_argument("potential_gradient: positions/masses size mismatch");
    }
    const std::size_t n = positions.size();
    std::vector<TangentVector> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 g;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            detail::check_pair_admissible(positions[i].vec(), positions[j].vec(),
                                          static_cast<int>(i), static_cast<int>(j));
            g += masses[i] * masses[j] *
                 detail::cot_grad_raw(positions[i].vec(), positions[j].vec());
        }
        out.emplace_back(positions[i], g);
    }
    return out;
}

}  // namespace s2chor
