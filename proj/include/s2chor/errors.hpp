#pragma once

#include <stdexcept>
#include <string>

namespace s2chor {

// Two bodies closer than the collision threshold. Carries which pair, and
// (when known) the loop sample or the integration time where it happened.
class CollisionError : public std::runtime_error {
public:
    CollisionError(int body_a, int body_b, double distance, std::string context = {})
        : std::runtime_error("collision between bodies " + std::to_string(body_a) + " and " +
                             std::to_string(body_b) + " (geodesic distance " +
                             std::to_string(distance) + " rad)" +
                             (context.empty() ? "" : " " + context)),
          body_a_(body_a), body_b_(body_b), distance_(distance) {}

    int body_a() const { return body_a_; }
    int body_b() const { return body_b_; }
    double distance() const { return distance_; }

private:
    int body_a_;
    int body_b_;
    double distance_;
};

// Antipodal pairs are force singularities too; the cotangent potential is
// regular there but its gradient is not, so they are rejected symmetrically.
class AntipodalError : public std::runtime_error {
public:
    AntipodalError(int body_a, int body_b, double distance, std::string context = {})
        : std::runtime_error("antipodal pair of bodies " + std::to_string(body_a) + " and " +
                             std::to_string(body_b) + " (geodesic distance " +
                             std::to_string(distance) + " rad)" +
                             (context.empty() ? "" : " " + context)),
          body_a_(body_a), body_b_(body_b), distance_(distance) {}

    int body_a() const { return body_a_; }
    int body_b() const { return body_b_; }
    double distance() const { return distance_; }

private:
    int body_a_;
    int body_b_;
    double distance_;
};

// A point that should be retracted to the sphere has near-zero ambient norm.
class DegenerateError : public std::runtime_error {
public:
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

// The minimizer could not find any admissible step respecting the
// minimum-separation guard.
class CollisionGuardError : public std::runtime_error {
public:
    explicit CollisionGuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace s2chor
