#pragma once

#include "nmopso/scenario.hpp"

#include <array>
#include <limits>
#include <vector>

namespace nmopso {

inline constexpr std::size_t kNumObjectives = 4;
inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

/// Waypoints P_1..P_m; P_1 is the scenario start and P_m the goal.
struct CartesianPath {
    std::vector<Vec3> waypoints;

    [[nodiscard]] std::size_t size() const { return waypoints.size(); }
};

/// (f1, f2, f3, f4): length, collision, altitude, smoothness. +inf marks infeasibility.
struct ObjectiveVector {
    std::array<double, kNumObjectives> values{};

    [[nodiscard]] double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    [[nodiscard]] bool feasible() const;
    /// Number of infinite components.
    [[nodiscard]] std::size_t infeasible_count() const;

    friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

struct WeightVector {
    std::array<double, kNumObjectives> values{1.0, 1.0, 1.0, 1.0};

    void validate() const;
};

[[nodiscard]] double path_length_cost(const CartesianPath& path, double r_min);
[[nodiscard]] double collision_cost(const CartesianPath& path, const Scenario& scenario);
[[nodiscard]] double altitude_cost(const CartesianPath& path, const Scenario& scenario);
[[nodiscard]] double smoothness_cost(const CartesianPath& path);

/// Angle in [0, pi] between two non-zero vectors. Throws std::invalid_argument on zero length.
[[nodiscard]] double turning_angle(const Vec3& a, const Vec3& b);

/// xy-plane distance from (px, py) to the segment a-b, endpoints included.
[[nodiscard]] double point_segment_distance_xy(double px, double py, const Vec3& a, const Vec3& b);

[[nodiscard]] ObjectiveVector evaluate_all(const CartesianPath& path, const Scenario& scenario);

[[nodiscard]] double weighted_sum(const ObjectiveVector& v, const WeightVector& w);

}  // namespace nmopso
