#include "nmopso/objectives.hpp"

#include "nmopso/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nmopso {

bool ObjectiveVector::feasible() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

std::size_t ObjectiveVector::infeasible_count() const {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); }));
}

void WeightVector::validate() const {
    bool any_positive = false;
    for (double w : values) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ValidationError("weights must be finite and non-negative");
        }
        any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) {
        throw ValidationError("at least one weight must be positive");
    }
}

double path_length_cost(const CartesianPath& path, double r_min) {
    const auto& p = path.waypoints;
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        const double len = (p[j + 1] - p[j]).norm();
        if (len < r_min) {
            return kInfeasible;
        }
        total += len;
    }
    if (total <= 0.0) {
        return kInfeasible;
    }
    return 1.0 - (p.back() - p.front()).norm() / total;
}

double point_segment_distance_xy(double px, double py, const Vec3& a, const Vec3& b) {
    const double dx = b.x() - a.x();
    const double dy = b.y() - a.y();
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(((px - a.x()) * dx + (py - a.y()) * dy) / len2, 0.0, 1.0);
    }
    return std::hypot(px - (a.x() + t * dx), py - (a.y() + t * dy));
}

double collision_cost(const CartesianPath& path, const Scenario& scenario) {
    const auto& p = path.waypoints;
    const auto& obstacles = scenario.obstacles;
    if (obstacles.empty() || p.size() < 2) {
        return 0.0;
    }
    const double d_size = scenario.drone_size;
    const double safe = scenario.safe_distance;
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        for (const auto& o : obstacles) {
            const double d = point_segment_distance_xy(o.center_x, o.center_y, p[j], p[j + 1]);
            const double collide = d_size + o.radius;
            if (d <= collide) {
                return kInfeasible;
            }
            if (d < collide + safe) {
                sum += 1.0 - (d - collide) / safe;
            }
        }
    }
    return sum / static_cast<double>(obstacles.size() * (p.size() - 1));
}

double altitude_cost(const CartesianPath& path, const Scenario& scenario) {
    const auto& p = path.waypoints;
    if (p.empty()) {
        return 0.0;
    }
    const auto& terrain = *scenario.terrain;
    const double h_mean = scenario.h_mean();
    const double band = scenario.h_max - scenario.h_min;
    double sum = 0.0;
    for (const auto& w : p) {
        if (!terrain.contains(w.x(), w.y())) {
            return kInfeasible;
        }
        const double h = w.z() - elevation_at(terrain, w.x(), w.y());
        if (!(h >= scenario.h_min && h <= scenario.h_max)) {
            return kInfeasible;
        }
        sum += 2.0 * std::abs(h - h_mean) / band;
    }
    return sum / static_cast<double>(p.size());
}

double turning_angle(const Vec3& a, const Vec3& b) {
    if (a.squaredNorm() == 0.0 || b.squaredNorm() == 0.0) {
        throw std::invalid_argument("turning_angle needs non-zero vectors");
    }
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

double smoothness_cost(const CartesianPath& path) {
    const auto& p = path.waypoints;
    if (p.size() < 3) {
        return 0.0;
    }
    double sum = 0.0;
    std::size_t joints = 0;
    for (std::size_t j = 0; j + 2 < p.size(); ++j) {
        const Vec3 a = p[j + 1] - p[j];
        const Vec3 b = p[j + 2] - p[j + 1];
        // A zero-length segment has no direction; F1 already rejects it.
        if (a.squaredNorm() > 0.0 && b.squaredNorm() > 0.0) {
            sum += std::abs(turning_angle(a, b)) / std::numbers::pi;
        }
        ++joints;
    }
    return sum / static_cast<double>(joints);
}

ObjectiveVector evaluate_all(const CartesianPath& path, const Scenario& scenario) {
    return {{path_length_cost(path, scenario.r_min), collision_cost(path, scenario),
             altitude_cost(path, scenario), smoothness_cost(path)}};
}

double weighted_sum(const ObjectiveVector& v, const WeightVector& w) {
    double total = 0.0;
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        if (!std::isfinite(v[i])) {
            return kInfeasible;
        }
        total += w.values[i] * v[i];
    }
    return total;
}

}  // namespace nmopso
