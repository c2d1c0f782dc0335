#include "nmopso/navdecode.hpp"

#include "nmopso/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nmopso {

std::vector<double> NavPath::flatten() const {
    std::vector<double> flat;
    flat.reserve(steps.size() * 3);
    for (const auto& s : steps) {
        flat.push_back(s.r);
        flat.push_back(s.theta);
        flat.push_back(s.psi);
    }
    return flat;
}

NavPath NavPath::unflatten(std::span<const double> flat) {
    if (flat.size() % 3 != 0) {
        throw ValidationError("navigation vector length must be a multiple of 3");
    }
    NavPath nav;
    nav.steps.reserve(flat.size() / 3);
    for (std::size_t i = 0; i < flat.size(); i += 3) {
        nav.steps.push_back({flat[i], flat[i + 1], flat[i + 2]});
    }
    return nav;
}

bool NavBounds::contains(const NavStep& s) const {
    return s.r >= r_min && s.r <= r_max && std::abs(s.theta) <= theta_max &&
           std::abs(s.psi) <= psi_max;
}

bool NavBounds::contains(const NavPath& p) const {
    return std::all_of(p.steps.begin(), p.steps.end(),
                       [this](const NavStep& s) { return contains(s); });
}

NavBounds nav_bounds(const Scenario& scenario) {
    const double chord = (scenario.goal - scenario.start).norm();
    const double cap = 2.0 * chord / static_cast<double>(scenario.n_nodes);
    return {scenario.r_min, std::max(scenario.r_min, cap), scenario.limits.theta_max,
            scenario.limits.psi_max};
}

Transform rotation_z(double angle) {
    Transform t;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    t.matrix(0, 0) = c;
    t.matrix(0, 1) = -s;
    t.matrix(1, 0) = s;
    t.matrix(1, 1) = c;
    return t;
}

Transform rotation_y(double angle) {
    Transform t;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    t.matrix(0, 0) = c;
    t.matrix(0, 2) = s;
    t.matrix(2, 0) = -s;
    t.matrix(2, 2) = c;
    return t;
}

Transform translation_x(double distance) {
    Transform t;
    t.matrix(0, 3) = distance;
    return t;
}

Transform segment_transform(double r, double theta, double psi) {
    return rotation_z(psi) * rotation_y(-theta) * translation_x(r);
}

Transform initial_pose(const Vec3& start, const Vec3& goal) {
    const Vec3 d = goal - start;
    const double heading = (d.x() == 0.0 && d.y() == 0.0) ? 0.0 : std::atan2(d.y(), d.x());
    Transform t = rotation_z(heading);
    t.matrix.topRightCorner<3, 1>() = start;
    return t;
}

CartesianPath decode(const NavPath& nav, const Vec3& start, const Vec3& goal) {
    CartesianPath path;
    path.waypoints.reserve(nav.size() + 2);
    path.waypoints.push_back(start);
    Transform frame = initial_pose(start, goal);
    for (const auto& s : nav.steps) {
        frame = frame * segment_transform(s.r, s.theta, s.psi);
        path.waypoints.push_back(frame.translation());
    }
    path.waypoints.push_back(goal);
    return path;
}

CartesianPath decode(const NavPath& nav, const Scenario& scenario) {
    return decode(nav, scenario.start, scenario.goal);
}

NavPath recover_nav(const CartesianPath& path) {
    const auto& p = path.waypoints;
    NavPath nav;
    if (p.size() < 2) {
        return nav;
    }
    Eigen::Matrix3d frame = initial_pose(p.front(), p.back()).rotation();
    nav.steps.reserve(p.size() - 1);
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        const Vec3 local = frame.transpose() * (p[j + 1] - p[j]);
        const double r = local.norm();
        if (r == 0.0) {
            throw ValidationError("waypoints " + std::to_string(j) + " and " +
                                  std::to_string(j + 1) + " coincide");
        }
        const double horizontal = std::hypot(local.x(), local.y());
        const double psi = horizontal == 0.0 ? 0.0 : std::atan2(local.y(), local.x());
        const double theta = std::atan2(local.z(), horizontal);
        nav.steps.push_back({r, theta, psi});
        frame = frame * segment_transform(r, theta, psi).rotation();
    }
    return nav;
}

KinematicReport validate_kinematics(const CartesianPath& path, const KinematicLimits& limits) {
    const NavPath nav = recover_nav(path);
    // Recovered angles carry ~1e-15 rounding; paths clamped onto a limit must still pass.
    constexpr double kAngleTolerance = 1e-9;
    KinematicReport report;
    // Step j + 1 leaves interior waypoint j; step 0 leaves the start.
    for (std::size_t j = 1; j < nav.size(); ++j) {
        const auto& s = nav.steps[j];
        const bool ok = std::abs(s.theta) <= limits.theta_max + kAngleTolerance &&
                        std::abs(s.psi) <= limits.psi_max + kAngleTolerance;
        report.joints.push_back({s.theta, s.psi, ok});
    }
    for (std::size_t j = 0; j < report.joints.size(); ++j) {
        const bool ok = report.joints[j].within_limits;
        report.overall_pass = report.overall_pass && ok;
        if (j + 1 == report.joints.size()) {
            report.goal_joint_pass = ok;
        } else {
            report.decoded_joints_pass = report.decoded_joints_pass && ok;
        }
    }
    return report;
}

}  // namespace nmopso
