#pragma once

#include "nmopso/objectives.hpp"
#include "nmopso/scenario.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace nmopso {

/// One path segment relative to the previous segment's frame.
struct NavStep {
    double r = 0.0;      ///< segment length, meters
    double theta = 0.0;  ///< climb change, radians; positive gains altitude
    double psi = 0.0;    ///< turn change, radians; positive turns left (counter-clockwise from above)

    friend bool operator==(const NavStep&, const NavStep&) = default;
};

struct NavPath {
    std::vector<NavStep> steps;

    [[nodiscard]] std::size_t size() const { return steps.size(); }

    /// Flat layout (r_1, theta_1, psi_1, r_2, ...), the particle position vector.
    [[nodiscard]] std::vector<double> flatten() const;
    [[nodiscard]] static NavPath unflatten(std::span<const double> flat);

    friend bool operator==(const NavPath&, const NavPath&) = default;
};

/// Box constraints on navigation variables for one scenario.
struct NavBounds {
    double r_min = 0.0;
    double r_max = 0.0;
    double theta_max = 0.0;
    double psi_max = 0.0;

    [[nodiscard]] bool contains(const NavStep& s) const;
    [[nodiscard]] bool contains(const NavPath& p) const;
};

/// r is capped at 2 * |goal - start| / n so a decoded chain is at most twice the chord.
[[nodiscard]] NavBounds nav_bounds(const Scenario& scenario);

/// Homogeneous rigid transform; bottom row stays (0, 0, 0, 1).
struct Transform {
    Eigen::Matrix4d matrix = Eigen::Matrix4d::Identity();

    [[nodiscard]] Eigen::Matrix3d rotation() const { return matrix.topLeftCorner<3, 3>(); }
    [[nodiscard]] Vec3 translation() const { return matrix.topRightCorner<3, 1>(); }

    friend Transform operator*(const Transform& a, const Transform& b) {
        return {a.matrix * b.matrix};
    }
};

[[nodiscard]] Transform rotation_z(double angle);
[[nodiscard]] Transform rotation_y(double angle);
[[nodiscard]] Transform translation_x(double distance);

/**
 * Frame change from one waypoint to the next: turn psi about z, climb theta,
 * then advance r along the new x axis.
 *
 * Composed as Rz(psi) * Ry(-theta) * Mx(r). A right-handed Ry(+theta) tilts
 * +x downward, so the sign is flipped to make positive theta a climb.
 */
[[nodiscard]] Transform segment_transform(double r, double theta, double psi);

/**
 * Start frame: origin at `start`, x along the horizontal bearing to `goal`,
 * z up. Falls back to world +x when the goal is straight above or below.
 */
[[nodiscard]] Transform initial_pose(const Vec3& start, const Vec3& goal);

/// [start, P_1..P_n, goal]; P_j is the origin of the accumulated frame after step j.
[[nodiscard]] CartesianPath decode(const NavPath& nav, const Scenario& scenario);
[[nodiscard]] CartesianPath decode(const NavPath& nav, const Vec3& start, const Vec3& goal);

/**
 * Inverse of decode over every segment of `path` (m - 1 steps for m
 * waypoints), measured against the frame chain that starts at
 * initial_pose(front, back). Throws ValidationError on coincident waypoints.
 */
[[nodiscard]] NavPath recover_nav(const CartesianPath& path);

struct JointCheck {
    double delta_climb = 0.0;
    double delta_turn = 0.0;
    bool within_limits = true;
};

/**
 * One entry per interior waypoint, in path order. The last interior joint is
 * where the path turns onto the final goal segment; decode() does not bound
 * that turn, so it is summarised separately.
 */
struct KinematicReport {
    std::vector<JointCheck> joints;
    bool overall_pass = true;
    bool decoded_joints_pass = true;  ///< every joint except the last
    bool goal_joint_pass = true;
};

[[nodiscard]] KinematicReport validate_kinematics(const CartesianPath& path,
                                                  const KinematicLimits& limits);

}  // namespace nmopso
