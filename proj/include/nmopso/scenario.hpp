#pragma once

#include "nmopso/terrain.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nmopso {

using Vec3 = Eigen::Vector3d;

/// Infinite-height cylinder; collision tests use the xy projection only.
struct Obstacle {
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 1.0;

    friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

/**
 * Per-joint limits on climb and turn changes. The speed band is carried for
 * reporting; decoded paths are purely geometric so nothing enforces it.
 */
struct KinematicLimits {
    double theta_max = std::numbers::pi / 4.0;
    double psi_max = std::numbers::pi / 4.0;
    double v_min = 1.0;
    double v_max = 10.0;

    void validate() const;

    friend bool operator==(const KinematicLimits&, const KinematicLimits&) = default;
};

/// Flight direction as climb (pitch above horizontal) and turn (bearing from +x).
struct HeadingState {
    double climb = 0.0;
    double turn = 0.0;
};

/// Heading of a non-zero direction vector; climb in [-pi/2, pi/2].
[[nodiscard]] HeadingState heading_of(const Vec3& direction);

/// Where the terrain came from, kept so a scenario can be written back out.
using TerrainSource = std::variant<std::string, TerrainGenParams>;

struct Scenario {
    std::shared_ptr<const TerrainGrid> terrain;
    TerrainSource terrain_source;
    Vec3 start = Vec3::Zero();
    Vec3 goal = Vec3::Zero();
    std::vector<Obstacle> obstacles;
    double drone_size = 0.0;
    double safe_distance = 0.0;
    double r_min = 1.0;
    double h_min = 0.0;
    double h_max = 1.0;
    KinematicLimits limits;
    std::size_t n_nodes = 10;

    [[nodiscard]] double h_mean() const { return 0.5 * (h_max + h_min); }

    /// Throws ValidationError on the first violated invariant.
    void validate() const;
};

/**
 * Parses the JSON scenario format. A string `terrain` field is a path to a
 * terrain file, resolved against `base_dir` when relative; an object of the
 * form {"generate": {...}} builds a synthetic grid in place.
 */
[[nodiscard]] Scenario parse_scenario(std::string_view text,
                                      const std::filesystem::path& base_dir = {});

[[nodiscard]] Scenario load_scenario(const std::filesystem::path& file);

[[nodiscard]] std::string serialize_scenario(const Scenario& scenario);

}  // namespace nmopso
