#pragma once

#include "nmopso/engine.hpp"
#include "nmopso/objectives.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nmopso {

struct ObjectiveStats {
    double max = 0.0;
    double min = 0.0;
    double mean = 0.0;
    double std = 0.0;  ///< population standard deviation
};

struct FrontStats {
    std::array<ObjectiveStats, kNumObjectives> objectives{};
    double s_d = 1.0;  ///< front size / occupied cells
    std::size_t front_size = 0;
    std::size_t occupied_cells = 0;
};

/// Per-objective summary plus solution distribution over a grid built from the front itself.
[[nodiscard]] FrontStats front_stats(std::span<const ObjectiveVector> front, int divisions,
                                     double kappa = 2.0);

/// "%.17g" formatting; "inf" for +infinity.
[[nodiscard]] std::string format_number(double v);

/// Front member indices sorted lexicographically by objective vector.
[[nodiscard]] std::vector<std::size_t> export_order(const RunResult& result);

/// `f1,f2,f3,f4` header and one row per front member, in export_order.
[[nodiscard]] std::string export_front_csv(const RunResult& result);

/// [{"objectives": [...], "waypoints": [[x,y,z], ...]}, ...] in export_order.
[[nodiscard]] std::string export_paths_json(const RunResult& result);

/// `objective,max,min,mean,std` rows for f1..f4, then `s_d,<value>`.
[[nodiscard]] std::string export_stats_csv(const FrontStats& stats);

[[nodiscard]] std::vector<ObjectiveVector> parse_front_csv(std::string_view text);

/// Whitespace-separated `x y z` per line; blank lines and `#` comments are skipped.
[[nodiscard]] CartesianPath parse_path_text(std::string_view text);

}  // namespace nmopso
