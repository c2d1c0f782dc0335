#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nmopso {

/**
 * Ground elevation raster.
 *
 * Values are stored row-major with row 0 at the top (north) edge, matching
 * the text file layout. Each value is the elevation at its cell center, so
 * node (col, row) sits at
 *
 *   x = origin_x + (col + 0.5) * cellsize
 *   y = origin_y + (nrows - row - 0.5) * cellsize
 *
 * and the sampleable footprint is the rectangle spanned by the outermost
 * cell centers. The grid is immutable once constructed.
 */
class TerrainGrid {
public:
    TerrainGrid(std::size_t ncols, std::size_t nrows, double origin_x, double origin_y,
                double cellsize, std::vector<double> elevations);

    [[nodiscard]] std::size_t ncols() const { return ncols_; }
    [[nodiscard]] std::size_t nrows() const { return nrows_; }
    [[nodiscard]] double origin_x() const { return origin_x_; }
    [[nodiscard]] double origin_y() const { return origin_y_; }
    [[nodiscard]] double cellsize() const { return cellsize_; }
    [[nodiscard]] const std::vector<double>& elevations() const { return elevations_; }

    /// Stored value at (col, row), row 0 = top.
    [[nodiscard]] double at(std::size_t col, std::size_t row) const {
        return elevations_[row * ncols_ + col];
    }

    [[nodiscard]] double node_x(std::size_t col) const;
    [[nodiscard]] double node_y(std::size_t row) const;

    [[nodiscard]] double min_x() const { return node_x(0); }
    [[nodiscard]] double max_x() const { return node_x(ncols_ - 1); }
    [[nodiscard]] double min_y() const { return node_y(nrows_ - 1); }
    [[nodiscard]] double max_y() const { return node_y(0); }

    [[nodiscard]] bool contains(double x, double y) const;

    [[nodiscard]] double min_elevation() const;
    [[nodiscard]] double max_elevation() const;

    friend bool operator==(const TerrainGrid&, const TerrainGrid&) = default;

private:
    std::size_t ncols_;
    std::size_t nrows_;
    double origin_x_;
    double origin_y_;
    double cellsize_;
    std::vector<double> elevations_;
};

/// Parses the ASCII raster format. Throws ParseError naming the offending line.
[[nodiscard]] TerrainGrid load_terrain(std::string_view text);

/// Shortest round-trip decimal formatting; load_terrain(serialize_terrain(g)) == g.
[[nodiscard]] std::string serialize_terrain(const TerrainGrid& grid);

/// Bilinear sample between the four surrounding nodes. Throws OutOfBoundsError.
[[nodiscard]] double elevation_at(const TerrainGrid& grid, double x, double y);

struct TerrainGenParams {
    std::size_t width = 50;
    std::size_t height = 50;
    double cellsize = 10.0;
    double roughness = 0.5;
    std::uint64_t seed = 42;
    double origin_x = 0.0;
    double origin_y = 0.0;

    friend bool operator==(const TerrainGenParams&, const TerrainGenParams&) = default;
};

/**
 * Smooth synthetic terrain: a seeded sum of low-frequency 2D harmonics.
 * Peak-to-peak relief is at most 0.2 * roughness * (longest map side), and
 * elevations are shifted so that the lowest possible value is 0.
 */
[[nodiscard]] TerrainGrid generate_terrain(const TerrainGenParams& params);

}  // namespace nmopso
