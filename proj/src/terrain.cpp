#include "nmopso/terrain.hpp"

#include "nmopso/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace nmopso {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

double parse_number(std::string_view token, std::size_t line) {
    double value = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ParseError("non-numeric value '" + std::string(token) + "'", line);
    }
    return value;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

TerrainGrid::TerrainGrid(std::size_t ncols, std::size_t nrows, double origin_x, double origin_y,
                         double cellsize, std::vector<double> elevations)
    : ncols_(ncols), nrows_(nrows), origin_x_(origin_x), origin_y_(origin_y),
      cellsize_(cellsize), elevations_(std::move(elevations)) {
    if (ncols_ < 2 || nrows_ < 2) {
        throw ValidationError("terrain grid needs at least 2 columns and 2 rows");
    }
    if (!(cellsize_ > 0.0) || !std::isfinite(cellsize_)) {
        throw ValidationError("terrain cellsize must be positive");
    }
    if (!std::isfinite(origin_x_) || !std::isfinite(origin_y_)) {
        throw ValidationError("terrain origin must be finite");
    }
    if (elevations_.size() != ncols_ * nrows_) {
        throw ValidationError("terrain elevation count does not match ncols*nrows");
    }
    for (double e : elevations_) {
        if (!std::isfinite(e)) {
            throw ValidationError("terrain elevations must be finite");
        }
    }
}

double TerrainGrid::node_x(std::size_t col) const {
    return origin_x_ + (static_cast<double>(col) + 0.5) * cellsize_;
}

double TerrainGrid::node_y(std::size_t row) const {
    return origin_y_ + (static_cast<double>(nrows_ - row) - 0.5) * cellsize_;
}

bool TerrainGrid::contains(double x, double y) const {
    return x >= min_x() && x <= max_x() && y >= min_y() && y <= max_y();
}

double TerrainGrid::min_elevation() const {
    return *std::min_element(elevations_.begin(), elevations_.end());
}

double TerrainGrid::max_elevation() const {
    return *std::max_element(elevations_.begin(), elevations_.end());
}

TerrainGrid load_terrain(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }

    static constexpr const char* keys[] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize"};
    double header[5] = {};
    for (std::size_t k = 0; k < 5; ++k) {
        const std::size_t line_no = k + 1;
        if (k >= lines.size()) {
            throw ParseError(std::string("missing header field '") + keys[k] + "'", line_no);
        }
        const auto tokens = split_ws(lines[k]);
        if (tokens.size() != 2 || tokens[0] != keys[k]) {
            throw ParseError(std::string("expected '") + keys[k] + " <value>'", line_no);
        }
        header[k] = parse_number(tokens[1], line_no);
    }

    const auto as_count = [](double v, std::size_t line) {
        if (v < 2.0 || v != std::floor(v)) {
            throw ParseError("grid dimension must be an integer >= 2", line);
        }
        return static_cast<std::size_t>(v);
    };
    const std::size_t ncols = as_count(header[0], 1);
    const std::size_t nrows = as_count(header[1], 2);
    if (!(header[4] > 0.0)) {
        throw ParseError("cellsize must be positive", 5);
    }

    std::vector<double> elevations;
    elevations.reserve(ncols * nrows);
    std::size_t rows_read = 0;
    for (std::size_t i = 5; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (trim(lines[i]).empty()) {
            continue;
        }
        if (rows_read == nrows) {
            throw ParseError("more rows than nrows declares", line_no);
        }
        const auto tokens = split_ws(lines[i]);
        if (tokens.size() != ncols) {
            throw ParseError("row has " + std::to_string(tokens.size()) + " values, expected " +
                                 std::to_string(ncols),
                             line_no);
        }
        for (auto t : tokens) {
            elevations.push_back(parse_number(t, line_no));
        }
        ++rows_read;
    }
    if (rows_read != nrows) {
        throw ParseError("expected " + std::to_string(nrows) + " rows, found " +
                             std::to_string(rows_read),
                         lines.size());
    }
    return TerrainGrid(ncols, nrows, header[2], header[3], header[4], std::move(elevations));
}

std::string serialize_terrain(const TerrainGrid& grid) {
    std::ostringstream out;
    out << "ncols " << grid.ncols() << '\n'
        << "nrows " << grid.nrows() << '\n'
        << "xllcorner " << format_double(grid.origin_x()) << '\n'
        << "yllcorner " << format_double(grid.origin_y()) << '\n'
        << "cellsize " << format_double(grid.cellsize()) << '\n';
    for (std::size_t row = 0; row < grid.nrows(); ++row) {
        for (std::size_t col = 0; col < grid.ncols(); ++col) {
            if (col > 0) {
                out << ' ';
            }
            out << format_double(grid.at(col, row));
        }
        out << '\n';
    }
    return out.str();
}

double elevation_at(const TerrainGrid& grid, double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y) || !grid.contains(x, y)) {
        throw OutOfBoundsError("terrain query (" + format_double(x) + ", " + format_double(y) +
                               ") is outside the grid footprint");
    }
    // Continuous node coordinates; u grows east, v grows north from the bottom row.
    // Snap to nodes so node queries return stored values exactly.
    const auto snap = [](double t) {
        const double n = std::round(t);
        return std::abs(t - n) < 1e-9 ? n : t;
    };
    const double u = snap((x - grid.min_x()) / grid.cellsize());
    const double v = snap((y - grid.min_y()) / grid.cellsize());
    const auto last_col = grid.ncols() - 1;
    const auto last_row_from_bottom = grid.nrows() - 1;
    const auto c0 = std::min(static_cast<std::size_t>(std::floor(u)), last_col - 1);
    const auto b0 = std::min(static_cast<std::size_t>(std::floor(v)), last_row_from_bottom - 1);
    const double tx = u - static_cast<double>(c0);
    const double ty = v - static_cast<double>(b0);

    // Rows in storage are counted from the top.
    const std::size_t r_lo = last_row_from_bottom - b0;
    const std::size_t r_hi = r_lo - 1;
    const double z00 = grid.at(c0, r_lo);
    const double z10 = grid.at(c0 + 1, r_lo);
    const double z01 = grid.at(c0, r_hi);
    const double z11 = grid.at(c0 + 1, r_hi);

    return (1.0 - tx) * (1.0 - ty) * z00 + tx * (1.0 - ty) * z10 + (1.0 - tx) * ty * z01 +
           tx * ty * z11;
}

TerrainGrid generate_terrain(const TerrainGenParams& params) {
    if (params.width < 2 || params.height < 2) {
        throw ValidationError("generated terrain needs width and height >= 2");
    }
    if (!(params.cellsize > 0.0)) {
        throw ValidationError("generated terrain cellsize must be positive");
    }
    if (!(params.roughness >= 0.0 && params.roughness <= 1.0)) {
        throw ValidationError("roughness must lie in [0, 1]");
    }

    struct Harmonic {
        double fx, fy, phase, weight;
    };
    constexpr int kHarmonics = 6;
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> freq_x(0.3, 2.0);
    std::uniform_real_distribution<double> freq_y(-2.0, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<Harmonic> harmonics;
    double weight_sum = 0.0;
    for (int k = 0; k < kHarmonics; ++k) {
        Harmonic h{freq_x(rng), freq_y(rng), phase(rng), 1.0 / (k + 1)};
        // Alternate the dominant axis so ridges are not all aligned.
        if (k % 2 == 1) {
            std::swap(h.fx, h.fy);
        }
        weight_sum += h.weight;
        harmonics.push_back(h);
    }

    const double extent =
        static_cast<double>(std::max(params.width, params.height)) * params.cellsize;
    const double amplitude = 0.1 * params.roughness * extent;

    std::vector<double> elevations(params.width * params.height, 0.0);
    if (amplitude > 0.0) {
        for (std::size_t row = 0; row < params.height; ++row) {
            const double v = (static_cast<double>(params.height - row) - 0.5) * params.cellsize / extent;
            for (std::size_t col = 0; col < params.width; ++col) {
                const double u = (static_cast<double>(col) + 0.5) * params.cellsize / extent;
                double s = 0.0;
                for (const auto& h : harmonics) {
                    s += h.weight * std::sin(2.0 * std::numbers::pi * (h.fx * u + h.fy * v) + h.phase);
                }
                elevations[row * params.width + col] = amplitude * (1.0 + s / weight_sum);
            }
        }
    }
    return TerrainGrid(params.width, params.height, params.origin_x, params.origin_y,
                       params.cellsize, std::move(elevations));
}

}  // namespace nmopso
