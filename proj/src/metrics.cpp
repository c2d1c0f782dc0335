#include "nmopso/metrics.hpp"

#include "nmopso/archive.hpp"
#include "nmopso/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nmopso {

FrontStats front_stats(std::span<const ObjectiveVector> front, int divisions, double /*kappa*/) {
    if (front.empty()) {
        throw std::invalid_argument("front_stats needs a non-empty front");
    }
    FrontStats s;
    const double n = static_cast<double>(front.size());
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        auto& o = s.objectives[i];
        o.min = front.front()[i];
        o.max = o.min;
        double sum = 0.0;
        for (const auto& v : front) {
            o.min = std::min(o.min, v[i]);
            o.max = std::max(o.max, v[i]);
            sum += v[i];
        }
        o.mean = sum / n;
        double sq = 0.0;
        for (const auto& v : front) {
            sq += (v[i] - o.mean) * (v[i] - o.mean);
        }
        o.std = std::sqrt(sq / n);
    }
    s.front_size = front.size();
    s.occupied_cells = count_occupied_cells(front, divisions);
    s.s_d = static_cast<double>(s.front_size) / static_cast<double>(s.occupied_cells);
    return s;
}

std::string format_number(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::size_t> export_order(const RunResult& result) {
    std::vector<std::size_t> order(result.pareto_front.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& fa = result.pareto_front[a];
        const auto& fb = result.pareto_front[b];
        if (fa.objectives.values != fb.objectives.values) {
            return fa.objectives.values < fb.objectives.values;
        }
        return fa.position < fb.position;
    });
    return order;
}

std::string export_front_csv(const RunResult& result) {
    std::ostringstream out;
    out << "f1,f2,f3,f4\n";
    for (std::size_t i : export_order(result)) {
        const auto& v = result.pareto_front[i].objectives;
        out << format_number(v[0]) << ',' << format_number(v[1]) << ',' << format_number(v[2])
            << ',' << format_number(v[3]) << '\n';
    }
    return out.str();
}

std::string export_paths_json(const RunResult& result) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i : export_order(result)) {
        const auto& m = result.pareto_front[i];
        nlohmann::json wps = nlohmann::json::array();
        for (const auto& p : m.path.waypoints) {
            wps.push_back({p.x(), p.y(), p.z()});
        }
        arr.push_back({{"objectives", m.objectives.values}, {"waypoints", wps}});
    }
    return arr.dump(2) + "\n";
}

std::string export_stats_csv(const FrontStats& stats) {
    std::ostringstream out;
    out << "objective,max,min,mean,std\n";
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        const auto& o = stats.objectives[i];
        out << 'f' << (i + 1) << ',' << format_number(o.max) << ',' << format_number(o.min) << ','
            << format_number(o.mean) << ',' << format_number(o.std) << '\n';
    }
    out << "s_d," << format_number(stats.s_d) << '\n';
    return out.str();
}

namespace {

std::vector<std::string> lines_of(std::string_view text) {
    std::vector<std::string> lines;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

double to_double(const std::string& token, std::size_t line) {
    if (token == "inf") {
        return kInfeasible;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) {
            throw ParseError("trailing characters in '" + token + "'", line);
        }
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("non-numeric value '" + token + "'", line);
    }
}

}  // namespace

std::vector<ObjectiveVector> parse_front_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines.front() != "f1,f2,f3,f4") {
        throw ParseError("front file must start with header f1,f2,f3,f4", 1);
    }
    std::vector<ObjectiveVector> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        std::istringstream row(lines[i]);
        ObjectiveVector v;
        std::string cell;
        std::size_t k = 0;
        while (std::getline(row, cell, ',')) {
            if (k >= kNumObjectives) {
                throw ParseError("too many columns", i + 1);
            }
            v[k++] = to_double(cell, i + 1);
        }
        if (k != kNumObjectives) {
            throw ParseError("expected 4 columns", i + 1);
        }
        out.push_back(v);
    }
    return out;
}

CartesianPath parse_path_text(std::string_view text) {
    CartesianPath path;
    const auto lines = lines_of(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream in(line);
        std::vector<std::string> tokens;
        for (std::string t; in >> t;) {
            tokens.push_back(t);
        }
        if (tokens.empty()) {
            continue;
        }
        if (tokens.size() != 3) {
            throw ParseError("expected 'x y z'", i + 1);
        }
        Vec3 p(to_double(tokens[0], i + 1), to_double(tokens[1], i + 1), to_double(tokens[2], i + 1));
        if (!p.allFinite()) {
            throw ParseError("waypoint coordinates must be finite", i + 1);
        }
        path.waypoints.push_back(p);
    }
    if (path.waypoints.size() < 3) {
        throw ParseError("a path needs at least 3 waypoints (start, one interior point, goal)");
    }
    return path;
}

}  // namespace nmopso
