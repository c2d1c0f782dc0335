#include "nmopso/scenario.hpp"

#include "nmopso/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace nmopso {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "terrain", "start",   "goal",      "obstacles", "drone_size", "safe_distance", "r_min",
    "h_min",   "h_max",   "theta_max", "psi_max",   "v_min",      "v_max",         "n_nodes"};

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + file.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(std::string("scenario is missing required field '") + key + "'");
    }
    return *it;
}

double number(const json& j, const char* key) {
    if (!j.is_number()) {
        throw ParseError(std::string("field '") + key + "' must be a number");
    }
    return j.get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, key);
}

Vec3 point3(const json& j, const char* key) {
    if (!j.is_array() || j.size() != 3) {
        throw ParseError(std::string("field '") + key + "' must be an array [x, y, z]");
    }
    Vec3 p;
    for (int i = 0; i < 3; ++i) {
        p[i] = number(j[i], key);
    }
    return p;
}

TerrainGenParams gen_params(const json& g) {
    if (!g.is_object()) {
        throw ParseError("terrain.generate must be an object");
    }
    TerrainGenParams p;
    const auto count = [&](const char* key, std::size_t fallback) {
        auto it = g.find(key);
        if (it == g.end()) {
            return fallback;
        }
        if (!it->is_number_integer() || it->get<long long>() < 0) {
            throw ParseError(std::string("terrain.generate.") + key + " must be a non-negative integer");
        }
        return static_cast<std::size_t>(it->get<long long>());
    };
    p.width = count("width", p.width);
    p.height = count("height", p.height);
    p.cellsize = number_or(g, "cellsize", p.cellsize);
    p.roughness = number_or(g, "roughness", p.roughness);
    p.origin_x = number_or(g, "origin_x", p.origin_x);
    p.origin_y = number_or(g, "origin_y", p.origin_y);
    if (auto it = g.find("seed"); it != g.end()) {
        if (!it->is_number_integer()) {
            throw ParseError("terrain.generate.seed must be an integer");
        }
        p.seed = it->get<std::uint64_t>();
    }
    return p;
}

}  // namespace

void KinematicLimits::validate() const {
    if (!(theta_max > 0.0 && theta_max <= std::numbers::pi / 2.0)) {
        throw ValidationError("theta_max must lie in (0, pi/2]");
    }
    if (!(psi_max > 0.0 && psi_max <= std::numbers::pi)) {
        throw ValidationError("psi_max must lie in (0, pi]");
    }
    if (!(v_min <= v_max)) {
        throw ValidationError("v_min must not exceed v_max");
    }
}

HeadingState heading_of(const Vec3& direction) {
    const double horizontal = std::hypot(direction.x(), direction.y());
    return {std::atan2(direction.z(), horizontal), std::atan2(direction.y(), direction.x())};
}

void Scenario::validate() const {
    if (!terrain) {
        throw ValidationError("scenario has no terrain");
    }
    if (!start.allFinite() || !goal.allFinite()) {
        throw ValidationError("start and goal must be finite");
    }
    if (start == goal) {
        throw ValidationError("start and goal must differ");
    }
    if (!terrain->contains(start.x(), start.y())) {
        throw ValidationError("start lies outside the terrain footprint");
    }
    if (!terrain->contains(goal.x(), goal.y())) {
        throw ValidationError("goal lies outside the terrain footprint");
    }
    if (!(h_min < h_max)) {
        throw ValidationError("h_min must be strictly less than h_max");
    }
    if (!(r_min > 0.0)) {
        throw ValidationError("r_min must be positive");
    }
    if (!(drone_size >= 0.0)) {
        throw ValidationError("drone_size must be non-negative");
    }
    if (!(safe_distance >= 0.0)) {
        throw ValidationError("safe_distance must be non-negative");
    }
    if (n_nodes < 1) {
        throw ValidationError("n_nodes must be at least 1");
    }
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
        const auto& o = obstacles[k];
        if (!(o.radius > 0.0) || !std::isfinite(o.center_x) || !std::isfinite(o.center_y)) {
            throw ValidationError("obstacle " + std::to_string(k) + " needs a positive radius and finite center");
        }
    }
    limits.validate();
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ParseError("scenario must be a JSON object");
    }
    for (const auto& [key, _] : root.items()) {
        if (!kKnownKeys.contains(key)) {
            throw ParseError("unknown scenario field '" + key + "'");
        }
    }

    Scenario s;
    const json& terrain = require(root, "terrain");
    if (terrain.is_string()) {
        const std::string path = terrain.get<std::string>();
        std::filesystem::path resolved(path);
        if (resolved.is_relative() && !base_dir.empty()) {
            resolved = base_dir / resolved;
        }
        try {
            s.terrain = std::make_shared<const TerrainGrid>(load_terrain(read_file(resolved)));
        } catch (const std::exception& e) {
            throw ParseError("failed to load terrain '" + resolved.string() + "': " + e.what());
        }
        s.terrain_source = path;
    } else if (terrain.is_object() && terrain.contains("generate")) {
        const auto params = gen_params(terrain.at("generate"));
        s.terrain = std::make_shared<const TerrainGrid>(generate_terrain(params));
        s.terrain_source = params;
    } else {
        throw ParseError("field 'terrain' must be a file path or {\"generate\": {...}}");
    }

    s.start = point3(require(root, "start"), "start");
    s.goal = point3(require(root, "goal"), "goal");
    s.drone_size = number(require(root, "drone_size"), "drone_size");
    s.safe_distance = number(require(root, "safe_distance"), "safe_distance");
    s.r_min = number(require(root, "r_min"), "r_min");
    s.h_min = number(require(root, "h_min"), "h_min");
    s.h_max = number(require(root, "h_max"), "h_max");
    s.limits.theta_max = number_or(root, "theta_max", s.limits.theta_max);
    s.limits.psi_max = number_or(root, "psi_max", s.limits.psi_max);
    s.limits.v_min = number_or(root, "v_min", s.limits.v_min);
    s.limits.v_max = number_or(root, "v_max", s.limits.v_max);
    if (auto it = root.find("n_nodes"); it != root.end()) {
        if (!it->is_number_integer() || it->get<long long>() < 1) {
            throw ValidationError("n_nodes must be an integer >= 1");
        }
        s.n_nodes = static_cast<std::size_t>(it->get<long long>());
    }
    if (auto it = root.find("obstacles"); it != root.end()) {
        if (!it->is_array()) {
            throw ParseError("field 'obstacles' must be an array");
        }
        for (const auto& o : *it) {
            if (!o.is_object()) {
                throw ParseError("each obstacle must be an object {x, y, radius}");
            }
            s.obstacles.push_back({number(require(o, "x"), "x"), number(require(o, "y"), "y"),
                                   number(require(o, "radius"), "radius")});
        }
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
    return parse_scenario(read_file(file), file.parent_path());
}

std::string serialize_scenario(const Scenario& s) {
    json root;
    if (const auto* path = std::get_if<std::string>(&s.terrain_source)) {
        root["terrain"] = *path;
    } else {
        const auto& p = std::get<TerrainGenParams>(s.terrain_source);
        root["terrain"] = {{"generate",
                            {{"width", p.width},
                             {"height", p.height},
                             {"cellsize", p.cellsize},
                             {"roughness", p.roughness},
                             {"seed", p.seed},
                             {"origin_x", p.origin_x},
                             {"origin_y", p.origin_y}}}};
    }
    root["start"] = {s.start.x(), s.start.y(), s.start.z()};
    root["goal"] = {s.goal.x(), s.goal.y(), s.goal.z()};
    json obstacles = json::array();
    for (const auto& o : s.obstacles) {
        obstacles.push_back({{"x", o.center_x}, {"y", o.center_y}, {"radius", o.radius}});
    }
    root["obstacles"] = obstacles;
    root["drone_size"] = s.drone_size;
    root["safe_distance"] = s.safe_distance;
    root["r_min"] = s.r_min;
    root["h_min"] = s.h_min;
    root["h_max"] = s.h_max;
    root["theta_max"] = s.limits.theta_max;
    root["psi_max"] = s.limits.psi_max;
    root["v_min"] = s.limits.v_min;
    root["v_max"] = s.limits.v_max;
    root["n_nodes"] = s.n_nodes;
    return root.dump(2) + "\n";
}

}  // namespace nmopso
