#include "nmopso/objectives.hpp"
#include "test_support.hpp"

#include <doctest.h>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

using namespace nmopso;

namespace {

constexpr double kPi = std::numbers::pi;

// Plain-array reference implementations, written directly from the cost
// definitions and sharing no code with the library.
using P3 = std::array<double, 3>;

double ref_f1(const std::vector<P3>& p, double r_min) {
    double total = 0.0;
    for (std::size_t j = 1; j < p.size(); ++j) {
        const double l = std::sqrt((p[j][0] - p[j - 1][0]) * (p[j][0] - p[j - 1][0]) +
                                   (p[j][1] - p[j - 1][1]) * (p[j][1] - p[j - 1][1]) +
                                   (p[j][2] - p[j - 1][2]) * (p[j][2] - p[j - 1][2]));
        if (l < r_min) {
            return INFINITY;
        }
        total += l;
    }
    const P3& a = p.front();
    const P3& b = p.back();
    const double chord = std::sqrt((b[0] - a[0]) * (b[0] - a[0]) + (b[1] - a[1]) * (b[1] - a[1]) +
                                   (b[2] - a[2]) * (b[2] - a[2]));
    return 1.0 - chord / total;
}

double ref_seg_dist(double px, double py, const P3& a, const P3& b) {
    // Closest point by sampling the analytic minimiser and both endpoints.
    const double ux = b[0] - a[0];
    const double uy = b[1] - a[1];
    const double len2 = ux * ux + uy * uy;
    auto dist_at = [&](double t) { return std::hypot(a[0] + t * ux - px, a[1] + t * uy - py); };
    double best = std::min(dist_at(0.0), dist_at(1.0));
    if (len2 > 0.0) {
        const double t = ((px - a[0]) * ux + (py - a[1]) * uy) / len2;
        if (t > 0.0 && t < 1.0) {
            best = std::min(best, dist_at(t));
        }
    }
    return best;
}

double ref_f2(const std::vector<P3>& p, const Scenario& s) {
    if (s.obstacles.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t j = 1; j < p.size(); ++j) {
        for (const auto& o : s.obstacles) {
            const double d = ref_seg_dist(o.center_x, o.center_y, p[j - 1], p[j]);
            const double inner = s.drone_size + o.radius;
            if (d <= inner) {
                return INFINITY;
            }
            const double outer = inner + s.safe_distance;
            sum += d >= outer ? 0.0 : (outer - d) / s.safe_distance;
        }
    }
    return sum / double(s.obstacles.size()) / double(p.size() - 1);
}

double ref_f3(const std::vector<P3>& p, const Scenario& s) {
    const TerrainGrid& g = *s.terrain;
    double sum = 0.0;
    for (const P3& w : p) {
        // Locate the enclosing cell and interpolate by hand.
        const double fx = (w[0] - g.node_x(0)) / g.cellsize();
        const double fy = (g.node_y(0) - w[1]) / g.cellsize();
        if (fx < 0 || fy < 0 || fx > double(g.ncols() - 1) || fy > double(g.nrows() - 1)) {
            return INFINITY;
        }
        const std::size_t c = std::min<std::size_t>(std::size_t(fx), g.ncols() - 2);
        const std::size_t r = std::min<std::size_t>(std::size_t(fy), g.nrows() - 2);
        const double u = fx - double(c);
        const double v = fy - double(r);
        const double ground = g.at(c, r) * (1 - u) * (1 - v) + g.at(c + 1, r) * u * (1 - v) +
                              g.at(c, r + 1) * (1 - u) * v + g.at(c + 1, r + 1) * u * v;
        const double h = w[2] - ground;
        if (h < s.h_min || h > s.h_max) {
            return INFINITY;
        }
        sum += std::abs(h - 0.5 * (s.h_min + s.h_max)) / (0.5 * (s.h_max - s.h_min));
    }
    return sum / double(p.size());
}

double ref_f4(const std::vector<P3>& p) {
    double sum = 0.0;
    for (std::size_t j = 1; j + 1 < p.size(); ++j) {
        P3 a{}, b{};
        for (int k = 0; k < 3; ++k) {
            a[k] = p[j][k] - p[j - 1][k];
            b[k] = p[j + 1][k] - p[j][k];
        }
        const double cx = a[1] * b[2] - a[2] * b[1];
        const double cy = a[2] * b[0] - a[0] * b[2];
        const double cz = a[0] * b[1] - a[1] * b[0];
        const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        sum += std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot) / kPi;
    }
    return sum / double(p.size() - 2);
}

CartesianPath to_path(const std::vector<P3>& p) {
    CartesianPath out;
    for (const P3& w : p) {
        out.waypoints.emplace_back(w[0], w[1], w[2]);
    }
    return out;
}

bool same(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) {
        return a == b;
    }
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

}  // namespace

TEST_CASE("path length cost") {
    const CartesianPath bent{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0)}};
    const double expected = ref_f1({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, 0.1);
    CHECK(expected == doctest::Approx(1.0 - std::sqrt(2.0) / 2.0));
    CHECK(path_length_cost(bent, 0.1) == doctest::Approx(expected).epsilon(1e-12));

    const CartesianPath straight{{Vec3(0, 0, 0), Vec3(3, 4, 0), Vec3(6, 8, 0)}};
    CHECK(std::abs(path_length_cost(straight, 1.0)) < 1e-15);

    const CartesianPath short_seg{{Vec3(0, 0, 0), Vec3(0.5, 0, 0), Vec3(5, 0, 0)}};
    CHECK(std::isinf(path_length_cost(short_seg, 1.0)));
}

TEST_CASE("collision cost") {
    Scenario s = test::flat_scenario();
    s.obstacles = {{0.0, 0.0, 1.0}};
    s.drone_size = 0.5;
    s.safe_distance = 2.0;

    SUBCASE("no obstacles") {
        Scenario t = s;
        t.obstacles.clear();
        CHECK(collision_cost(CartesianPath{{Vec3(-5, 0, 0), Vec3(5, 0, 0)}}, t) == 0.0);
    }
    SUBCASE("half-way through the safety margin on one of two segments") {
        // Distance 2.5 from the centre equals size + radius + margin / 2.
        const std::vector<P3> pts{{-5, 2.5, 0}, {5, 2.5, 0}, {5, 10, 0}};
        const double expected = ref_f2(pts, s);
        CHECK(expected == doctest::Approx(0.25));
        CHECK(collision_cost(to_path(pts), s) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("segment crossing the obstacle") {
        CHECK(std::isinf(collision_cost(CartesianPath{{Vec3(-5, 0, 0), Vec3(5, 0.2, 0)}}, s)));
    }
    SUBCASE("touching the collision radius is infeasible") {
        CHECK(std::isinf(collision_cost(CartesianPath{{Vec3(-5, 1.5, 0), Vec3(5, 1.5, 0)}}, s)));
    }
    SUBCASE("distance grows monotonically reduces the cost") {
        double previous = INFINITY;
        for (double d = 1.6; d < 5.0; d += 0.1) {
            const double c = collision_cost(CartesianPath{{Vec3(-5, d, 0), Vec3(5, d, 0)}}, s);
            CHECK(c <= previous);
            previous = c;
        }
        CHECK(previous == 0.0);
    }
}

TEST_CASE("altitude cost") {
    Scenario s = test::flat_scenario();
    s.h_min = 10.0;
    s.h_max = 30.0;
    std::vector<P3> pts{{20, 20, 20}, {40, 20, 20}, {60, 20, 30}, {80, 20, 20}, {100, 20, 20}};
    const double expected = ref_f3(pts, s);
    CHECK(expected == doctest::Approx(0.2));
    CHECK(altitude_cost(to_path(pts), s) == doctest::Approx(expected).epsilon(1e-12));

    pts[2][2] = 31.0;
    CHECK(std::isinf(altitude_cost(to_path(pts), s)));
    pts[2] = {-50, 20, 20};
    CHECK(std::isinf(altitude_cost(to_path(pts), s)));
}

TEST_CASE("smoothness cost and turning angle") {
    const std::vector<P3> right{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
    CHECK(ref_f4(right) == doctest::Approx(0.5));
    CHECK(smoothness_cost(to_path(right)) == doctest::Approx(0.5).epsilon(1e-12));

    const std::vector<P3> mixed{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {2, 1, 0}};
    CHECK(ref_f4(mixed) == doctest::Approx(0.25));
    CHECK(smoothness_cost(to_path(mixed)) == doctest::Approx(0.25).epsilon(1e-12));

    CHECK(turning_angle(Vec3(1, 0, 0), Vec3(2, 0, 0)) == 0.0);
    CHECK(turning_angle(Vec3(1, 0, 0), Vec3(0, 3, 0)) == doctest::Approx(kPi / 2));
    CHECK(turning_angle(Vec3(1, 0, 0), Vec3(-1, 0, 0)) == doctest::Approx(kPi));
    CHECK_THROWS_AS((void)turning_angle(Vec3(0, 0, 0), Vec3(1, 0, 0)), std::invalid_argument);
}

TEST_CASE("weighted sum") {
    CHECK(weighted_sum(ObjectiveVector{{0.1, 0.2, 0.3, 0.4}}, WeightVector{}) == doctest::Approx(1.0));
    CHECK(std::isinf(weighted_sum(ObjectiveVector{{0.1, INFINITY, 0.3, 0.4}}, WeightVector{})));
    CHECK_THROWS((WeightVector{{0, 0, 0, 0}}).validate());
    CHECK_THROWS((WeightVector{{1, -1, 0, 0}}).validate());
}

TEST_CASE("evaluate_all on a hand-built four-waypoint path") {
    Scenario s = test::flat_scenario();
    s.obstacles = {{100.0, 55.0, 10.0}};
    const std::vector<P3> pts{{20, 20, 20}, {60, 40, 25}, {120, 40, 15}, {180, 80, 20}};
    const auto v = evaluate_all(to_path(pts), s);
    CHECK(v.feasible());
    CHECK(same(v[0], ref_f1(pts, s.r_min)));
    CHECK(same(v[1], ref_f2(pts, s)));
    CHECK(same(v[2], ref_f3(pts, s)));
    CHECK(same(v[3], ref_f4(pts)));
    CHECK(v[1] > 0.0);
}

TEST_CASE("random paths: bounds, invariances and agreement with the reference") {
    Scenario s = test::flat_scenario();
    // Gentle slope so the terrain term is not trivially flat.
    std::vector<double> elev;
    for (std::size_t r = 0; r < 21; ++r) {
        for (std::size_t c = 0; c < 21; ++c) {
            elev.push_back(0.3 * double(c) + 0.1 * double(r * r % 7));
        }
    }
    s.terrain = std::make_shared<const TerrainGrid>(21, 21, -5.0, -5.0, 10.0, elev);
    s.obstacles = {{60, 70, 12}, {130, 120, 20}, {150, 40, 8}};

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> xy(0.0, 200.0);
    std::uniform_real_distribution<double> z(0.0, 50.0);
    std::uniform_real_distribution<double> z_band(18.0, 30.0);
    std::uniform_int_distribution<int> count(3, 12);
    int feasible = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<P3> pts(static_cast<std::size_t>(count(rng)));
        // Half of the paths stay inside the altitude band so feasible cases are common.
        const bool in_band = trial % 2 == 0;
        for (auto& p : pts) {
            p = {xy(rng), xy(rng), in_band ? z_band(rng) : z(rng)};
        }
        const CartesianPath path = to_path(pts);
        const auto v = evaluate_all(path, s);
        REQUIRE(same(v[0], ref_f1(pts, s.r_min)));
        REQUIRE(same(v[1], ref_f2(pts, s)));
        REQUIRE(same(v[2], ref_f3(pts, s)));
        REQUIRE(same(v[3], ref_f4(pts)));
        for (double f : v.values) {
            if (std::isfinite(f)) {
                CHECK(f >= 0.0);
                CHECK(f <= 1.0);
            }
        }
        feasible += v.feasible() ? 1 : 0;

        // Rigid motion leaves length cost unchanged; scaling leaves smoothness unchanged.
        const double ang = 0.37 * trial;
        const Eigen::Matrix3d rot =
            Eigen::AngleAxisd(ang, Vec3(0.3, -0.5, 0.8).normalized()).toRotationMatrix();
        CartesianPath moved;
        CartesianPath scaled;
        for (const auto& w : path.waypoints) {
            moved.waypoints.push_back(rot * w + Vec3(11.0, -4.0, 2.5));
            scaled.waypoints.push_back(3.7 * w);
        }
        const double f1 = path_length_cost(path, 0.0);
        CHECK(path_length_cost(moved, 0.0) == doctest::Approx(f1).epsilon(1e-12).scale(1.0));
        CHECK(smoothness_cost(scaled) == doctest::Approx(v[3]).epsilon(1e-12).scale(1.0));
    }
    MESSAGE("feasible random paths: " << feasible);
}
