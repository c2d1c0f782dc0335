#include "nmopso/errors.hpp"
#include "nmopso/metrics.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace nmopso;

namespace {

// Cell index computed longhand from the padded-grid definition.
int ref_cell(double f, double lo, double hi, int m) {
    if (hi == lo) {
        return 0;
    }
    const double eps = (hi - lo) / (2.0 * (m - 1));
    const double gl = lo - eps;
    const double gu = hi + eps;
    const double x = m * (f - gl) / (gu - gl);
    // x - floor(x) is exact, unlike floor(x + 0.5) just below a half.
    const double whole = std::floor(x);
    return static_cast<int>(x - whole >= 0.5 ? whole + 1.0 : whole);
}

double ref_sd(const std::vector<ObjectiveVector>& front, int m) {
    std::set<std::array<int, 4>> cells;
    for (const auto& v : front) {
        std::array<int, 4> c{};
        for (std::size_t i = 0; i < 4; ++i) {
            double lo = front[0][i];
            double hi = front[0][i];
            for (const auto& w : front) {
                lo = std::min(lo, w[i]);
                hi = std::max(hi, w[i]);
            }
            c[i] = ref_cell(v[i], lo, hi, m);
        }
        cells.insert(c);
    }
    return double(front.size()) / double(cells.size());
}

RunResult sample_result() {
    RunResult r;
    const std::vector<ObjectiveVector> objs{
        {{0.3, 0.1, 0.2, 0.05}}, {{0.1, 0.4, 0.2, 0.05}}, {{0.1, 0.2, 0.6, 1.0 / 3.0}}};
    for (std::size_t k = 0; k < objs.size(); ++k) {
        FrontMember m;
        m.position = {double(k), 1.0};
        m.path.waypoints = {Vec3(0, 0, 0), Vec3(1.0 / 7.0, 2, 3 + double(k)), Vec3(10, 10, 10)};
        m.objectives = objs[k];
        r.pareto_front.push_back(m);
    }
    return r;
}

bool near(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

}  // namespace

TEST_CASE("front_stats examples") {
    SUBCASE("singleton") {
        const std::vector<ObjectiveVector> f{{{0.1, 0.2, 0.3, 0.4}}};
        const auto s = front_stats(f, 7);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(s.objectives[i].max == f[0][i]);
            CHECK(s.objectives[i].min == f[0][i]);
            CHECK(s.objectives[i].mean == doctest::Approx(f[0][i]));
            CHECK(s.objectives[i].std == 0.0);
        }
        CHECK(s.s_d == 1.0);
    }
    SUBCASE("distinct cells") {
        const std::vector<ObjectiveVector> f{{{0, 1, 0, 0}}, {{1, 0, 0, 0}}, {{0.5, 0.5, 0, 0}}};
        CHECK(ref_sd(f, 7) == 1.0);
        CHECK(front_stats(f, 7).s_d == 1.0);
    }
    SUBCASE("four members in two cells") {
        const std::vector<ObjectiveVector> f{
            {{0, 1, 0.5, 0.5}}, {{1, 0, 0.5, 0.5}}, {{0, 1, 0.5, 0.5}}, {{1, 0, 0.5, 0.5}}};
        CHECK(ref_sd(f, 7) == 2.0);
        const auto s = front_stats(f, 7);
        CHECK(s.s_d == 2.0);
        CHECK(s.front_size == 4);
        CHECK(s.occupied_cells == 2);
    }
    SUBCASE("empty front") {
        CHECK_THROWS_AS((void)front_stats(std::vector<ObjectiveVector>{}, 7), std::invalid_argument);
    }
}

TEST_CASE("front_stats agrees with naive loops on random fronts") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> size(1, 60);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ObjectiveVector> f(static_cast<std::size_t>(size(rng)));
        for (auto& v : f) {
            v = {{u(rng), std::round(10 * u(rng)) / 10, u(rng) * u(rng), 0.25}};
        }
        const auto s = front_stats(f, 7);
        for (std::size_t i = 0; i < 4; ++i) {
            double mx = -INFINITY;
            double mn = INFINITY;
            double sum = 0.0;
            for (const auto& v : f) {
                mx = std::max(mx, v[i]);
                mn = std::min(mn, v[i]);
                sum += v[i];
            }
            const double mean = sum / double(f.size());
            double var = 0.0;
            for (const auto& v : f) {
                var += (v[i] - mean) * (v[i] - mean);
            }
            CHECK(s.objectives[i].max == mx);
            CHECK(s.objectives[i].min == mn);
            CHECK(near(s.objectives[i].mean, mean));
            CHECK(near(s.objectives[i].std, std::sqrt(var / double(f.size()))));
            CHECK(s.objectives[i].min <= s.objectives[i].mean);
            CHECK(s.objectives[i].mean <= s.objectives[i].max);
        }
        CHECK(s.s_d == ref_sd(f, 7));
        CHECK(s.s_d >= 1.0);

        auto shuffled = f;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(front_stats(shuffled, 7).s_d == s.s_d);
    }
}

TEST_CASE("front export") {
    const RunResult r = sample_result();
    const std::string csv = export_front_csv(r);
    std::istringstream lines(csv);
    std::vector<std::string> rows;
    for (std::string line; std::getline(lines, line);) {
        rows.push_back(line);
    }
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "f1,f2,f3,f4");
    // Lexicographic by objectives: (0.1, 0.2, ...) precedes (0.1, 0.4, ...).
    CHECK(rows[1].rfind("0.10000000000000001,0.20000000000000001", 0) == 0);
    CHECK(export_front_csv(r) == csv);

    const auto back = parse_front_csv(csv);
    REQUIRE(back.size() == 3);
    const auto order = export_order(r);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(back[k] == r.pareto_front[order[k]].objectives);
    }

    RunResult reversed = r;
    std::reverse(reversed.pareto_front.begin(), reversed.pareto_front.end());
    CHECK(export_front_csv(reversed) == csv);
    CHECK(export_paths_json(reversed) == export_paths_json(r));
}

TEST_CASE("paths export") {
    const RunResult r = sample_result();
    const auto doc = nlohmann::json::parse(export_paths_json(r));
    REQUIRE(doc.size() == 3);
    const auto order = export_order(r);
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& m = r.pareto_front[order[k]];
        REQUIRE(doc[k]["waypoints"].size() == m.path.size());
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(doc[k]["objectives"][i].get<double>() == m.objectives[i]);
        }
        CHECK(doc[k]["waypoints"][1][0].get<double>() == 1.0 / 7.0);
    }
}

TEST_CASE("stats export") {
    const std::vector<ObjectiveVector> f{{{0.1, 0.2, 0.3, 0.4}}, {{0.3, 0.2, 0.1, 0.4}}};
    const std::string csv = export_stats_csv(front_stats(f, 7));
    std::istringstream lines(csv);
    std::vector<std::string> rows;
    for (std::string line; std::getline(lines, line);) {
        rows.push_back(line);
    }
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == "objective,max,min,mean,std");
    CHECK(rows[1].rfind("f1,0.29999999999999999,0.10000000000000001,", 0) == 0);
    CHECK(rows[5] == "s_d,1");
}

TEST_CASE("number formatting and parsing") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(INFINITY) == "inf");
    CHECK_THROWS_AS((void)parse_front_csv("f1,f2,f3,f4\n0.1,0.2,x,0.4\n"), ParseError);
    CHECK_THROWS_AS((void)parse_front_csv("a,b\n"), ParseError);
}

TEST_CASE("parse_path_text") {
    const auto p = parse_path_text("# start\n0 0 10\n\n5 0 10\n10 0 10  # goal\n");
    REQUIRE(p.size() == 3);
    CHECK(p.waypoints[2] == Vec3(10, 0, 10));
    try {
        (void)parse_path_text("0 0 0\n1 1\n2 2 2\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS((void)parse_path_text("0 0 0\n1 1 1\n"), ParseError);
}
