#pragma once

#include "nmopso/archive.hpp"
#include "nmopso/navdecode.hpp"
#include "nmopso/objectives.hpp"
#include "nmopso/rng.hpp"
#include "nmopso/scenario.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nmopso {

struct SwarmConfig {
    std::size_t population = 50;
    std::size_t max_iterations = 200;
    double inertia = 1.0;
    double inertia_damping = 0.98;
    double c1 = 1.5;
    double c2 = 1.5;
    int grid_divisions = 7;
    double kappa = 2.0;
    /// Mutation coefficient; when unset it becomes the number of cells occupied
    /// by the first non-empty archive.
    std::optional<double> delta;
    double mutation_prob = 0.1;
    double v_max_fraction = 0.5;
    std::size_t archive_capacity = 100;
    std::uint64_t seed = 42;
    bool disable_mutation = false;
    /// Ablation: search raw waypoint coordinates instead of navigation variables.
    bool cartesian_encoding = false;
    /// Evaluation threads, 0 = hardware concurrency. Results do not depend on it.
    std::size_t threads = 1;

    void validate() const;
};

/// Decision-vector layout, box bounds and decoding for one scenario.
class Encoding {
public:
    enum class Kind { navigation, cartesian };

    static Encoding navigation(const Scenario& scenario);
    static Encoding cartesian(const Scenario& scenario);
    static Encoding for_config(const Scenario& scenario, const SwarmConfig& config) {
        return config.cartesian_encoding ? cartesian(scenario) : navigation(scenario);
    }

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] std::size_t dimension() const { return lower_.size(); }
    [[nodiscard]] const std::vector<double>& lower() const { return lower_; }
    [[nodiscard]] const std::vector<double>& upper() const { return upper_; }

    [[nodiscard]] CartesianPath decode(std::span<const double> position) const;
    [[nodiscard]] std::vector<double> sample(Rng& rng) const;

private:
    Encoding(Kind kind, Vec3 start, Vec3 goal) : kind_(kind), start_(std::move(start)), goal_(std::move(goal)) {}

    Kind kind_;
    Vec3 start_;
    Vec3 goal_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    /// Objectives of the last evaluated position; a mutation after evaluation
    /// moves `position` without re-scoring it.
    ObjectiveVector objectives;
    std::vector<double> best_position;
    ObjectiveVector best_objectives;
};

/// One member of the final front with its decoded path.
struct FrontMember {
    std::vector<double> position;
    CartesianPath path;
    ObjectiveVector objectives;
};

struct RunResult {
    std::vector<FrontMember> pareto_front;
    std::size_t iterations_run = 0;
    double wall_time = 0.0;
    std::uint64_t rng_seed = 0;
    std::size_t mutation_count = 0;
    std::vector<std::string> warnings;
};

/// v' = w v + c1 r1 (pbest - x) + c2 r2 (lbest - x) for one dimension.
[[nodiscard]] inline double velocity_component(double v, double x, double pbest, double lbest,
                                               double w, double c1, double c2, double r1,
                                               double r2) {
    return w * v + c1 * r1 * (pbest - x) + c2 * r2 * (lbest - x);
}

/// tanh(delta / occupied_cells).
[[nodiscard]] double mutation_gain(std::size_t occupied_cells, double delta);

/**
 * Perturbs one uniformly chosen dimension j by N(0,1) * gain * pbest[j] and
 * clamps it to [lower[j], upper[j]]. Returns j.
 */
std::size_t mutate(std::vector<double>& position, std::span<const double> pbest, double gain,
                   std::span<const double> lower, std::span<const double> upper, Rng& rng);

enum class Preference { replace, keep, tie };

/**
 * Replacement rule for personal bests and mutants. Fewer infinite objectives
 * wins outright; otherwise Pareto dominance decides and incomparable pairs tie.
 */
[[nodiscard]] Preference prefer(const ObjectiveVector& incoming, const ObjectiveVector& current);

/// Runs fn(i) for i in [0, n) on up to `threads` threads (0 = hardware concurrency).
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

/**
 * Navigation-variable MOPSO. Each particle owns a random stream derived from
 * the master seed, and all shared state (archive, grid, inertia) changes
 * only between evaluation phases, so results do not depend on thread count.
 */
class Engine {
public:
    Engine(Scenario scenario, SwarmConfig config);

    /// Samples the swarm, evaluates it and seeds the archive.
    void initialize();
    /// One iteration of move, evaluate, personal-best update, mutation and archive update.
    void step();
    /// initialize() followed by max_iterations step() calls.
    RunResult run(const std::function<void(const Engine&)>& observer = {});

    [[nodiscard]] const Scenario& scenario() const { return scenario_; }
    [[nodiscard]] const SwarmConfig& config() const { return config_; }
    [[nodiscard]] const Encoding& encoding() const { return encoding_; }
    [[nodiscard]] const std::vector<Particle>& particles() const { return particles_; }
    [[nodiscard]] const Archive& archive() const { return archive_; }
    [[nodiscard]] std::size_t iteration() const { return iteration_; }
    [[nodiscard]] double inertia() const { return inertia_; }
    [[nodiscard]] std::optional<double> delta() const { return delta_; }
    [[nodiscard]] std::size_t mutation_count() const { return mutation_count_; }
    /// Non-fatal conditions met during the run, e.g. an empty initial archive.
    [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }

    [[nodiscard]] RunResult result() const;

private:
    ObjectiveVector evaluate(std::span<const double> position) const;

    Scenario scenario_;
    SwarmConfig config_;
    Encoding encoding_;
    std::vector<double> v_max_;
    std::vector<Particle> particles_;
    std::vector<Rng> streams_;
    Rng coordinator_;
    Archive archive_;
    std::optional<double> delta_;
    double inertia_;
    std::size_t iteration_ = 0;
    std::size_t mutation_count_ = 0;
    std::vector<std::string> warnings_;
    bool initialized_ = false;
};

[[nodiscard]] RunResult run_nmopso(const Scenario& scenario, const SwarmConfig& config);

struct WeightedPsoResult {
    std::vector<double> position;
    CartesianPath path;
    ObjectiveVector objectives;
    double cost = kInfeasible;
    /// Global-best weighted cost after initialisation and after each iteration.
    std::vector<double> history;
    std::size_t iterations_run = 0;
    double wall_time = 0.0;
};

/**
 * Single-objective global-best PSO on the weighted sum of the four
 * objectives, over the same encoding and swarm settings. Infeasible
 * particles are ranked by how many objectives are infinite, then by the
 * weighted sum of the finite ones.
 */
[[nodiscard]] WeightedPsoResult run_weighted_pso(const Scenario& scenario,
                                                 const SwarmConfig& config,
                                                 const WeightVector& weights);

}  // namespace nmopso
