#include "nmopso/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace nmopso {

namespace {

/// Lexicographic key: (number of infinite objectives, weighted sum of the finite ones).
struct Rank {
    std::size_t infeasible = 0;
    double cost = 0.0;

    friend bool operator<(const Rank& a, const Rank& b) {
        return a.infeasible != b.infeasible ? a.infeasible < b.infeasible : a.cost < b.cost;
    }
};

Rank rank_of(const ObjectiveVector& v, const WeightVector& w) {
    Rank r;
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        if (std::isfinite(v[i])) {
            r.cost += w.values[i] * v[i];
        } else {
            ++r.infeasible;
        }
    }
    return r;
}

struct PsoParticle {
    std::vector<double> position;
    std::vector<double> velocity;
    ObjectiveVector objectives;
    Rank rank;
    std::vector<double> best_position;
    ObjectiveVector best_objectives;
    Rank best_rank;
};

}  // namespace

WeightedPsoResult run_weighted_pso(const Scenario& scenario, const SwarmConfig& config,
                                   const WeightVector& weights) {
    const auto t0 = std::chrono::steady_clock::now();
    scenario.validate();
    config.validate();
    weights.validate();

    const Encoding encoding = Encoding::for_config(scenario, config);
    const auto& lower = encoding.lower();
    const auto& upper = encoding.upper();
    std::vector<double> v_max;
    for (std::size_t d = 0; d < encoding.dimension(); ++d) {
        v_max.push_back(config.v_max_fraction * (upper[d] - lower[d]));
    }

    const std::size_t n = config.population;
    std::vector<Rng> streams;
    for (std::size_t i = 0; i < n; ++i) {
        streams.emplace_back(derive_seed(config.seed, i + 1));
    }
    const auto evaluate = [&](std::span<const double> x) {
        return evaluate_all(encoding.decode(x), scenario);
    };

    std::vector<PsoParticle> swarm(n);
    parallel_for(n, config.threads, [&](std::size_t i) {
        auto& p = swarm[i];
        p.position = encoding.sample(streams[i]);
        p.velocity.assign(p.position.size(), 0.0);
        p.objectives = evaluate(p.position);
        p.rank = rank_of(p.objectives, weights);
        p.best_position = p.position;
        p.best_objectives = p.objectives;
        p.best_rank = p.rank;
    });

    std::size_t gbest = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (swarm[i].best_rank < swarm[gbest].best_rank) {
            gbest = i;
        }
    }
    std::vector<double> gbest_position = swarm[gbest].best_position;
    ObjectiveVector gbest_objectives = swarm[gbest].best_objectives;
    Rank gbest_rank = swarm[gbest].best_rank;

    WeightedPsoResult result;
    result.history.push_back(weighted_sum(gbest_objectives, weights));

    double w = config.inertia;
    for (std::size_t t = 0; t < config.max_iterations; ++t) {
        parallel_for(n, config.threads, [&](std::size_t i) {
            auto& p = swarm[i];
            Rng& rng = streams[i];
            for (std::size_t d = 0; d < p.position.size(); ++d) {
                const double r1 = uniform01(rng);
                const double r2 = uniform01(rng);
                double v = velocity_component(p.velocity[d], p.position[d], p.best_position[d],
                                              gbest_position[d], w, config.c1, config.c2, r1, r2);
                v = std::clamp(v, -v_max[d], v_max[d]);
                double x = p.position[d] + v;
                if (x < lower[d]) {
                    x = lower[d];
                    v = 0.0;
                } else if (x > upper[d]) {
                    x = upper[d];
                    v = 0.0;
                }
                p.position[d] = x;
                p.velocity[d] = v;
            }
            p.objectives = evaluate(p.position);
            p.rank = rank_of(p.objectives, weights);
            if (p.rank < p.best_rank) {
                p.best_position = p.position;
                p.best_objectives = p.objectives;
                p.best_rank = p.rank;
            }
        });
        for (const auto& p : swarm) {
            if (p.best_rank < gbest_rank) {
                gbest_rank = p.best_rank;
                gbest_position = p.best_position;
                gbest_objectives = p.best_objectives;
            }
        }
        result.history.push_back(weighted_sum(gbest_objectives, weights));
        w *= config.inertia_damping;
    }

    result.position = gbest_position;
    result.path = encoding.decode(gbest_position);
    result.objectives = gbest_objectives;
    result.cost = weighted_sum(gbest_objectives, weights);
    result.iterations_run = config.max_iterations;
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace nmopso
