#include "nmopso/engine.hpp"

#include "nmopso/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

namespace nmopso {

void SwarmConfig::validate() const {
    if (population < 2) {
        throw ValidationError("population must be at least 2");
    }
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) {
        throw ValidationError("mutation_prob must lie in [0, 1]");
    }
    if (!(v_max_fraction > 0.0 && v_max_fraction <= 1.0)) {
        throw ValidationError("v_max_fraction must lie in (0, 1]");
    }
    if (grid_divisions < 2) {
        throw ValidationError("grid divisions must be at least 2");
    }
    if (!(kappa >= 0.0)) {
        throw ValidationError("kappa must be non-negative");
    }
    if (delta && !(*delta > 0.0)) {
        throw ValidationError("delta must be positive");
    }
    if (archive_capacity < 1) {
        throw ValidationError("archive capacity must be at least 1");
    }
    if (!std::isfinite(inertia) || !std::isfinite(inertia_damping) || !std::isfinite(c1) ||
        !std::isfinite(c2)) {
        throw ValidationError("swarm coefficients must be finite");
    }
}

Encoding Encoding::navigation(const Scenario& scenario) {
    Encoding e(Kind::navigation, scenario.start, scenario.goal);
    const NavBounds b = nav_bounds(scenario);
    for (std::size_t j = 0; j < scenario.n_nodes; ++j) {
        e.lower_.insert(e.lower_.end(), {b.r_min, -b.theta_max, -b.psi_max});
        e.upper_.insert(e.upper_.end(), {b.r_max, b.theta_max, b.psi_max});
    }
    return e;
}

Encoding Encoding::cartesian(const Scenario& scenario) {
    Encoding e(Kind::cartesian, scenario.start, scenario.goal);
    const auto& t = *scenario.terrain;
    const double z_lo = t.min_elevation() + scenario.h_min;
    const double z_hi = t.max_elevation() + scenario.h_max;
    for (std::size_t j = 0; j < scenario.n_nodes; ++j) {
        e.lower_.insert(e.lower_.end(), {t.min_x(), t.min_y(), z_lo});
        e.upper_.insert(e.upper_.end(), {t.max_x(), t.max_y(), z_hi});
    }
    return e;
}

CartesianPath Encoding::decode(std::span<const double> position) const {
    if (kind_ == Kind::navigation) {
        return nmopso::decode(NavPath::unflatten(position), start_, goal_);
    }
    CartesianPath path;
    path.waypoints.reserve(position.size() / 3 + 2);
    path.waypoints.push_back(start_);
    for (std::size_t i = 0; i + 2 < position.size(); i += 3) {
        path.waypoints.emplace_back(position[i], position[i + 1], position[i + 2]);
    }
    path.waypoints.push_back(goal_);
    return path;
}

std::vector<double> Encoding::sample(Rng& rng) const {
    std::vector<double> x(dimension());
    for (std::size_t d = 0; d < x.size(); ++d) {
        x[d] = std::uniform_real_distribution<double>(lower_[d], upper_[d])(rng);
    }
    return x;
}

double mutation_gain(std::size_t occupied_cells, double delta) {
    return std::tanh(delta / static_cast<double>(occupied_cells));
}

std::size_t mutate(std::vector<double>& position, std::span<const double> pbest, double gain,
                   std::span<const double> lower, std::span<const double> upper, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, position.size() - 1);
    const std::size_t j = pick(rng);
    const double noise = std::normal_distribution<double>(0.0, 1.0)(rng);
    position[j] = std::clamp(position[j] + noise * gain * pbest[j], lower[j], upper[j]);
    return j;
}

Preference prefer(const ObjectiveVector& incoming, const ObjectiveVector& current) {
    const auto in_bad = incoming.infeasible_count();
    const auto cur_bad = current.infeasible_count();
    if (in_bad != cur_bad) {
        return in_bad < cur_bad ? Preference::replace : Preference::keep;
    }
    if (dominates(incoming, current)) {
        return Preference::replace;
    }
    if (dominates(current, incoming)) {
        return Preference::keep;
    }
    return Preference::tie;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) {
        threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) {
                fn(i);
            }
        });
    }
}

Engine::Engine(Scenario scenario, SwarmConfig config)
    : scenario_(std::move(scenario)),
      config_(config),
      encoding_((scenario_.validate(), config_.validate(), Encoding::for_config(scenario_, config_))),
      coordinator_(derive_seed(config_.seed, 0)),
      archive_(config_.archive_capacity, config_.grid_divisions, config_.kappa),
      delta_(config_.delta),
      inertia_(config_.inertia) {
    for (std::size_t d = 0; d < encoding_.dimension(); ++d) {
        v_max_.push_back(config_.v_max_fraction * (encoding_.upper()[d] - encoding_.lower()[d]));
    }
    streams_.reserve(config_.population);
    for (std::size_t i = 0; i < config_.population; ++i) {
        streams_.emplace_back(derive_seed(config_.seed, i + 1));
    }
}

ObjectiveVector Engine::evaluate(std::span<const double> position) const {
    return evaluate_all(encoding_.decode(position), scenario_);
}

void Engine::initialize() {
    particles_.assign(config_.population, Particle{});
    parallel_for(config_.population, config_.threads, [this](std::size_t i) {
        Particle& p = particles_[i];
        p.position = encoding_.sample(streams_[i]);
        p.velocity.assign(p.position.size(), 0.0);
        p.objectives = evaluate(p.position);
        p.best_position = p.position;
        p.best_objectives = p.objectives;
    });

    std::vector<ArchiveEntry> seeds;
    for (const auto& p : particles_) {
        if (p.objectives.feasible()) {
            seeds.push_back({p.position, p.objectives});
        }
    }
    archive_.update(std::move(seeds), coordinator_);
    warnings_.clear();
    if (archive_.empty()) {
        warnings_.push_back("no feasible particle after initialisation; leaders fall back to personal bests");
    }
    if (!delta_ && !archive_.empty()) {
        delta_ = static_cast<double>(archive_.occupied_cells());
    }
    iteration_ = 0;
    mutation_count_ = 0;
    inertia_ = config_.inertia;
    initialized_ = true;
}

void Engine::step() {
    if (!initialized_) {
        initialize();
    }
    const std::size_t n = particles_.size();
    const auto& lower = encoding_.lower();
    const auto& upper = encoding_.upper();

    // Frozen inputs for the parallel phase.
    std::vector<std::vector<double>> pbest_snapshot;
    if (archive_.empty()) {
        pbest_snapshot.reserve(n);
        for (const auto& p : particles_) {
            pbest_snapshot.push_back(p.best_position);
        }
    }
    const bool mutation_on = !config_.disable_mutation && delta_.has_value();
    const double gain =
        mutation_on ? mutation_gain(std::max<std::size_t>(1, archive_.occupied_cells()), *delta_)
                    : 0.0;
    const double w = inertia_;

    std::vector<std::vector<ArchiveEntry>> produced(n);
    std::vector<std::size_t> mutations(n, 0);

    parallel_for(n, config_.threads, [&](std::size_t i) {
        Particle& p = particles_[i];
        Rng& rng = streams_[i];

        const std::vector<double>* leader = nullptr;
        if (!archive_.empty()) {
            leader = &archive_.select_leader(rng).position;
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            leader = &pbest_snapshot[pick(rng)];
        }

        for (std::size_t d = 0; d < p.position.size(); ++d) {
            const double r1 = uniform01(rng);
            const double r2 = uniform01(rng);
            double v = velocity_component(p.velocity[d], p.position[d], p.best_position[d],
                                          (*leader)[d], w, config_.c1, config_.c2, r1, r2);
            v = std::clamp(v, -v_max_[d], v_max_[d]);
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
        if (p.objectives.feasible()) {
            produced[i].push_back({p.position, p.objectives});
        }

        const Preference pref = prefer(p.objectives, p.best_objectives);
        if (pref == Preference::replace || (pref == Preference::tie && uniform01(rng) < 0.5)) {
            p.best_position = p.position;
            p.best_objectives = p.objectives;
        }

        // Perturbs where the particle moves from next; evaluated after that move.
        if (mutation_on && uniform01(rng) < config_.mutation_prob) {
            mutate(p.position, p.best_position, gain, lower, upper, rng);
            ++mutations[i];
        }
    });

    std::vector<ArchiveEntry> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        mutation_count_ += mutations[i];
        for (auto& e : produced[i]) {
            candidates.push_back(std::move(e));
        }
    }
    archive_.update(std::move(candidates), coordinator_);
    if (!delta_ && !archive_.empty()) {
        delta_ = static_cast<double>(archive_.occupied_cells());
    }
    inertia_ *= config_.inertia_damping;
    ++iteration_;
}

RunResult Engine::result() const {
    RunResult r;
    r.iterations_run = iteration_;
    r.rng_seed = config_.seed;
    r.mutation_count = mutation_count_;
    r.warnings = warnings_;
    for (const auto& e : archive_.entries()) {
        r.pareto_front.push_back({e.position, encoding_.decode(e.position), e.objectives});
    }
    return r;
}

RunResult Engine::run(const std::function<void(const Engine&)>& observer) {
    const auto t0 = std::chrono::steady_clock::now();
    initialize();
    if (observer) {
        observer(*this);
    }
    for (std::size_t t = 0; t < config_.max_iterations; ++t) {
        step();
        if (observer) {
            observer(*this);
        }
    }
    RunResult r = result();
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

RunResult run_nmopso(const Scenario& scenario, const SwarmConfig& config) {
    Engine engine(scenario, config);
    return engine.run();
}

}  // namespace nmopso
