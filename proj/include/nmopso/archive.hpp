#pragma once

#include "nmopso/objectives.hpp"
#include "nmopso/rng.hpp"

#include <array>
#include <map>
#include <span>
#include <vector>

namespace nmopso {

/// A stored non-dominated solution: its decision vector and finite objectives.
struct ArchiveEntry {
    std::vector<double> position;
    ObjectiveVector objectives;
};

/// Pareto dominance for minimisation: no worse everywhere, strictly better somewhere.
[[nodiscard]] bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Indices of the members of `points` not dominated by any other member, in input order.
[[nodiscard]] std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points);

using CellCoord = std::array<int, kNumObjectives>;

/// Adaptive grid over objective space, padded by half a division on each side.
struct Hypergrid {
    std::array<double, kNumObjectives> lower{};
    std::array<double, kNumObjectives> upper{};
    std::array<double, kNumObjectives> pad{};
    int divisions = 7;
    double kappa = 2.0;

    friend bool operator==(const Hypergrid&, const Hypergrid&) = default;
};

/// Bounds from the min/max of each objective; requires a non-empty finite set.
[[nodiscard]] Hypergrid rebuild_grid(std::span<const ObjectiveVector> points, int divisions,
                                     double kappa = 2.0);

/// Per-objective cell index in [0, M], rounded half away from zero. Flat dimensions map to 0.
[[nodiscard]] CellCoord cell_coord(const Hypergrid& grid, const ObjectiveVector& v);

/// exp(-kappa * count).
[[nodiscard]] double crowd_measure(std::size_t count, double kappa);

/// Number of distinct cells occupied by `points` on a grid built from those same points.
[[nodiscard]] std::size_t count_occupied_cells(std::span<const ObjectiveVector> points,
                                               int divisions);

/**
 * Bounded repository of mutually non-dominated solutions with a hypergrid
 * used to bias leader selection toward sparse regions and pruning toward
 * crowded ones.
 */
class Archive {
public:
    Archive(std::size_t capacity = 100, int divisions = 7, double kappa = 2.0);

    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] std::size_t capacity() const { return capacity_; }
    [[nodiscard]] const std::vector<ArchiveEntry>& entries() const { return entries_; }
    [[nodiscard]] const Hypergrid& grid() const { return grid_; }
    [[nodiscard]] const std::vector<CellCoord>& cells() const { return cells_; }
    [[nodiscard]] std::size_t occupied_cells() const { return members_.size(); }

    /// Occupied cell -> indices of entries inside it, ordered by cell coordinate.
    [[nodiscard]] const std::map<CellCoord, std::vector<std::size_t>>& cell_members() const {
        return members_;
    }

    /// p_m = gamma_m / sum(gamma) over occupied cells, in cell_members() order.
    [[nodiscard]] std::vector<double> selection_probabilities() const;

    /// Roulette over occupied cells by crowd measure, then a uniform member. Throws on empty.
    [[nodiscard]] const ArchiveEntry& select_leader(Rng& rng) const;

    /**
     * Merges candidates, keeps the non-dominated subset, prunes crowded cells
     * down to capacity and rebuilds the grid. Candidates with an infinite
     * objective are ignored.
     */
    void update(std::vector<ArchiveEntry> candidates, Rng& rng);

private:
    void reindex();

    std::size_t capacity_;
    int divisions_;
    double kappa_;
    std::vector<ArchiveEntry> entries_;
    Hypergrid grid_;
    std::vector<CellCoord> cells_;
    std::map<CellCoord, std::vector<std::size_t>> members_;
};

}  // namespace nmopso
