#include "nmopso/archive.hpp"

#include "nmopso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nmopso {

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    bool strictly_better = false;
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        if (a[i] > b[i]) {
            return false;
        }
        strictly_better = strictly_better || a[i] < b[i];
    }
    return strictly_better;
}

std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
            dominated = j != i && dominates(points[j], points[i]);
        }
        if (!dominated) {
            keep.push_back(i);
        }
    }
    return keep;
}

Hypergrid rebuild_grid(std::span<const ObjectiveVector> points, int divisions, double kappa) {
    if (points.empty()) {
        throw std::invalid_argument("rebuild_grid needs at least one point");
    }
    if (divisions < 2) {
        throw ValidationError("grid divisions must be at least 2");
    }
    Hypergrid g;
    g.divisions = divisions;
    g.kappa = kappa;
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        double lo = points.front()[i];
        double hi = lo;
        for (const auto& p : points) {
            lo = std::min(lo, p[i]);
            hi = std::max(hi, p[i]);
        }
        g.pad[i] = (hi - lo) / (2.0 * (divisions - 1));
        g.lower[i] = lo - g.pad[i];
        g.upper[i] = hi + g.pad[i];
    }
    return g;
}

CellCoord cell_coord(const Hypergrid& grid, const ObjectiveVector& v) {
    CellCoord c{};
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        const double span = grid.upper[i] - grid.lower[i];
        if (span <= 0.0) {
            c[i] = 0;
            continue;
        }
        // std::round rounds halfway cases away from zero.
        const double scaled = grid.divisions * (v[i] - grid.lower[i]) / span;
        c[i] = static_cast<int>(std::round(scaled));
    }
    return c;
}

double crowd_measure(std::size_t count, double kappa) {
    return std::exp(-kappa * static_cast<double>(count));
}

std::size_t count_occupied_cells(std::span<const ObjectiveVector> points, int divisions) {
    if (points.empty()) {
        return 0;
    }
    const Hypergrid grid = rebuild_grid(points, divisions);
    std::vector<CellCoord> cells;
    cells.reserve(points.size());
    for (const auto& p : points) {
        cells.push_back(cell_coord(grid, p));
    }
    std::sort(cells.begin(), cells.end());
    return static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

Archive::Archive(std::size_t capacity, int divisions, double kappa)
    : capacity_(capacity), divisions_(divisions), kappa_(kappa) {
    if (capacity_ < 1) {
        throw ValidationError("archive capacity must be at least 1");
    }
    if (divisions_ < 2) {
        throw ValidationError("grid divisions must be at least 2");
    }
    if (!(kappa_ >= 0.0)) {
        throw ValidationError("kappa must be non-negative");
    }
    grid_.divisions = divisions_;
    grid_.kappa = kappa_;
}

void Archive::reindex() {
    cells_.clear();
    members_.clear();
    if (entries_.empty()) {
        grid_ = Hypergrid{};
        grid_.divisions = divisions_;
        grid_.kappa = kappa_;
        return;
    }
    std::vector<ObjectiveVector> objs;
    objs.reserve(entries_.size());
    for (const auto& e : entries_) {
        objs.push_back(e.objectives);
    }
    grid_ = rebuild_grid(objs, divisions_, kappa_);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        cells_.push_back(cell_coord(grid_, entries_[i].objectives));
        members_[cells_.back()].push_back(i);
    }
}

std::vector<double> Archive::selection_probabilities() const {
    std::vector<double> p;
    p.reserve(members_.size());
    double total = 0.0;
    for (const auto& [cell, idx] : members_) {
        p.push_back(crowd_measure(idx.size(), kappa_));
        total += p.back();
    }
    for (double& v : p) {
        v /= total;
    }
    return p;
}

const ArchiveEntry& Archive::select_leader(Rng& rng) const {
    if (entries_.empty()) {
        throw std::logic_error("cannot select a leader from an empty archive");
    }
    const auto probs = selection_probabilities();
    const double u = uniform01(rng);
    double acc = 0.0;
    auto it = members_.begin();
    for (std::size_t k = 0; k < probs.size(); ++k, ++it) {
        acc += probs[k];
        if (u < acc || k + 1 == probs.size()) {
            break;
        }
    }
    const auto& idx = it->second;
    std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
    return entries_[idx[pick(rng)]];
}

void Archive::update(std::vector<ArchiveEntry> candidates, Rng& rng) {
    std::vector<ArchiveEntry> pool = std::move(entries_);
    for (auto& c : candidates) {
        if (c.objectives.feasible()) {
            pool.push_back(std::move(c));
        }
    }

    std::vector<ObjectiveVector> objs;
    objs.reserve(pool.size());
    for (const auto& e : pool) {
        objs.push_back(e.objectives);
    }
    entries_.clear();
    for (std::size_t i : nondominated_indices(objs)) {
        entries_.push_back(std::move(pool[i]));
    }

    if (entries_.size() > capacity_) {
        reindex();
        // Cell counts are decremented in place; the grid is only rebuilt afterwards.
        std::vector<std::pair<CellCoord, std::vector<std::size_t>>> cells(members_.begin(),
                                                                          members_.end());
        std::vector<bool> removed(entries_.size(), false);
        std::size_t excess = entries_.size() - capacity_;
        while (excess > 0) {
            std::size_t max_count = 0;
            for (const auto& [_, idx] : cells) {
                max_count = std::max(max_count, idx.size());
            }
            // exp(+kappa * N) rescaled by the largest count to stay finite.
            std::vector<double> weights;
            weights.reserve(cells.size());
            double total = 0.0;
            for (const auto& [_, idx] : cells) {
                const double w = idx.empty() ? 0.0
                                             : std::exp(kappa_ * (static_cast<double>(idx.size()) -
                                                                  static_cast<double>(max_count)));
                weights.push_back(w);
                total += w;
            }
            const double u = uniform01(rng) * total;
            double acc = 0.0;
            std::size_t chosen = 0;
            for (std::size_t k = 0; k < weights.size(); ++k) {
                if (weights[k] == 0.0) {
                    continue;
                }
                chosen = k;
                acc += weights[k];
                if (u < acc) {
                    break;
                }
            }
            auto& idx = cells[chosen].second;
            std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
            const std::size_t slot = pick(rng);
            removed[idx[slot]] = true;
            idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(slot));
            --excess;
        }
        std::vector<ArchiveEntry> kept;
        kept.reserve(capacity_);
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (!removed[i]) {
                kept.push_back(std::move(entries_[i]));
            }
        }
        entries_ = std::move(kept);
    }
    reindex();
}

}  // namespace nmopso
