#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridcover/errors.hpp"

namespace gridcover {

/// Index of one cell, in [0, cells).
using CellIndex = std::uint64_t;

/// Maps a point of [0,1]^d onto its cell. Per-axis segment is
/// min(floor(x_i * k), k-1), so the boundary x_i = 1 lands in the last
/// segment and the map is total on the closed cube. Packing is row-major
/// with coordinate 0 fastest: index = sum_i c_i * k^i. Tests depend on
/// this packing.
CellIndex point_to_cell(std::span<const double> x, std::uint64_t segments);

/// Occupancy record over the cells of one trial: a bit per cell plus a
/// covered-cell counter, so updates are O(1) and a billion-cell grid
/// costs ~125 MB. Single-writer; distinct trials own distinct states.
class CoverageState {
  public:
    explicit CoverageState(std::uint64_t cells);

    /// Marks the cell; returns true when it was previously uncovered.
    bool record_sample(CellIndex cell);

    bool is_covered(CellIndex cell) const;
    bool is_fully_covered() const { return covered_ == cells_; }

    std::uint64_t cells() const { return cells_; }
    std::uint64_t covered_count() const { return covered_; }
    std::uint64_t samples_drawn() const { return samples_; }

    /// Realized Z: cells with no sample so far.
    std::uint64_t uncovered_count() const { return cells_ - covered_; }

  private:
    std::vector<std::uint64_t> bits_;
    std::uint64_t cells_ = 0;
    std::uint64_t covered_ = 0;
    std::uint64_t samples_ = 0;
};

} // namespace gridcover
