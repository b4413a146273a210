#include "gridcover/grid.hpp"

#include <cmath>

namespace gridcover {

CellIndex point_to_cell(std::span<const double> x, std::uint64_t segments) {
    if (x.empty()) throw invalid_params("point_to_cell needs at least one coordinate");
    if (segments < 1) throw invalid_params("point_to_cell needs segments >= 1");

    CellIndex index = 0;
    for (std::size_t i = x.size(); i-- > 0;) {
        const double xi = x[i];
        if (!(xi >= 0.0) || !(xi <= 1.0))
            throw invalid_params("coordinate outside [0, 1]");
        auto c = static_cast<std::uint64_t>(xi * static_cast<double>(segments));
        if (c >= segments) c = segments - 1; // clamp x_i == 1 into the last segment
        index = index * segments + c;
    }
    return index;
}

CoverageState::CoverageState(std::uint64_t cells) : cells_(cells) {
    if (cells < 1) throw invalid_params("CoverageState needs cells >= 1");
    bits_.assign((cells + 63) / 64, 0);
}

bool CoverageState::record_sample(CellIndex cell) {
    if (cell >= cells_) throw invalid_params("cell index out of range");
    ++samples_;
    std::uint64_t& word = bits_[cell >> 6];
    const std::uint64_t mask = 1ULL << (cell & 63);
    if (word & mask) return false;
    word |= mask;
    ++covered_;
    return true;
}

bool CoverageState::is_covered(CellIndex cell) const {
    if (cell >= cells_) throw invalid_params("cell index out of range");
    return (bits_[cell >> 6] >> (cell & 63)) & 1ULL;
}

} // namespace gridcover
