#pragma once

#include "bprt/detector.hpp"
#include "bprt/frameio.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bprt {

// Static background with square objects that slide one cell per frame.
// Objects are aligned to the cell grid and alternate between white and
// black, so the ground truth is exactly the set of covered cells.
struct SyntheticConfig {
    std::size_t width = 64;
    std::size_t height = 48;
    std::size_t block = 2;
    std::size_t frames = 8;
    std::size_t objects = 2;
    std::size_t object_cells = 3;  // object side, in cells
    int background = 128;
    int texture = 0;     // static per-pixel background variation, +/- levels
    int noise = 0;       // per-frame sensor noise, +/- levels
    std::uint64_t seed = 1;
};

struct SyntheticSequence {
    GrayFrame templ;
    std::vector<GrayFrame> frames;
    std::vector<ChangeMap> truths;
};

[[nodiscard]] SyntheticSequence make_synthetic_sequence(const SyntheticConfig& config);

} // namespace bprt
