#include "bprt/synthetic.hpp"

#include "bprt/error.hpp"

#include <algorithm>
#include <random>

namespace bprt {

namespace {

std::uint8_t clamp_level(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

} // namespace

SyntheticSequence make_synthetic_sequence(const SyntheticConfig& cfg) {
    if (cfg.block < 1 || cfg.width % cfg.block != 0 || cfg.height % cfg.block != 0) {
        throw DimensionError("synthetic: frame dimensions must be multiples of the block size");
    }
    const std::size_t cells_w = cfg.width / cfg.block;
    const std::size_t cells_h = cfg.height / cfg.block;
    if (cfg.object_cells < 1 || cfg.object_cells > cells_w || cfg.object_cells > cells_h) {
        throw InvalidInput("synthetic: object does not fit in the frame");
    }
    if (cfg.texture < 0 || cfg.noise < 0 || cfg.background < 0 || cfg.background > 255) {
        throw InvalidInput("synthetic: levels out of range");
    }

    std::mt19937_64 rng(cfg.seed);
    SyntheticSequence seq;
    seq.templ.width = cfg.width;
    seq.templ.height = cfg.height;
    seq.templ.pixels.resize(cfg.width * cfg.height);
    std::uniform_int_distribution<int> texture(-cfg.texture, cfg.texture);
    for (auto& p : seq.templ.pixels) {
        p = clamp_level(cfg.background + texture(rng));
    }

    struct Track {
        std::size_t row;
        std::size_t start_col;
        std::uint8_t level;
    };
    std::vector<Track> tracks;
    std::uniform_int_distribution<std::size_t> row_dist(0, cells_h - cfg.object_cells);
    std::uniform_int_distribution<std::size_t> col_dist(0, cells_w - cfg.object_cells);
    for (std::size_t k = 0; k < cfg.objects; ++k) {
        tracks.push_back({row_dist(rng), col_dist(rng), static_cast<std::uint8_t>(k % 2 == 0 ? 255 : 0)});
    }

    const std::size_t span = cells_w - cfg.object_cells + 1;
    std::uniform_int_distribution<int> noise(-cfg.noise, cfg.noise);
    for (std::size_t f = 0; f < cfg.frames; ++f) {
        GrayFrame frame = seq.templ;
        ChangeMap truth{cells_w, cells_h, std::vector<std::uint8_t>(cells_w * cells_h, 0)};
        for (const auto& t : tracks) {
            const std::size_t col0 = (t.start_col + f) % span;
            for (std::size_t r = t.row; r < t.row + cfg.object_cells; ++r) {
                for (std::size_t c = col0; c < col0 + cfg.object_cells; ++c) {
                    truth.changed[r * cells_w + c] = 1;
                    for (std::size_t pr = 0; pr < cfg.block; ++pr) {
                        for (std::size_t pc = 0; pc < cfg.block; ++pc) {
                            frame.pixels[(r * cfg.block + pr) * cfg.width + c * cfg.block + pc] = t.level;
                        }
                    }
                }
            }
        }
        if (cfg.noise > 0) {
            for (auto& p : frame.pixels) {
                p = clamp_level(p + noise(rng));
            }
        }
        seq.frames.push_back(std::move(frame));
        seq.truths.push_back(std::move(truth));
    }
    return seq;
}

} // namespace bprt
