#include "bprt/network.hpp"

#include "bprt/parallel.hpp"
#include "bprt/summation.hpp"

#include <cmath>
#include <algorithm>
#include <map>
#include <string>

namespace bprt {

namespace {

void check_tiling(std::size_t width, std::size_t height, std::size_t block) {
    if (block < 1) {
        throw DimensionError("block size must be at least 1");
    }
    if (width % block != 0 || height % block != 0) {
        throw DimensionError("frame dimensions " + std::to_string(width) + "x" + std::to_string(height) +
                             " not divisible by block " + std::to_string(block));
    }
}

// Copies the pixels of one cell into `out` (row-major within the block).
void gather_cell(const VoltageFrame& frame, std::size_t block, std::size_t cells_w, std::size_t cell,
                 std::vector<double>& out) {
    const std::size_t col0 = (cell % cells_w) * block;
    const std::size_t row0 = (cell / cells_w) * block;
    out.resize(block * block);
    const auto values = frame.values();
    for (std::size_t r = 0; r < block; ++r) {
        const std::size_t base = (row0 + r) * frame.width() + col0;
        for (std::size_t c = 0; c < block; ++c) {
            out[r * block + c] = values[base + c];
        }
    }
}

std::uint8_t cell_decision(std::span<const double> x, std::span<const double> w, const CellParams& params) {
    const CellOutput out = evaluate_cell(x, w, params);
    if (params.mode == ThresholdMode::hard) {
        return out.xout == 1.0 ? 1 : 0;
    }
    return out.xout > 0.5 ? 1 : 0;
}

} // namespace

VoltageFrame::VoltageFrame(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width_ == 0 || height_ == 0) {
        throw DimensionError("voltage frame must be at least 1x1");
    }
    if (values_.size() != width_ * height_) {
        throw DimensionError("voltage frame: " + std::to_string(values_.size()) + " values for " +
                             std::to_string(width_) + "x" + std::to_string(height_));
    }
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidInput("voltage frame: values must be finite and nonnegative");
        }
    }
}

TiledFrame tile_frame(const VoltageFrame& frame, std::size_t block) {
    check_tiling(frame.width(), frame.height(), block);
    TiledFrame tiled;
    tiled.block = block;
    tiled.cells_w = frame.width() / block;
    tiled.cells_h = frame.height() / block;
    tiled.cells.resize(tiled.cells_w * tiled.cells_h);
    for (std::size_t j = 0; j < tiled.cells.size(); ++j) {
        gather_cell(frame, block, tiled.cells_w, j, tiled.cells[j]);
    }
    return tiled;
}

double frame_mean(const VoltageFrame& frame) {
    return compensated_sum(frame.values()) / static_cast<double>(frame.values().size());
}

TrainingResult train_network(const VoltageFrame& templ, std::size_t block, const CellParams& params,
                             const TrainOptions& options) {
    params.validate();
    check_tiling(templ.width(), templ.height(), block);

    TrainingResult result;
    TrainedNetwork& net = result.network;
    net.block = block;
    net.cells_w = templ.width() / block;
    net.cells_h = templ.height() / block;
    net.x_a = frame_mean(templ);
    net.params = params;

    const std::size_t n = net.inputs_per_cell();
    const std::size_t cells = net.cell_count();
    net.weights.resize(cells * n);

    parallel_for(cells, options.threads, [&](std::size_t j) {
        thread_local std::vector<double> x;
        gather_cell(templ, block, net.cells_w, j, x);
        const CellWeights w = assign_weights(x, net.x_a, params);
        std::copy(w.g.begin(), w.g.end(), net.weights.begin() + static_cast<std::ptrdiff_t>(j * n));
    });

    if (options.programming) {
        const ProgrammingConfig& prog = *options.programming;
        prog.device.validate();
        prog.pulse.validate();
        const MemristorState initial{prog.initial_x, prog.device};

        // Programming is deterministic in (initial state, target, pulse), so
        // each distinct target is programmed once, in scan order.
        std::map<double, double> achieved;
        for (std::size_t k = 0; k < net.weights.size(); ++k) {
            const double target = net.weights[k];
            auto it = achieved.find(target);
            if (it == achieved.end()) {
                try {
                    const ProgrammingResult pr = program_to_conductance(initial, target, prog.pulse);
                    it = achieved.emplace(target, conductance(pr.state)).first;
                } catch (const NonConvergence& e) {
                    const std::size_t j = k / n;
                    const CellCoord cell{j % net.cells_w, j / net.cells_w};
                    throw ProgrammingError("programming failed at cell (" + std::to_string(cell.col) + ", " +
                                               std::to_string(cell.row) + ") input " + std::to_string(k % n) +
                                               ": " + e.what(),
                                           cell, k % n, e.final_state());
                }
            }
            net.weights[k] = it->second;
        }
    }

    net.baselines.resize(cells);
    parallel_for(cells, options.threads, [&](std::size_t j) {
        thread_local std::vector<double> x;
        gather_cell(templ, block, net.cells_w, j, x);
        net.baselines[j] = cell_decision(x, net.cell_weights(j), params);
    });
    for (std::size_t j = 0; j < cells; ++j) {
        if (net.baselines[j] == 0) {
            result.report.zero_baseline_cells.push_back({j % net.cells_w, j / net.cells_w});
        }
    }
    return result;
}

OutputGrid evaluate_network(const TrainedNetwork& net, const VoltageFrame& test, unsigned threads) {
    if (test.width() != net.cells_w * net.block || test.height() != net.cells_h * net.block) {
        throw DimensionError("test frame " + std::to_string(test.width()) + "x" + std::to_string(test.height()) +
                             " does not match trained " + std::to_string(net.cells_w * net.block) + "x" +
                             std::to_string(net.cells_h * net.block));
    }
    OutputGrid grid;
    grid.cells_w = net.cells_w;
    grid.cells_h = net.cells_h;
    grid.outputs.resize(net.cell_count());
    parallel_for(net.cell_count(), threads, [&](std::size_t j) {
        thread_local std::vector<double> x;
        gather_cell(test, net.block, net.cells_w, j, x);
        grid.outputs[j] = cell_decision(x, net.cell_weights(j), net.params);
    });
    return grid;
}

double global_similarity(const OutputGrid& grid) {
    if (grid.outputs.empty()) {
        throw InvalidInput("global similarity of an empty grid");
    }
    std::size_t ones = 0;
    for (auto v : grid.outputs) {
        ones += v;
    }
    return static_cast<double>(ones) / static_cast<double>(grid.outputs.size());
}

} // namespace bprt
