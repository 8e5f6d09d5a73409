#pragma once

#include "bprt/cell.hpp"
#include "bprt/error.hpp"
#include "bprt/memristor.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bprt {

// Row-major grid of pixel voltages.
class VoltageFrame {
public:
    VoltageFrame() = default;
    // Throws DimensionError on a size mismatch or empty frame and
    // InvalidInput on negative or non-finite values.
    VoltageFrame(std::size_t width, std::size_t height, std::vector<double> values);

    [[nodiscard]] std::size_t width() const { return width_; }
    [[nodiscard]] std::size_t height() const { return height_; }
    [[nodiscard]] double at(std::size_t col, std::size_t row) const { return values_[row * width_ + col]; }
    [[nodiscard]] std::span<const double> values() const { return values_; }

    friend bool operator==(const VoltageFrame&, const VoltageFrame&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> values_;
};

// Per-cell input vectors plus the cell grid they came from.
struct TiledFrame {
    std::size_t block = 0;
    std::size_t cells_w = 0;
    std::size_t cells_h = 0;
    std::vector<std::vector<double>> cells;  // row-major cells, row-major pixels within a cell
};

// Throws DimensionError unless block >= 1 divides both frame dimensions.
[[nodiscard]] TiledFrame tile_frame(const VoltageFrame& frame, std::size_t block);

// Arithmetic mean of all voltages (compensated sum, row-major order).
[[nodiscard]] double frame_mean(const VoltageFrame& frame);

// Memristor realisation of the trained conductances.
struct ProgrammingConfig {
    MemristorParams device{};
    PulseSpec pulse{};
    double initial_x = 0.0;  // every device starts from this state
};

struct TrainedNetwork {
    std::size_t block = 0;
    std::size_t cells_w = 0;
    std::size_t cells_h = 0;
    double x_a = 0.0;
    std::vector<double> weights;     // cells_w * cells_h * block^2, cell-major
    std::vector<std::uint8_t> baselines;  // hard output on the template, per cell
    CellParams params{};

    [[nodiscard]] std::size_t inputs_per_cell() const { return block * block; }
    [[nodiscard]] std::size_t cell_count() const { return cells_w * cells_h; }
    [[nodiscard]] std::span<const double> cell_weights(std::size_t cell) const {
        return std::span<const double>(weights).subspan(cell * inputs_per_cell(), inputs_per_cell());
    }

    friend bool operator==(const TrainedNetwork&, const TrainedNetwork&) = default;
};

struct CellCoord {
    std::size_t col;
    std::size_t row;
    friend bool operator==(const CellCoord&, const CellCoord&) = default;
};

struct TrainingReport {
    std::vector<CellCoord> zero_baseline_cells;
};

struct TrainingResult {
    TrainedNetwork network;
    TrainingReport report;
};

// Programming failure for one weight; wraps the device-level NonConvergence.
class ProgrammingError : public Error {
public:
    ProgrammingError(const std::string& what, CellCoord cell, std::size_t input, MemristorState final_state)
        : Error(what), cell_(cell), input_(input), final_state_(final_state) {}

    [[nodiscard]] CellCoord cell() const { return cell_; }
    [[nodiscard]] std::size_t input() const { return input_; }
    [[nodiscard]] const MemristorState& final_state() const { return final_state_; }

private:
    CellCoord cell_;
    std::size_t input_;
    MemristorState final_state_;
};

struct TrainOptions {
    std::optional<ProgrammingConfig> programming;
    unsigned threads = 1;
};

// x_a is the mean of the whole template. Weights follow params.mode; with
// programming enabled each weight is replaced by the conductance a memristor
// actually reaches. Baselines are the cell outputs on the template itself.
[[nodiscard]] TrainingResult train_network(const VoltageFrame& templ, std::size_t block, const CellParams& params,
                                           const TrainOptions& options = {});

struct OutputGrid {
    std::size_t cells_w = 0;
    std::size_t cells_h = 0;
    std::vector<std::uint8_t> outputs;  // 1 = output high (similar), 0 = low

    friend bool operator==(const OutputGrid&, const OutputGrid&) = default;
};

// In soft mode the logistic output is rounded at 0.5.
[[nodiscard]] OutputGrid evaluate_network(const TrainedNetwork& net, const VoltageFrame& test, unsigned threads = 1);

// S_g = (1/M) sum x_out(j). Throws InvalidInput on an empty grid.
[[nodiscard]] double global_similarity(const OutputGrid& grid);

} // namespace bprt
