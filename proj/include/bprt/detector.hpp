#pragma once

#include "bprt/network.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace bprt {

// Module 1 learns the template; module 2 learns its inversion and is fed the
// inverted test frame, so it reports light-to-dark changes.
struct DetectorModel {
    TrainedNetwork module1;
    TrainedNetwork module2;
    double v_ref = 1.0;

    friend bool operator==(const DetectorModel&, const DetectorModel&) = default;
};

struct ChangeMap {
    std::size_t cells_w = 0;
    std::size_t cells_h = 0;
    std::vector<std::uint8_t> changed;  // 1 = change detected

    [[nodiscard]] bool at(std::size_t col, std::size_t row) const { return changed[row * cells_w + col] != 0; }
    [[nodiscard]] std::size_t count() const;

    friend bool operator==(const ChangeMap&, const ChangeMap&) = default;
};

// v -> v_ref - v. Throws InvalidInput for values above v_ref.
[[nodiscard]] VoltageFrame invert_frame(const VoltageFrame& frame, double v_ref);

struct DetectorTraining {
    DetectorModel model;
    TrainingReport module1_report;
    TrainingReport module2_report;
};

[[nodiscard]] DetectorTraining train_detector(const VoltageFrame& templ, std::size_t block, const CellParams& params,
                                              double v_ref, const TrainOptions& options = {});

struct Detection {
    OutputGrid module1;
    OutputGrid module2;
    ChangeMap map;
};

// A cell is changed when either module outputs 0, i.e. the AND of the two
// outputs is low.
[[nodiscard]] Detection detect_detailed(const DetectorModel& model, const VoltageFrame& test, unsigned threads = 1);
[[nodiscard]] ChangeMap detect(const DetectorModel& model, const VoltageFrame& test, unsigned threads = 1);

// S_g of the AND-merged output grid.
[[nodiscard]] double merged_similarity(const ChangeMap& map);

enum class Connectivity { four, eight };

struct BoundingBox {
    std::size_t col_min, row_min, col_max, row_max;  // inclusive
};

struct Blob {
    std::vector<CellCoord> cells;
    BoundingBox box;
};

// Connected components of changed cells, ordered by their first cell in
// row-major scan order.
[[nodiscard]] std::vector<Blob> extract_blobs(const ChangeMap& map, Connectivity connectivity = Connectivity::four);

// |a ∩ b| / |a ∪ b| over cell sets.
[[nodiscard]] double blob_iou(const Blob& a, const Blob& b, std::size_t cells_w);

struct BlobMatch {
    std::size_t truth_blobs = 0;
    std::size_t detected = 0;        // truth blobs overlapped by a prediction with IoU >= threshold
    std::size_t predicted_blobs = 0;
    std::size_t false_blobs = 0;     // predictions matching no truth blob
};

[[nodiscard]] BlobMatch match_blobs(const ChangeMap& predicted, const ChangeMap& truth, double iou_threshold = 0.5,
                                    Connectivity connectivity = Connectivity::four);

struct CellCounts {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

[[nodiscard]] CellCounts count_cells(const ChangeMap& predicted, const ChangeMap& truth);

struct RocPoint {
    double t_a;
    double fpr;
    double tpr;
};

enum class RocCounting { cells, blobs };

struct RocOptions {
    RocCounting counting = RocCounting::cells;
    double iou_threshold = 0.5;
    Connectivity connectivity = Connectivity::four;
    unsigned threads = 1;
};

struct LabeledFrame {
    VoltageFrame frame;
    ChangeMap truth;
};

// For each threshold the detector is retrained with t_a replaced and the
// tests re-evaluated. fpr is always cell-level:
// FP / (FP + TN). tpr is TP / (TP + FN) over cells, or in blob mode the
// fraction of truth blobs matched at the IoU threshold. Output order follows
// `thresholds`.
[[nodiscard]] std::vector<RocPoint> roc_sweep(const VoltageFrame& templ, std::span<const LabeledFrame> tests,
                                              std::span<const double> thresholds, std::size_t block,
                                              const CellParams& params, double v_ref, const RocOptions& options = {});

} // namespace bprt
