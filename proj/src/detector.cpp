#include "bprt/detector.hpp"

#include "bprt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bprt {

std::size_t ChangeMap::count() const {
    return static_cast<std::size_t>(std::count_if(changed.begin(), changed.end(), [](auto v) { return v != 0; }));
}

VoltageFrame invert_frame(const VoltageFrame& frame, double v_ref) {
    if (!(v_ref > 0.0) || !std::isfinite(v_ref)) {
        throw InvalidInput("v_ref must be positive");
    }
    std::vector<double> out;
    out.reserve(frame.values().size());
    for (double v : frame.values()) {
        if (v > v_ref) {
            throw InvalidInput("pixel voltage " + std::to_string(v) + " exceeds v_ref " + std::to_string(v_ref));
        }
        out.push_back(v_ref - v);
    }
    return VoltageFrame(frame.width(), frame.height(), std::move(out));
}

DetectorTraining train_detector(const VoltageFrame& templ, std::size_t block, const CellParams& params, double v_ref,
                                const TrainOptions& options) {
    const VoltageFrame inverted = invert_frame(templ, v_ref);
    TrainingResult first = train_network(templ, block, params, options);
    TrainingResult second = train_network(inverted, block, params, options);
    return {DetectorModel{std::move(first.network), std::move(second.network), v_ref}, std::move(first.report),
            std::move(second.report)};
}

Detection detect_detailed(const DetectorModel& model, const VoltageFrame& test, unsigned threads) {
    Detection d;
    d.module1 = evaluate_network(model.module1, test, threads);
    d.module2 = evaluate_network(model.module2, invert_frame(test, model.v_ref), threads);
    if (d.module1.cells_w != d.module2.cells_w || d.module1.cells_h != d.module2.cells_h) {
        throw InvariantViolation("detector modules disagree on cell grid");
    }
    d.map.cells_w = d.module1.cells_w;
    d.map.cells_h = d.module1.cells_h;
    d.map.changed.resize(d.module1.outputs.size());
    for (std::size_t j = 0; j < d.map.changed.size(); ++j) {
        d.map.changed[j] = (d.module1.outputs[j] & d.module2.outputs[j]) == 0 ? 1 : 0;
    }
    return d;
}

ChangeMap detect(const DetectorModel& model, const VoltageFrame& test, unsigned threads) {
    return detect_detailed(model, test, threads).map;
}

double merged_similarity(const ChangeMap& map) {
    if (map.changed.empty()) {
        throw InvalidInput("similarity of an empty change map");
    }
    return static_cast<double>(map.changed.size() - map.count()) / static_cast<double>(map.changed.size());
}

std::vector<Blob> extract_blobs(const ChangeMap& map, Connectivity connectivity) {
    const std::size_t w = map.cells_w;
    const std::size_t h = map.cells_h;
    std::vector<std::uint8_t> seen(map.changed.size(), 0);
    std::vector<Blob> blobs;
    std::vector<std::size_t> stack;

    for (std::size_t start = 0; start < map.changed.size(); ++start) {
        if (!map.changed[start] || seen[start]) {
            continue;
        }
        Blob blob;
        blob.box = {start % w, start / w, start % w, start / w};
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t idx = stack.back();
            stack.pop_back();
            const std::size_t col = idx % w;
            const std::size_t row = idx / w;
            blob.cells.push_back({col, row});
            blob.box.col_min = std::min(blob.box.col_min, col);
            blob.box.col_max = std::max(blob.box.col_max, col);
            blob.box.row_min = std::min(blob.box.row_min, row);
            blob.box.row_max = std::max(blob.box.row_max, row);

            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) {
                        continue;
                    }
                    if (connectivity == Connectivity::four && dr != 0 && dc != 0) {
                        continue;
                    }
                    const auto nc = static_cast<std::ptrdiff_t>(col) + dc;
                    const auto nr = static_cast<std::ptrdiff_t>(row) + dr;
                    if (nc < 0 || nr < 0 || nc >= static_cast<std::ptrdiff_t>(w) ||
                        nr >= static_cast<std::ptrdiff_t>(h)) {
                        continue;
                    }
                    const std::size_t n = static_cast<std::size_t>(nr) * w + static_cast<std::size_t>(nc);
                    if (map.changed[n] && !seen[n]) {
                        seen[n] = 1;
                        stack.push_back(n);
                    }
                }
            }
        }
        std::sort(blob.cells.begin(), blob.cells.end(),
                  [](const CellCoord& a, const CellCoord& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
        blobs.push_back(std::move(blob));
    }
    return blobs;
}

double blob_iou(const Blob& a, const Blob& b, std::size_t cells_w) {
    std::vector<std::size_t> ia;
    std::vector<std::size_t> ib;
    for (const auto& c : a.cells) ia.push_back(c.row * cells_w + c.col);
    for (const auto& c : b.cells) ib.push_back(c.row * cells_w + c.col);
    std::sort(ia.begin(), ia.end());
    std::sort(ib.begin(), ib.end());
    std::vector<std::size_t> common;
    std::set_intersection(ia.begin(), ia.end(), ib.begin(), ib.end(), std::back_inserter(common));
    const std::size_t uni = ia.size() + ib.size() - common.size();
    return uni == 0 ? 0.0 : static_cast<double>(common.size()) / static_cast<double>(uni);
}

BlobMatch match_blobs(const ChangeMap& predicted, const ChangeMap& truth, double iou_threshold,
                      Connectivity connectivity) {
    if (predicted.cells_w != truth.cells_w || predicted.cells_h != truth.cells_h) {
        throw DimensionError("prediction and ground truth maps differ in size");
    }
    const auto pred_blobs = extract_blobs(predicted, connectivity);
    const auto truth_blobs = extract_blobs(truth, connectivity);
    std::vector<std::uint8_t> pred_matched(pred_blobs.size(), 0);

    BlobMatch m;
    m.truth_blobs = truth_blobs.size();
    m.predicted_blobs = pred_blobs.size();
    for (const auto& t : truth_blobs) {
        bool hit = false;
        for (std::size_t p = 0; p < pred_blobs.size(); ++p) {
            if (blob_iou(t, pred_blobs[p], truth.cells_w) >= iou_threshold) {
                hit = true;
                pred_matched[p] = 1;
            }
        }
        m.detected += hit ? 1 : 0;
    }
    m.false_blobs = static_cast<std::size_t>(std::count(pred_matched.begin(), pred_matched.end(), 0));
    return m;
}

CellCounts count_cells(const ChangeMap& predicted, const ChangeMap& truth) {
    if (predicted.cells_w != truth.cells_w || predicted.cells_h != truth.cells_h) {
        throw DimensionError("prediction and ground truth maps differ in size");
    }
    CellCounts c;
    for (std::size_t j = 0; j < truth.changed.size(); ++j) {
        const bool p = predicted.changed[j] != 0;
        const bool t = truth.changed[j] != 0;
        if (p && t) ++c.tp;
        else if (p) ++c.fp;
        else if (t) ++c.fn;
        else ++c.tn;
    }
    return c;
}

std::vector<RocPoint> roc_sweep(const VoltageFrame& templ, std::span<const LabeledFrame> tests,
                                std::span<const double> thresholds, std::size_t block, const CellParams& params,
                                double v_ref, const RocOptions& options) {
    if (thresholds.empty()) {
        throw InvalidInput("ROC sweep needs at least one threshold");
    }
    for (const auto& t : tests) {
        if (t.truth.cells_w * block != t.frame.width() || t.truth.cells_h * block != t.frame.height()) {
            throw DimensionError("ground truth map does not match its frame");
        }
    }

    std::vector<RocPoint> points(thresholds.size());
    parallel_for(thresholds.size(), options.threads, [&](std::size_t k) {
        CellParams p = params;
        p.t_a = thresholds[k];
        const DetectorModel model = train_detector(templ, block, p, v_ref).model;

        CellCounts total;
        std::size_t truth_blobs = 0;
        std::size_t detected_blobs = 0;
        for (const auto& t : tests) {
            const ChangeMap predicted = detect(model, t.frame);
            const CellCounts c = count_cells(predicted, t.truth);
            total.tp += c.tp;
            total.fp += c.fp;
            total.tn += c.tn;
            total.fn += c.fn;
            if (options.counting == RocCounting::blobs) {
                const BlobMatch m = match_blobs(predicted, t.truth, options.iou_threshold, options.connectivity);
                truth_blobs += m.truth_blobs;
                detected_blobs += m.detected;
            }
        }
        if (total.fp + total.tn == 0) {
            throw UndefinedRate("ROC: ground truth has no unchanged cells", "negative");
        }
        double tpr = 0.0;
        if (options.counting == RocCounting::cells) {
            if (total.tp + total.fn == 0) {
                throw UndefinedRate("ROC: ground truth has no changed cells", "positive");
            }
            tpr = static_cast<double>(total.tp) / static_cast<double>(total.tp + total.fn);
        } else {
            if (truth_blobs == 0) {
                throw UndefinedRate("ROC: ground truth has no blobs", "positive");
            }
            tpr = static_cast<double>(detected_blobs) / static_cast<double>(truth_blobs);
        }
        const double fpr = static_cast<double>(total.fp) / static_cast<double>(total.fp + total.tn);
        points[k] = RocPoint{thresholds[k], fpr, tpr};
    });
    return points;
}

} // namespace bprt
