#include "bprt/detector.hpp"
#include "bprt/frameio.hpp"
#include "bprt/synthetic.hpp"

#include "oracles.hpp"
#include "scenarios.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace bprt;

namespace {

ChangeMap map_of(std::size_t w, std::size_t h, std::vector<std::uint8_t> v) { return ChangeMap{w, h, std::move(v)}; }

ChangeMap random_map(std::mt19937_64& rng, std::size_t w, std::size_t h, double density) {
    std::bernoulli_distribution b(density);
    std::vector<std::uint8_t> v(w * h);
    for (auto& c : v) c = b(rng) ? 1 : 0;
    return ChangeMap{w, h, std::move(v)};
}

// Flood fill written independently of the library: counts components.
std::size_t component_count(const ChangeMap& m, bool eight) {
    std::vector<int> label(m.changed.size(), -1);
    std::size_t n = 0;
    for (std::size_t start = 0; start < m.changed.size(); ++start) {
        if (!m.changed[start] || label[start] >= 0) continue;
        std::vector<std::size_t> stack{start};
        label[start] = static_cast<int>(n);
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            const long c = static_cast<long>(k % m.cells_w), r = static_cast<long>(k / m.cells_w);
            for (long dr = -1; dr <= 1; ++dr) {
                for (long dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    if (!eight && dr != 0 && dc != 0) continue;
                    const long nc = c + dc, nr = r + dr;
                    if (nc < 0 || nr < 0 || nc >= static_cast<long>(m.cells_w) || nr >= static_cast<long>(m.cells_h))
                        continue;
                    const std::size_t q = static_cast<std::size_t>(nr) * m.cells_w + static_cast<std::size_t>(nc);
                    if (m.changed[q] && label[q] < 0) {
                        label[q] = static_cast<int>(n);
                        stack.push_back(q);
                    }
                }
            }
        }
        ++n;
    }
    return n;
}

} // namespace

TEST_CASE("invert_frame") {
    const VoltageFrame z(2, 1, {0.0, 0.2});
    const auto inv = invert_frame(z, 1.0);
    CHECK(inv.at(0, 0) == 1.0);
    CHECK(inv.at(1, 0) == doctest::Approx(0.8).epsilon(1e-15));
    std::mt19937_64 rng(1);
    const VoltageFrame d = oracle::random_dyadic_frame(rng, 6, 6);
    CHECK(invert_frame(invert_frame(d, 1.0), 1.0) == d);
    CHECK_THROWS_AS((void)invert_frame(VoltageFrame(1, 1, {1.5}), 1.0), InvalidInput);
}

TEST_CASE("train_detector computes module 2 on the inverted template") {
    const auto uni = train_detector(VoltageFrame(2, 2, {0.5, 0.5, 0.5, 0.5}), 2, CellParams{}, 1.0).model;
    CHECK(uni.module2.x_a == 0.5);
    const auto d = train_detector(VoltageFrame(2, 2, {0.3, 0.3, 0.3, 0.3}), 2, CellParams{}, 1.0).model;
    CHECK(d.module1.x_a == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(d.module2.x_a == doctest::Approx(0.7).epsilon(1e-15));
    const auto m = train_detector(scenario::worked_template(), 2, CellParams{}, 1.0).model;
    CHECK(m.module1.cells_w == 2);
    CHECK(m.module2.cells_h == 2);
    CHECK(m.module1.params == m.module2.params);
}

TEST_CASE("detect: unchanged frame yields an empty map") {
    const auto m = train_detector(scenario::dual_template(), 2, CellParams{}, 1.0).model;
    const auto map = detect(m, scenario::dual_template());
    CHECK(map.cells_w == 2);
    CHECK(map.count() == 0);
    CHECK(merged_similarity(map) == 1.0);
}

TEST_CASE("detect: each module sees one polarity, the merge sees both") {
    const auto m = train_detector(scenario::dual_template(), 2, CellParams{}, 1.0).model;
    const auto d = detect_detailed(m, scenario::dual_test());
    CHECK(d.module1.outputs == std::vector<std::uint8_t>{0, 1, 1, 1});
    CHECK(d.module2.outputs == std::vector<std::uint8_t>{1, 0, 1, 1});
    CHECK(d.map.changed == std::vector<std::uint8_t>{1, 1, 0, 0});
    CHECK(merged_similarity(d.map) == 0.5);
    CHECK_THROWS_AS((void)detect(m, VoltageFrame(2, 2, {0, 0, 0, 0})), DimensionError);
}

TEST_CASE("detect: two darkened blocks on the worked template") {
    const auto m = train_detector(scenario::worked_template(), 2, CellParams{}, 1.0).model;
    const VoltageFrame t = scenario::worked_template();
    std::vector<double> v(t.values().begin(), t.values().end());
    for (std::size_t r = 2; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) v[r * 4 + c] = 0.0;
    const auto map = detect(m, VoltageFrame(4, 4, v));
    CHECK(map.changed == std::vector<std::uint8_t>{0, 0, 1, 1});
}

TEST_CASE("property: polarity symmetry") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 100; ++k) {
        const VoltageFrame t = oracle::random_dyadic_frame(rng, 8, 8);
        const VoltageFrame f = oracle::random_dyadic_frame(rng, 8, 8);
        const auto a = train_detector(t, 2, CellParams{}, 1.0).model;
        const auto b = train_detector(invert_frame(t, 1.0), 2, CellParams{}, 1.0).model;
        const auto da = detect_detailed(a, f);
        const auto db = detect_detailed(b, invert_frame(f, 1.0));
        REQUIRE(da.map == db.map);
        REQUIRE(da.module1 == db.module2);
        REQUIRE(da.module2 == db.module1);
    }
}

TEST_CASE("property: map dimensions follow the block size") {
    for (std::size_t block : {1u, 2u, 4u}) {
        const VoltageFrame t(16, 8, std::vector<double>(128, 0.4));
        const auto m = train_detector(t, block, CellParams{}, 1.0).model;
        const auto map = detect(m, t);
        CHECK(map.cells_w == 16 / block);
        CHECK(map.cells_h == 8 / block);
    }
}

TEST_CASE("blobs: basic shapes") {
    CHECK(extract_blobs(map_of(3, 3, std::vector<std::uint8_t>(9, 0))).empty());

    const auto one = extract_blobs(map_of(3, 3, {0, 0, 0, 0, 1, 0, 0, 0, 0}));
    REQUIRE(one.size() == 1);
    CHECK(one[0].cells.size() == 1);
    CHECK(one[0].box.col_min == 1);
    CHECK(one[0].box.row_max == 1);

    const ChangeMap diag = map_of(2, 2, {1, 0, 0, 1});
    CHECK(extract_blobs(diag).size() == 2);
    CHECK(extract_blobs(diag, Connectivity::eight).size() == 1);

    const auto l = extract_blobs(map_of(4, 3, {1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 0, 1}));
    REQUIRE(l.size() == 2);
    CHECK(l[0].cells.size() == 3);
    CHECK(l[1].cells.size() == 3);
    CHECK(l[1].box.col_min == 3);
    CHECK(l[1].box.row_min == 0);
    CHECK(l[1].box.row_max == 2);
}

TEST_CASE("property: blobs partition the changed cells") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 200; ++k) {
        const ChangeMap m = random_map(rng, 12, 9, 0.4);
        for (auto conn : {Connectivity::four, Connectivity::eight}) {
            const auto blobs = extract_blobs(m, conn);
            REQUIRE(blobs.size() == component_count(m, conn == Connectivity::eight));
            std::set<std::pair<std::size_t, std::size_t>> seen;
            for (const auto& b : blobs) {
                REQUIRE(!b.cells.empty());
                for (const auto& c : b.cells) {
                    REQUIRE(m.at(c.col, c.row));
                    REQUIRE(seen.insert({c.col, c.row}).second);
                    REQUIRE(c.col >= b.box.col_min);
                    REQUIRE(c.col <= b.box.col_max);
                    REQUIRE(c.row >= b.box.row_min);
                    REQUIRE(c.row <= b.box.row_max);
                }
            }
            REQUIRE(seen.size() == m.count());
        }
    }
}

TEST_CASE("blob IoU and matching") {
    const ChangeMap truth = map_of(4, 1, {1, 1, 0, 0});
    const ChangeMap half = map_of(4, 1, {0, 1, 1, 0});
    const ChangeMap exact = truth;
    const auto tb = extract_blobs(truth);
    CHECK(blob_iou(tb[0], extract_blobs(half)[0], 4) == doctest::Approx(1.0 / 3.0));
    CHECK(blob_iou(tb[0], extract_blobs(exact)[0], 4) == 1.0);

    const auto m1 = match_blobs(half, truth);
    CHECK(m1.truth_blobs == 1);
    CHECK(m1.detected == 0);
    CHECK(m1.false_blobs == 1);
    const auto m2 = match_blobs(half, truth, 0.3);
    CHECK(m2.detected == 1);
    CHECK(m2.false_blobs == 0);
    const auto m3 = match_blobs(map_of(4, 1, {1, 1, 0, 1}), truth);
    CHECK(m3.detected == 1);
    CHECK(m3.predicted_blobs == 2);
    CHECK(m3.false_blobs == 1);
    CHECK_THROWS_AS((void)match_blobs(map_of(2, 1, {1, 0}), truth), DimensionError);
}

TEST_CASE("cell counts") {
    const auto c = count_cells(map_of(4, 1, {1, 1, 0, 0}), map_of(4, 1, {1, 0, 1, 0}));
    CHECK(c.tp == 1);
    CHECK(c.fp == 1);
    CHECK(c.fn == 1);
    CHECK(c.tn == 1);
    CHECK_THROWS_AS((void)count_cells(map_of(2, 1, {1, 0}), map_of(1, 2, {1, 0})), DimensionError);
}

namespace {

std::vector<LabeledFrame> synthetic_set(SyntheticConfig cfg, VoltageFrame& templ) {
    const auto seq = make_synthetic_sequence(cfg);
    templ = normalize(seq.templ, 1.0);
    std::vector<LabeledFrame> out;
    for (std::size_t i = 0; i < seq.frames.size(); ++i) out.push_back({normalize(seq.frames[i], 1.0), seq.truths[i]});
    return out;
}

} // namespace

TEST_CASE("synthetic sequence: detector is exact on a flat background") {
    VoltageFrame templ;
    const auto tests = synthetic_set(SyntheticConfig{}, templ);
    const auto m = train_detector(templ, 2, CellParams{}, 1.0).model;
    for (const auto& lf : tests) {
        REQUIRE(lf.truth.count() > 0);
        REQUIRE(detect(m, lf.frame) == lf.truth);
    }
    const std::vector<double> grid{0.5};
    const auto roc = roc_sweep(templ, tests, grid, 2, CellParams{}, 1.0);
    CHECK(roc[0].tpr == 1.0);
    CHECK(roc[0].fpr == 0.0);
    RocOptions blob;
    blob.counting = RocCounting::blobs;
    const auto rb = roc_sweep(templ, tests, grid, 2, CellParams{}, 1.0, blob);
    CHECK(rb[0].tpr == 1.0);
    CHECK(rb[0].fpr == 0.0);
}

TEST_CASE("ROC: degenerate thresholds and monotone sweep") {
    std::mt19937_64 rng(99);
    const std::vector<double> grid{0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.65, 0.7, 1.0};
    for (int inst = 0; inst < 20; ++inst) {
        const VoltageFrame templ = oracle::random_frame(rng, 8, 8);
        std::vector<LabeledFrame> tests;
        for (int k = 0; k < 3; ++k) {
            ChangeMap truth = random_map(rng, 4, 4, 0.5);
            truth.changed[0] = 1;
            truth.changed[1] = 0;
            tests.push_back({oracle::random_frame(rng, 8, 8), truth});
        }
        const auto roc = roc_sweep(templ, tests, grid, 2, CellParams{}, 1.0);
        REQUIRE(roc.size() == grid.size());
        CHECK(roc.front().fpr == 1.0);
        CHECK(roc.front().tpr == 1.0);
        CHECK(roc.back().fpr == 0.0);
        CHECK(roc.back().tpr == 0.0);

        std::size_t prev = SIZE_MAX;
        for (double t : grid) {
            CellParams p;
            p.t_a = t;
            const auto m = train_detector(templ, 2, p, 1.0).model;
            std::size_t changed = 0;
            for (const auto& lf : tests) changed += detect(m, lf.frame).count();
            REQUIRE(changed <= prev);
            prev = changed;
        }
        for (std::size_t i = 1; i < roc.size(); ++i) {
            REQUIRE(roc[i].fpr <= roc[i - 1].fpr);
            REQUIRE(roc[i].tpr <= roc[i - 1].tpr);
            REQUIRE(roc[i].t_a == grid[i]);
        }
    }
}

TEST_CASE("ROC: errors and thread determinism") {
    std::mt19937_64 rng(5);
    const VoltageFrame templ = oracle::random_frame(rng, 8, 8);
    std::vector<LabeledFrame> tests{{oracle::random_frame(rng, 8, 8), map_of(4, 4, std::vector<std::uint8_t>(16, 0))}};
    const std::vector<double> grid{0.5};
    CHECK_THROWS_AS((void)roc_sweep(templ, tests, grid, 2, CellParams{}, 1.0), UndefinedRate);
    CHECK_THROWS_AS((void)roc_sweep(templ, tests, std::span<const double>{}, 2, CellParams{}, 1.0), InvalidInput);
    tests[0].truth = map_of(4, 4, std::vector<std::uint8_t>(16, 1));
    CHECK_THROWS_AS((void)roc_sweep(templ, tests, grid, 2, CellParams{}, 1.0), UndefinedRate);
    tests[0].truth = map_of(2, 2, {1, 0, 0, 1});
    CHECK_THROWS_AS((void)roc_sweep(templ, tests, grid, 2, CellParams{}, 1.0), DimensionError);

    tests[0].truth = random_map(rng, 4, 4, 0.5);
    tests[0].truth.changed[0] = 1;
    tests[0].truth.changed[1] = 0;
    const std::vector<double> many{0.1, 0.3, 0.5, 0.6};
    RocOptions four;
    four.threads = 4;
    const auto a = roc_sweep(templ, tests, many, 2, CellParams{}, 1.0);
    const auto b = roc_sweep(templ, tests, many, 2, CellParams{}, 1.0, four);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].fpr == b[i].fpr);
        CHECK(a[i].tpr == b[i].tpr);
    }
}
