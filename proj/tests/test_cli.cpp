#include "cli.hpp"

#include "bprt/frameio.hpp"
#include "bprt/synthetic.hpp"

#include "scenarios.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>

using namespace bprt;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Fresh scratch directory removed on scope exit.
struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("bprt_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    [[nodiscard]] std::string operator/(const std::string& rel) const { return (dir / rel).string(); }
};

GrayFrame to_gray(const VoltageFrame& v) {
    GrayFrame g{v.width(), v.height(), {}};
    for (double x : v.values()) g.pixels.push_back(static_cast<std::uint8_t>(std::lround(x * 255.0)));
    return g;
}

void put_pgm(const std::string& path, const GrayFrame& f) {
    fs::create_directories(fs::path(path).parent_path());
    write_file(path, write_pgm(f));
}

std::string synth(const Scratch& s, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"synth", "--out-dir", s / "seq", "--frames", "4"};
    args.insert(args.end(), extra.begin(), extra.end());
    REQUIRE(run(args).code == cli::kOk);
    return s / "seq";
}

} // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"bogus"}).code == cli::kUsage);
    CHECK(run({"train"}).code == cli::kUsage);
    CHECK(run({"train", "x.pgm", "-o", "m", "--block", "0"}).code == cli::kUsage);
    CHECK(run({"train", "x.pgm", "-o", "m", "--ta", "-1"}).code == cli::kUsage);
    CHECK(run({"train", "x.pgm", "-o", "m", "--soft", "--b1", "1"}).code == cli::kUsage);
    CHECK(run({"train", "x.pgm", "-o", "m", "--threads", "0"}).code == cli::kUsage);
    CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("train: 4x4 template gives two 2x2-cell modules") {
    Scratch s("train");
    put_pgm(s / "t.pgm", to_gray(scenario::dual_template()));
    const auto r = run({"train", s / "t.pgm", "-o", s / "m.bprt", "--json", s / "r.json"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find("module 1 x_a=0.5") != std::string::npos);
    CHECK(r.out.find("cells=4") != std::string::npos);
    const auto m = load_model(read_file(s / "m.bprt"));
    CHECK(m.module1.cell_count() == 4);
    CHECK(m.module2.cell_count() == 4);
    const auto j = nlohmann::json::parse(read_file(s / "r.json"));
    CHECK(j["modules"].size() == 2);
}

TEST_CASE("train: non-divisible template and crop") {
    Scratch s("crop");
    put_pgm(s / "t.pgm", GrayFrame{3, 3, std::vector<std::uint8_t>(9, 60)});
    const auto bad = run({"train", s / "t.pgm", "-o", s / "m.bprt"});
    CHECK(bad.code == cli::kDataError);
    CHECK(bad.err.find("not divisible") != std::string::npos);
    CHECK(!fs::exists(s / "m.bprt"));

    const auto ok = run({"train", s / "t.pgm", "-o", s / "m.bprt", "--crop"});
    CHECK(ok.code == cli::kOk);
    CHECK(ok.err.find("crop") != std::string::npos);
    CHECK(load_model(read_file(s / "m.bprt")).module1.cell_count() == 1);
}

TEST_CASE("train: zero baselines warn, or fail with --warnings-as-errors") {
    Scratch s("warn");
    put_pgm(s / "t.pgm", GrayFrame{4, 2, {204, 204, 255, 255, 204, 204, 255, 255}});
    const auto soft = run({"train", s / "t.pgm", "-o", s / "m.bprt"});
    CHECK(soft.code == cli::kOk);
    CHECK(soft.err.find("warning") != std::string::npos);
    const auto hard = run({"train", s / "t.pgm", "-o", s / "m2.bprt", "--warnings-as-errors"});
    CHECK(hard.code == cli::kDataError);
}

TEST_CASE("train: programmed weights") {
    Scratch s("prog");
    put_pgm(s / "t.pgm", to_gray(scenario::dual_template()));
    REQUIRE(run({"train", s / "t.pgm", "-o", s / "m.bprt", "--program"}).code == cli::kOk);
    const auto m = load_model(read_file(s / "m.bprt"));
    for (double g : m.module1.weights) {
        const double target = g > 1e-6 ? 1e-5 : 1e-7;
        CHECK(g != target);
        CHECK(std::abs(g - target) <= 0.01 * target);
    }
    const auto fail = run({"train", s / "t.pgm", "-o", s / "m2.bprt", "--program", "--pulse-max", "2"});
    CHECK(fail.code == cli::kDataError);
    CHECK(fail.err.find("cell (") != std::string::npos);
}

TEST_CASE("detect: unchanged, two changed cells, and directory errors") {
    Scratch s("detect");
    put_pgm(s / "t.pgm", to_gray(scenario::dual_template()));
    put_pgm(s / "frames/a.pgm", to_gray(scenario::dual_template()));
    put_pgm(s / "frames/b.pgm", to_gray(scenario::dual_test()));
    REQUIRE(run({"train", s / "t.pgm", "-o", s / "m.bprt"}).code == cli::kOk);

    const auto r = run({"detect", s / "m.bprt", s / "frames", "--out-dir", s / "out", "--overlay", "--json",
                        s / "d.json"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find("a.pgm s_g=1 changed=0") != std::string::npos);
    CHECK(r.out.find("b.pgm s_g=0.5 changed=2") != std::string::npos);
    const auto map = load_pgm(read_file(s / "out/b.change.pgm"));
    CHECK(map.pixels == std::vector<std::uint8_t>{0, 0, 255, 255});
    CHECK(fs::exists(s / "out/b.overlay.ppm"));
    const auto j = nlohmann::json::parse(read_file(s / "d.json"));
    CHECK(j["frames"][1]["changed"] == 2);

    put_pgm(s / "frames/c.pgm", GrayFrame{2, 2, {0, 0, 0, 0}});
    const auto partial = run({"detect", s / "m.bprt", s / "frames", "--out-dir", s / "out2"});
    CHECK(partial.code == cli::kDataError);
    CHECK(partial.out.find("b.pgm s_g=0.5 changed=2") != std::string::npos);
    CHECK(partial.err.find("c.pgm") != std::string::npos);
    CHECK(fs::exists(s / "out2/b.change.pgm"));

    CHECK(run({"detect", s / "missing.bprt", s / "frames"}).code == cli::kDataError);
}

TEST_CASE("detect: 352x288 frame gives a 176x144 map") {
    Scratch s("cif");
    put_pgm(s / "t.pgm", GrayFrame{352, 288, std::vector<std::uint8_t>(352 * 288, 90)});
    REQUIRE(run({"train", s / "t.pgm", "-o", s / "m.bprt"}).code == cli::kOk);
    REQUIRE(run({"detect", s / "m.bprt", s / "t.pgm", "--out-dir", s / "out"}).code == cli::kOk);
    const auto map = load_pgm(read_file(s / "out/t.change.pgm"));
    CHECK(map.width == 176);
    CHECK(map.height == 144);
}

TEST_CASE("eval: perfect synthetic detector, swapped truth, and errors") {
    Scratch s("eval");
    const std::string seq = synth(s);
    REQUIRE(run({"train", seq + "/template.pgm", "-o", s / "m.bprt"}).code == cli::kOk);

    const auto r = run({"eval", s / "m.bprt", seq + "/frames", seq + "/truth", "--json", s / "e.json"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find("positive_likelihood=inf") != std::string::npos);
    const auto j = nlohmann::json::parse(read_file(s / "e.json"));
    for (const char* key : {"sensitivity", "specificity", "precision", "f_measure", "accuracy"})
        CHECK(j["cell_metrics"][key] == 1.0);
    CHECK(j["cell_metrics"]["positive_likelihood"] == "inf");
    CHECK(j["cell_metrics"]["youden"] == 1.0);

    // Inverting every truth map swaps the roles of the two classes. A
    // lowered t_a on a textured sequence gives nonzero counts everywhere.
    const std::string noisy = s / "noisy";
    REQUIRE(run({"synth", "--out-dir", noisy, "--frames", "4", "--texture", "20", "--noise", "10"}).code == cli::kOk);
    REQUIRE(run({"train", noisy + "/template.pgm", "-o", s / "n.bprt", "--ta", "0.3"}).code == cli::kOk);
    REQUIRE(run({"eval", s / "n.bprt", noisy + "/frames", noisy + "/truth", "--json", s / "n.json"}).code == cli::kOk);
    const auto jn = nlohmann::json::parse(read_file(s / "n.json"));
    for (const auto& f : list_frames(noisy + "/truth")) {
        auto g = load_pgm(read_file(f));
        for (auto& p : g.pixels) p = static_cast<std::uint8_t>(255 - p);
        put_pgm(s / ("inv/" + f.filename().string()), g);
    }
    const auto inv = run({"eval", s / "n.bprt", noisy + "/frames", s / "inv", "--json", s / "i.json"});
    REQUIRE(inv.code == cli::kOk);
    const auto ji = nlohmann::json::parse(read_file(s / "i.json"));
    CHECK(ji["cell_counts"]["tp"] == jn["cell_counts"]["fp"]);
    CHECK(ji["cell_counts"]["fp"] == jn["cell_counts"]["tp"]);
    CHECK(ji["cell_counts"]["tn"] == jn["cell_counts"]["fn"]);
    CHECK(ji["cell_counts"]["fn"] == jn["cell_counts"]["tn"]);
    CHECK(ji["cell_metrics"]["sensitivity"].get<double>() ==
          doctest::Approx(jn["cell_metrics"]["false_positive_rate"].get<double>()));
    CHECK(ji["cell_metrics"]["specificity"].get<double>() ==
          doctest::Approx(jn["cell_metrics"]["false_negative_rate"].get<double>()));

    // All-unchanged truth: no positive class.
    for (const auto& f : list_frames(seq + "/truth")) {
        put_pgm(s / ("empty/" + f.filename().string()), GrayFrame{32, 24, std::vector<std::uint8_t>(32 * 24, 255)});
    }
    const auto empty = run({"eval", s / "m.bprt", seq + "/frames", s / "empty"});
    CHECK(empty.code == cli::kDataError);
    CHECK(empty.err.find("positive") != std::string::npos);

    fs::remove(seq + "/truth/frame_0002.pgm");
    const auto missing = run({"eval", s / "m.bprt", seq + "/frames", seq + "/truth"});
    CHECK(missing.code == cli::kDataError);
    CHECK(missing.err.find("frame_0002.pgm") != std::string::npos);
}

TEST_CASE("roc: grids") {
    Scratch s("roc");
    const std::string seq = synth(s);
    const auto r = run({"roc", seq + "/frames", seq + "/truth", "--template", seq + "/template.pgm", "--thresholds",
                        "0,0.5,1", "--json", s / "r.json"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out == "t_a=0 fpr=1 tpr=1\nt_a=0.5 fpr=0 tpr=1\nt_a=1 fpr=0 tpr=0\n");
    const auto j = nlohmann::json::parse(read_file(s / "r.json"));
    CHECK(j.size() == 3);

    const auto zero = run({"roc", seq + "/frames", seq + "/truth", "--template-from-first", "--thresholds", "0"});
    CHECK(zero.code == cli::kOk);
    CHECK(zero.out == "t_a=0 fpr=1 tpr=1\n");

    const auto blob = run({"roc", seq + "/frames", seq + "/truth", "--template", seq + "/template.pgm",
                           "--thresholds", "0.5", "--blob"});
    CHECK(blob.out == "t_a=0.5 fpr=0 tpr=1\n");

    CHECK(run({"roc", seq + "/frames", seq + "/truth", "--template", seq + "/template.pgm", "--thresholds", ""}).code ==
          cli::kUsage);
    CHECK(run({"roc", seq + "/frames", seq + "/truth", "--thresholds", "0.5"}).code == cli::kUsage);
}

TEST_CASE("netlist command matches the library export") {
    Scratch s("netlist");
    put_pgm(s / "t.pgm", to_gray(scenario::dual_template()));
    REQUIRE(run({"train", s / "t.pgm", "-o", s / "m.bprt"}).code == cli::kOk);
    const auto r = run({"netlist", s / "m.bprt"});
    REQUIRE(r.code == cli::kOk);
    const std::string expected = export_netlist(load_model(read_file(s / "m.bprt")));
    CHECK(r.out == expected);
    REQUIRE(run({"netlist", s / "m.bprt", "-o", s / "n.sp"}).code == cli::kOk);
    CHECK(read_file(s / "n.sp") == expected);
}

TEST_CASE("outputs are identical regardless of --threads") {
    Scratch s("threads");
    const std::string seq = synth(s, {"--texture", "20", "--noise", "6"});
    auto all = [&](const std::string& tag, const std::string& threads) {
        const std::string model = s / ("m" + tag);
        REQUIRE(run({"train", seq + "/template.pgm", "-o", model, "--threads", threads}).code == cli::kOk);
        const auto d = run({"detect", model, seq + "/frames", "--out-dir", s / ("o" + tag), "--overlay", "--threads",
                            threads});
        const auto e = run({"eval", model, seq + "/frames", seq + "/truth", "--threads", threads});
        const auto r = run({"roc", seq + "/frames", seq + "/truth", "--template-from-first", "--thresholds",
                            "0.2,0.4,0.5,0.6", "--threads", threads});
        std::string maps;
        for (const auto& f : fs::directory_iterator(s / ("o" + tag))) maps += f.path().filename().string();
        for (const auto& f : list_frames(s / ("o" + tag))) maps += read_file(f);
        return read_file(model) + d.out + e.out + r.out + maps;
    };
    CHECK(all("1", "1") == all("4", "4"));
}
