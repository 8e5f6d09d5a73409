#include "cli.hpp"

#include "bprt/detector.hpp"
#include "bprt/error.hpp"
#include "bprt/frameio.hpp"
#include "bprt/metrics.hpp"
#include "bprt/parallel.hpp"
#include "bprt/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace bprt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
    try {
        if (block < 1) {
            throw ValidationError("--block must be at least 1");
        }
        if (!(v_ref > 0.0) || !std::isfinite(v_ref)) {
            throw ValidationError("--vref must be positive");
        }
        if (threads < 1) {
            throw ValidationError("--threads must be at least 1");
        }
        params.validate();
        if (program) {
            pulse.validate();
            device.validate();
        }
    } catch (const InvalidInput& e) {
        throw ValidationError(e.what());
    }
}

namespace {

// Shortest text that round-trips.
std::string num(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return ec == std::errc() ? std::string(buf.data(), ptr) : std::string("nan");
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(num(v)); }

void add_cell_options(CLI::App& cmd, RunConfig& cfg, bool& soft) {
    cmd.add_option("--block", cfg.block, "Cell side in pixels (cell has block^2 inputs)")->capture_default_str();
    cmd.add_option("--ta", cfg.params.t_a, "Inverter threshold t_a in volts")->capture_default_str();
    cmd.add_option("--wh", cfg.params.w_h, "High-label conductance w_H in siemens")->capture_default_str();
    cmd.add_option("--wl", cfg.params.w_l, "Low-label conductance w_L in siemens")->capture_default_str();
    cmd.add_option("--w0", cfg.params.w_0, "Constant leg conductance w_0 in siemens")->capture_default_str();
    cmd.add_option("--vref", cfg.v_ref, "Voltage of a full-scale (255) pixel")->capture_default_str();
    cmd.add_flag("--soft", soft, "Logistic weights and threshold instead of hard rules");
    cmd.add_option("--b", cfg.params.b, "Logistic steepness for weights (soft mode)")->capture_default_str();
    cmd.add_option("--b1", cfg.params.b1, "Logistic steepness for the threshold (soft mode)")->capture_default_str();
    cmd.add_flag("--program", cfg.program, "Realise weights by simulated memristor programming");
    cmd.add_option("--pulse-amp", cfg.pulse.amplitude, "Programming pulse amplitude in volts")->capture_default_str();
    cmd.add_option("--pulse-width", cfg.pulse.width, "Initial programming pulse width in seconds")
        ->capture_default_str();
    cmd.add_option("--pulse-max", cfg.pulse.max_pulses, "Maximum pulses per device")->capture_default_str();
    cmd.add_option("--pulse-tol", cfg.pulse.tolerance, "Relative conductance tolerance")->capture_default_str();
    cmd.add_option("--r-on", cfg.device.r_on, "Memristor fully doped resistance in ohms")->capture_default_str();
    cmd.add_option("--r-off", cfg.device.r_off, "Memristor fully undoped resistance in ohms")->capture_default_str();
    cmd.add_option("--thickness", cfg.device.d, "Memristor thickness in meters")->capture_default_str();
    cmd.add_option("--mobility", cfg.device.mu_v, "Dopant mobility in m^2/(V s)")->capture_default_str();
}

void add_run_options(CLI::App& cmd, RunConfig& cfg) {
    cmd.add_flag("--crop", cfg.crop, "Crop frames to a multiple of the block size");
    cmd.add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
}

TrainOptions train_options(const RunConfig& cfg) {
    TrainOptions opts;
    opts.threads = cfg.threads;
    if (cfg.program) {
        opts.programming = ProgrammingConfig{cfg.device, cfg.pulse, 0.0};
    }
    return opts;
}

GrayFrame load_gray(const fs::path& path, bool crop, std::size_t block, std::ostream& err) {
    GrayFrame frame = load_pgm(read_file(path));
    if (crop && (frame.width % block != 0 || frame.height % block != 0)) {
        GrayFrame cropped = crop_to_multiple(frame, block);
        err << "warning: " << path.filename().string() << ": cropped " << frame.width << "x" << frame.height
            << " to " << cropped.width << "x" << cropped.height << "\n";
        return cropped;
    }
    return frame;
}

fs::path first_frame(const fs::path& dir) {
    const auto frames = list_frames(dir);
    if (frames.empty()) {
        throw Error("no .pgm frames in '" + dir.string() + "'");
    }
    return frames.front();
}

void write_json(const std::string& path, const json& doc) {
    if (!path.empty()) {
        write_file(path, doc.dump(2) + "\n");
    }
}

json metrics_json(const MetricsReport& r) {
    return json{{"sensitivity", jnum(r.sensitivity)},
                {"specificity", jnum(r.specificity)},
                {"false_positive_rate", jnum(r.false_positive_rate)},
                {"false_negative_rate", jnum(r.false_negative_rate)},
                {"youden", jnum(r.youden)},
                {"precision", jnum(r.precision)},
                {"positive_likelihood", jnum(r.positive_likelihood)},
                {"negative_likelihood", jnum(r.negative_likelihood)},
                {"f_measure", jnum(r.f_measure)},
                {"accuracy", jnum(r.accuracy)}};
}

void print_metrics(std::ostream& out, const MetricsReport& r) {
    out << "sensitivity=" << num(r.sensitivity) << "\n"
        << "specificity=" << num(r.specificity) << "\n"
        << "false_positive_rate=" << num(r.false_positive_rate) << "\n"
        << "false_negative_rate=" << num(r.false_negative_rate) << "\n"
        << "youden=" << num(r.youden) << "\n"
        << "precision=" << num(r.precision) << "\n"
        << "positive_likelihood=" << num(r.positive_likelihood) << "\n"
        << "negative_likelihood=" << num(r.negative_likelihood) << "\n"
        << "f_measure=" << num(r.f_measure) << "\n"
        << "accuracy=" << num(r.accuracy) << "\n";
}

Connectivity parse_connectivity(int c) {
    if (c == 4) return Connectivity::four;
    if (c == 8) return Connectivity::eight;
    throw ValidationError("--connectivity must be 4 or 8");
}

// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string input;
    std::string output;
    std::string json_path;
    bool from_first = false;
    bool warnings_as_errors = false;
};

int cmd_train(const TrainArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    fs::path path = a.input;
    if (fs::is_directory(path)) {
        if (!a.from_first) {
            throw ValidationError("'" + a.input + "' is a directory; pass --template-from-first");
        }
        path = first_frame(path);
    }
    const GrayFrame gray = load_gray(path, cfg.crop, cfg.block, err);
    const VoltageFrame templ = normalize(gray, cfg.v_ref);
    const DetectorTraining trained = train_detector(templ, cfg.block, cfg.params, cfg.v_ref, train_options(cfg));
    write_file(a.output, save_model(trained.model));

    const TrainingReport* reports[] = {&trained.module1_report, &trained.module2_report};
    const TrainedNetwork* nets[] = {&trained.model.module1, &trained.model.module2};
    out << "template " << path.filename().string() << " " << gray.width << "x" << gray.height << " block "
        << cfg.block << "\n";
    json doc{{"template", path.filename().string()},
             {"width", gray.width},
             {"height", gray.height},
             {"block", cfg.block},
             {"modules", json::array()}};
    std::size_t zero = 0;
    for (int m = 0; m < 2; ++m) {
        const auto& cells = reports[m]->zero_baseline_cells;
        zero += cells.size();
        out << "module " << m + 1 << " x_a=" << num(nets[m]->x_a) << " cells=" << nets[m]->cell_count()
            << " zero_baselines=" << cells.size() << "\n";
        json jcells = json::array();
        for (const auto& c : cells) {
            err << "warning: module " << m + 1 << " cell (" << c.col << ", " << c.row
                << ") outputs 0 on its own template\n";
            jcells.push_back({c.col, c.row});
        }
        doc["modules"].push_back(
            {{"x_a", nets[m]->x_a}, {"cells", nets[m]->cell_count()}, {"zero_baseline_cells", jcells}});
    }
    write_json(a.json_path, doc);
    return a.warnings_as_errors && zero > 0 ? kDataError : kOk;
}

struct DetectArgs {
    std::string model;
    std::string input;
    std::string out_dir;
    std::string json_path;
    bool overlay = false;
};

int cmd_detect(const DetectArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const DetectorModel model = load_model(read_file(a.model));
    const std::size_t block = model.module1.block;
    std::vector<fs::path> frames;
    if (fs::is_directory(a.input)) {
        frames = list_frames(a.input);
    } else {
        frames.push_back(a.input);
    }
    if (!a.out_dir.empty()) {
        fs::create_directories(a.out_dir);
    }

    struct FrameResult {
        std::string name;
        std::string error;
        std::string warnings;
        double s_g = 0.0;
        std::size_t changed = 0;
        std::size_t cells_w = 0, cells_h = 0;
    };
    std::vector<FrameResult> results(frames.size());
    parallel_for(frames.size(), cfg.threads, [&](std::size_t i) {
        FrameResult& r = results[i];
        r.name = frames[i].filename().string();
        try {
            std::ostringstream warn;
            const GrayFrame gray = load_gray(frames[i], cfg.crop, block, warn);
            r.warnings = warn.str();
            const ChangeMap map = detect(model, normalize(gray, model.v_ref));
            r.s_g = merged_similarity(map);
            r.changed = map.count();
            r.cells_w = map.cells_w;
            r.cells_h = map.cells_h;
            if (!a.out_dir.empty()) {
                const std::string stem = frames[i].stem().string();
                write_file(fs::path(a.out_dir) / (stem + ".change.pgm"), write_change_map(map));
                if (a.overlay) {
                    write_file(fs::path(a.out_dir) / (stem + ".overlay.ppm"), overlay(map, gray));
                }
            }
        } catch (const Error& e) {
            r.error = e.what();
        }
    });

    int status = kOk;
    json doc{{"frames", json::array()}};
    for (const auto& r : results) {
        err << r.warnings;
        if (!r.error.empty()) {
            err << r.name << " error: " << r.error << "\n";
            doc["frames"].push_back({{"frame", r.name}, {"error", r.error}});
            status = kDataError;
            continue;
        }
        out << r.name << " s_g=" << num(r.s_g) << " changed=" << r.changed << "\n";
        doc["frames"].push_back({{"frame", r.name},
                                 {"s_g", r.s_g},
                                 {"changed", r.changed},
                                 {"cells_w", r.cells_w},
                                 {"cells_h", r.cells_h}});
    }
    write_json(a.json_path, doc);
    return status;
}

struct EvalArgs {
    std::string model;
    std::string frames;
    std::string truth;
    std::string json_path;
    double iou = 0.5;
    int connectivity = 4;
};

int cmd_eval(const EvalArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Connectivity conn = parse_connectivity(a.connectivity);
    const DetectorModel model = load_model(read_file(a.model));
    const std::size_t block = model.module1.block;
    const auto frames = list_frames(a.frames);
    for (const auto& f : frames) {
        if (!fs::exists(fs::path(a.truth) / f.filename())) {
            throw Error("missing ground truth for " + f.filename().string() + " in '" + a.truth + "'");
        }
    }

    struct Partial {
        CellCounts cells;
        BlobMatch blobs;
        std::string warnings;
    };
    std::vector<Partial> partial(frames.size());
    parallel_for(frames.size(), cfg.threads, [&](std::size_t i) {
        std::ostringstream warn;
        const GrayFrame gray = load_gray(frames[i], cfg.crop, block, warn);
        const ChangeMap predicted = detect(model, normalize(gray, model.v_ref));
        const ChangeMap truth = change_map_from_pgm(load_pgm(read_file(fs::path(a.truth) / frames[i].filename())));
        partial[i] = {count_cells(predicted, truth), match_blobs(predicted, truth, a.iou, conn), warn.str()};
    });

    ConfusionCounts counts;
    BlobMatch blobs;
    for (const auto& p : partial) {
        err << p.warnings;
        counts.tp += p.cells.tp;
        counts.fp += p.cells.fp;
        counts.tn += p.cells.tn;
        counts.fn += p.cells.fn;
        blobs.truth_blobs += p.blobs.truth_blobs;
        blobs.detected += p.blobs.detected;
        blobs.predicted_blobs += p.blobs.predicted_blobs;
        blobs.false_blobs += p.blobs.false_blobs;
    }
    const MetricsReport report = metrics_from_counts(counts);

    const auto ratio = [](std::size_t n, std::size_t d) {
        return d == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(n) / static_cast<double>(d);
    };
    const double blob_recall = ratio(blobs.detected, blobs.truth_blobs);
    const double blob_precision = ratio(blobs.predicted_blobs - blobs.false_blobs, blobs.predicted_blobs);

    out << "frames=" << frames.size() << "\n";
    out << "tp=" << counts.tp << " fp=" << counts.fp << " tn=" << counts.tn << " fn=" << counts.fn << "\n";
    print_metrics(out, report);
    out << "blob_truth=" << blobs.truth_blobs << " blob_detected=" << blobs.detected
        << " blob_predicted=" << blobs.predicted_blobs << " blob_false=" << blobs.false_blobs << "\n";
    out << "blob_recall=" << num(blob_recall) << " blob_precision=" << num(blob_precision) << "\n";

    json doc{{"frames", frames.size()},
             {"cell_counts", {{"tp", counts.tp}, {"fp", counts.fp}, {"tn", counts.tn}, {"fn", counts.fn}}},
             {"cell_metrics", metrics_json(report)},
             {"blob",
              {{"truth_blobs", blobs.truth_blobs},
               {"detected", blobs.detected},
               {"predicted_blobs", blobs.predicted_blobs},
               {"false_blobs", blobs.false_blobs},
               {"recall", jnum(blob_recall)},
               {"precision", jnum(blob_precision)},
               {"iou_threshold", a.iou}}}};
    write_json(a.json_path, doc);
    return kOk;
}

struct RocArgs {
    std::string frames;
    std::string truth;
    std::string templ;
    std::string json_path;
    std::string thresholds;
    bool from_first = false;
    bool blobs = false;
    double iou = 0.5;
    int connectivity = 4;
};

// "0,0.25,0.5" -> values. Empty lists, empty entries and negative or
// non-numeric values are usage errors.
std::vector<double> parse_thresholds(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        const std::string_view token = std::string_view(text).substr(start, end - start);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v) || v < 0) {
            throw ValidationError("--thresholds: bad value '" + std::string(token) + "' in '" + text + "'");
        }
        out.push_back(v);
        start = end + 1;
    }
    return out;
}

int cmd_roc(const RocArgs& a, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (a.thresholds.empty()) {
        throw ValidationError("--thresholds needs at least one value");
    }
    const std::vector<double> thresholds = parse_thresholds(a.thresholds);
    if (a.templ.empty() == !a.from_first) {
        throw ValidationError("pass exactly one of --template or --template-from-first");
    }
    const Connectivity conn = parse_connectivity(a.connectivity);
    const fs::path templ_path = a.from_first ? first_frame(a.frames) : fs::path(a.templ);
    const VoltageFrame templ = normalize(load_gray(templ_path, cfg.crop, cfg.block, err), cfg.v_ref);

    std::vector<LabeledFrame> tests;
    for (const auto& f : list_frames(a.frames)) {
        const fs::path truth_path = fs::path(a.truth) / f.filename();
        if (!fs::exists(truth_path)) {
            throw Error("missing ground truth for " + f.filename().string() + " in '" + a.truth + "'");
        }
        tests.push_back({normalize(load_gray(f, cfg.crop, cfg.block, err), cfg.v_ref),
                         change_map_from_pgm(load_pgm(read_file(truth_path)))});
    }

    RocOptions opts;
    opts.counting = a.blobs ? RocCounting::blobs : RocCounting::cells;
    opts.iou_threshold = a.iou;
    opts.connectivity = conn;
    opts.threads = cfg.threads;
    const auto points = roc_sweep(templ, tests, thresholds, cfg.block, cfg.params, cfg.v_ref, opts);

    json doc = json::array();
    for (const auto& p : points) {
        out << "t_a=" << num(p.t_a) << " fpr=" << num(p.fpr) << " tpr=" << num(p.tpr) << "\n";
        doc.push_back({{"t_a", p.t_a}, {"fpr", p.fpr}, {"tpr", p.tpr}});
    }
    write_json(a.json_path, doc);
    return kOk;
}

struct NetlistArgs {
    std::string model;
    std::string output;
};

int cmd_netlist(const NetlistArgs& a, std::ostream& out) {
    const std::string deck = export_netlist(load_model(read_file(a.model)));
    if (a.output.empty()) {
        out << deck;
    } else {
        write_file(a.output, deck);
    }
    return kOk;
}

int cmd_synth(const SyntheticConfig& sc, const std::string& dir, std::ostream& out) {
    const SyntheticSequence seq = make_synthetic_sequence(sc);
    const fs::path root(dir);
    fs::create_directories(root / "frames");
    fs::create_directories(root / "truth");
    write_file(root / "template.pgm", write_pgm(seq.templ));
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        std::array<char, 32> name{};
        std::snprintf(name.data(), name.size(), "frame_%04zu.pgm", i);
        write_file(root / "frames" / name.data(), write_pgm(seq.frames[i]));
        write_file(root / "truth" / name.data(), write_change_map(seq.truths[i]));
    }
    out << "wrote template and " << seq.frames.size() << " frames to " << root.string() << "\n";
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Memristive threshold-logic change detector"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "bprt 1.0");

    RunConfig cfg;
    bool soft = false;

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Train both modules on a template frame");
    train_cmd->add_option("template", train.input, "Template PGM, or a frame directory")->required();
    train_cmd->add_option("-o,--output", train.output, "Model file to write")->required();
    train_cmd->add_flag("--template-from-first", train.from_first, "Use the first frame of a directory");
    train_cmd->add_flag("--warnings-as-errors", train.warnings_as_errors, "Exit 2 when a baseline is 0");
    train_cmd->add_option("--json", train.json_path, "Write the training report as JSON");
    add_cell_options(*train_cmd, cfg, soft);
    add_run_options(*train_cmd, cfg);

    DetectArgs det;
    auto* detect_cmd = app.add_subcommand("detect", "Detect changes in frames against a model");
    detect_cmd->add_option("model", det.model, "Model file")->required();
    detect_cmd->add_option("frames", det.input, "Frame PGM or directory")->required();
    detect_cmd->add_option("--out-dir", det.out_dir, "Directory for change maps");
    detect_cmd->add_flag("--overlay", det.overlay, "Also write red overlays (PPM)");
    detect_cmd->add_option("--json", det.json_path, "Write the report as JSON");
    add_run_options(*detect_cmd, cfg);

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "Score detections against ground-truth change maps");
    eval_cmd->add_option("model", ev.model, "Model file")->required();
    eval_cmd->add_option("frames", ev.frames, "Frame directory")->required();
    eval_cmd->add_option("truth", ev.truth, "Ground-truth directory (same filenames)")->required();
    eval_cmd->add_option("--json", ev.json_path, "Write the metrics as JSON");
    eval_cmd->add_option("--iou", ev.iou, "Blob IoU match threshold")->capture_default_str();
    eval_cmd->add_option("--connectivity", ev.connectivity, "Blob connectivity (4 or 8)")->capture_default_str();
    add_run_options(*eval_cmd, cfg);

    RocArgs roc;
    auto* roc_cmd = app.add_subcommand("roc", "Sweep t_a and report ROC points");
    roc_cmd->add_option("frames", roc.frames, "Frame directory")->required();
    roc_cmd->add_option("truth", roc.truth, "Ground-truth directory")->required();
    roc_cmd->add_option("--template", roc.templ, "Template PGM");
    roc_cmd->add_flag("--template-from-first", roc.from_first, "Use the first frame as template");
    roc_cmd->add_option("--thresholds", roc.thresholds, "Comma-separated t_a grid")->required();
    roc_cmd->add_flag("--blob", roc.blobs, "Blob-level true positive rate");
    roc_cmd->add_option("--iou", roc.iou, "Blob IoU match threshold")->capture_default_str();
    roc_cmd->add_option("--connectivity", roc.connectivity, "Blob connectivity (4 or 8)")->capture_default_str();
    roc_cmd->add_option("--json", roc.json_path, "Write the points as JSON");
    add_cell_options(*roc_cmd, cfg, soft);
    add_run_options(*roc_cmd, cfg);

    NetlistArgs nl;
    auto* netlist_cmd = app.add_subcommand("netlist", "Export the programmed network as a SPICE deck");
    netlist_cmd->add_option("model", nl.model, "Model file")->required();
    netlist_cmd->add_option("-o,--output", nl.output, "Output file (default stdout)");

    SyntheticConfig sc;
    std::string synth_dir;
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic moving-object sequence");
    synth_cmd->add_option("--out-dir", synth_dir, "Output directory")->required();
    synth_cmd->add_option("--width", sc.width)->capture_default_str();
    synth_cmd->add_option("--height", sc.height)->capture_default_str();
    synth_cmd->add_option("--block", sc.block)->capture_default_str();
    synth_cmd->add_option("--frames", sc.frames)->capture_default_str();
    synth_cmd->add_option("--objects", sc.objects)->capture_default_str();
    synth_cmd->add_option("--object-cells", sc.object_cells)->capture_default_str();
    synth_cmd->add_option("--background", sc.background)->capture_default_str();
    synth_cmd->add_option("--texture", sc.texture)->capture_default_str();
    synth_cmd->add_option("--noise", sc.noise)->capture_default_str();
    synth_cmd->add_option("--seed", sc.seed)->capture_default_str();

    std::vector<std::string> argv_store{"bprt"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) {
        argv.push_back(s.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << "bprt 1.0\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        cfg.params.mode = soft ? ThresholdMode::soft : ThresholdMode::hard;
        cfg.validate();
        if (*train_cmd) return cmd_train(train, cfg, out, err);
        if (*detect_cmd) return cmd_detect(det, cfg, out, err);
        if (*eval_cmd) return cmd_eval(ev, cfg, out, err);
        if (*roc_cmd) return cmd_roc(roc, cfg, out, err);
        if (*netlist_cmd) return cmd_netlist(nl, out);
        if (*synth_cmd) return cmd_synth(sc, synth_dir, out);
        throw InvariantViolation("no subcommand dispatched");
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

} // namespace bprt::cli
