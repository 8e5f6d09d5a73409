#include "bprt/frameio.hpp"

#include "bprt/error.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bprt {

namespace fs = std::filesystem;

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

// Cursor over a NetPBM header: whitespace and '#' comments between tokens.
class PnmCursor {
public:
    explicit PnmCursor(std::string_view bytes) : bytes_(bytes) {}

    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    unsigned long read_uint(const char* what) {
        skip_separators();
        const std::size_t start = pos_;
        token_start_ = start;
        unsigned long value = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
            if (value > 1'000'000'000UL) {
                throw ParseError(std::string("PGM: ") + what + " too large", start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw ParseError(std::string("PGM: expected ") + what, start);
        }
        if (pos_ < bytes_.size() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') {
            throw ParseError(std::string("PGM: malformed ") + what, pos_);
        }
        return value;
    }

    [[nodiscard]] std::size_t pos() const { return pos_; }
    [[nodiscard]] std::size_t token_start() const { return token_start_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
    std::size_t token_start_ = 0;
};

std::uint8_t rescale(unsigned long v, unsigned long maxval) {
    if (maxval == 255) {
        return static_cast<std::uint8_t>(v);
    }
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
}

std::string pnm_header(const char* magic, std::size_t w, std::size_t h) {
    return std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
}

std::uint32_t crc32_of(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
    return static_cast<std::uint32_t>(crc);
}

// Line reader that remembers byte offsets for diagnostics.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    [[nodiscard]] bool done() const { return pos_ >= text_.size(); }
    [[nodiscard]] std::size_t pos() const { return pos_; }

    std::string_view next(const char* expected) {
        if (done()) {
            throw DimensionError(std::string("model file truncated: expected ") + expected);
        }
        line_start_ = pos_;
        const std::size_t nl = text_.find('\n', pos_);
        std::string_view line;
        if (nl == std::string_view::npos) {
            line = text_.substr(pos_);
            pos_ = text_.size();
        } else {
            line = text_.substr(pos_, nl - pos_);
            pos_ = nl + 1;
        }
        return line;
    }

    [[nodiscard]] std::size_t line_start() const { return line_start_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
};

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ') ++i;
        if (i > start) words.push_back(line.substr(start, i - start));
    }
    return words;
}

double parse_real(std::string_view token, std::size_t offset) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError("model file: bad number '" + std::string(token) + "'", offset);
    }
    return value;
}

std::size_t parse_count(std::string_view token, std::size_t offset) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError("model file: bad integer '" + std::string(token) + "'", offset);
    }
    return value;
}

std::vector<std::string_view> keyed_line(LineReader& in, std::string_view key, std::size_t values) {
    const auto line = in.next(std::string(key).c_str());
    auto words = split_words(line);
    if (words.empty() || words[0] != key) {
        throw ParseError("model file: expected '" + std::string(key) + "'", in.line_start());
    }
    if (words.size() != values + 1) {
        throw DimensionError("model file: '" + std::string(key) + "' expects " + std::to_string(values) + " values");
    }
    words.erase(words.begin());
    return words;
}

void write_module(std::string& out, int index, const TrainedNetwork& net) {
    out += "module " + std::to_string(index) + "\n";
    out += "xa " + format_real(net.x_a) + "\n";
    out += "weights\n";
    const std::size_t n = net.inputs_per_cell();
    for (std::size_t row = 0; row < net.cells_h; ++row) {
        for (std::size_t col = 0; col < net.cells_w; ++col) {
            const auto w = net.cell_weights(row * net.cells_w + col);
            for (std::size_t i = 0; i < n; ++i) {
                if (col != 0 || i != 0) out += ' ';
                out += format_real(w[i]);
            }
        }
        out += '\n';
    }
    out += "baselines\n";
    for (std::size_t row = 0; row < net.cells_h; ++row) {
        for (std::size_t col = 0; col < net.cells_w; ++col) {
            if (col != 0) out += ' ';
            out += net.baselines[row * net.cells_w + col] ? '1' : '0';
        }
        out += '\n';
    }
}

TrainedNetwork read_module(LineReader& in, int index, std::size_t block, std::size_t cells_w, std::size_t cells_h,
                           const CellParams& params) {
    const auto id = keyed_line(in, "module", 1);
    if (parse_count(id[0], in.line_start()) != static_cast<std::size_t>(index)) {
        throw ParseError("model file: expected module " + std::to_string(index), in.line_start());
    }
    TrainedNetwork net;
    net.block = block;
    net.cells_w = cells_w;
    net.cells_h = cells_h;
    net.params = params;
    net.x_a = parse_real(keyed_line(in, "xa", 1)[0], in.line_start());

    keyed_line(in, "weights", 0);
    const std::size_t n = net.inputs_per_cell();
    net.weights.reserve(cells_w * cells_h * n);
    for (std::size_t row = 0; row < cells_h; ++row) {
        const auto line = in.next("weight row");
        const auto words = split_words(line);
        if (words.size() != cells_w * n || (!words.empty() && words[0] == "baselines")) {
            throw DimensionError("model file: weight row " + std::to_string(row) + " of module " +
                                 std::to_string(index) + " has " + std::to_string(words.size()) + " values, expected " +
                                 std::to_string(cells_w * n));
        }
        for (auto w : words) {
            const double g = parse_real(w, in.line_start());
            if (!(g > 0.0) || !std::isfinite(g)) {
                throw ParseError("model file: conductance must be positive", in.line_start());
            }
            net.weights.push_back(g);
        }
    }

    keyed_line(in, "baselines", 0);
    net.baselines.reserve(cells_w * cells_h);
    for (std::size_t row = 0; row < cells_h; ++row) {
        const auto words = split_words(in.next("baseline row"));
        if (words.size() != cells_w) {
            throw DimensionError("model file: baseline row " + std::to_string(row) + " of module " +
                                 std::to_string(index) + " has " + std::to_string(words.size()) + " values");
        }
        for (auto w : words) {
            if (w != "0" && w != "1") {
                throw ParseError("model file: baseline must be 0 or 1", in.line_start());
            }
            net.baselines.push_back(w == "1" ? 1 : 0);
        }
    }
    return net;
}

} // namespace

GrayFrame load_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw ParseError("PGM: expected magic P2 or P5", 0);
    }
    const bool binary = bytes[1] == '5';
    PnmCursor cur(bytes);
    cur.advance(2);
    if (cur.pos() < bytes.size() && !is_space(bytes[cur.pos()]) && bytes[cur.pos()] != '#') {
        throw ParseError("PGM: malformed magic", cur.pos());
    }

    GrayFrame frame;
    frame.width = cur.read_uint("width");
    if (frame.width == 0) {
        throw ParseError("PGM: zero width", cur.token_start());
    }
    frame.height = cur.read_uint("height");
    if (frame.height == 0) {
        throw ParseError("PGM: zero height", cur.token_start());
    }
    const unsigned long maxval = cur.read_uint("maxval");
    const std::size_t maxval_at = cur.token_start();
    if (maxval == 0 || maxval > 255) {
        throw ParseError("PGM: maxval must be in 1..255, got " + std::to_string(maxval), maxval_at);
    }

    const std::size_t count = frame.width * frame.height;
    frame.pixels.resize(count);
    if (binary) {
        // Exactly one whitespace byte separates maxval from the raster.
        if (cur.pos() >= bytes.size() || !is_space(bytes[cur.pos()])) {
            throw ParseError("PGM: missing whitespace before raster", cur.pos());
        }
        cur.advance(1);
        if (bytes.size() - cur.pos() < count) {
            throw ParseError("PGM: truncated raster, expected " + std::to_string(count) + " bytes, found " +
                                 std::to_string(bytes.size() - cur.pos()),
                             bytes.size());
        }
        for (std::size_t i = 0; i < count; ++i) {
            const auto v = static_cast<std::uint8_t>(bytes[cur.pos() + i]);
            if (v > maxval) {
                throw ParseError("PGM: sample exceeds maxval", cur.pos() + i);
            }
            frame.pixels[i] = rescale(v, maxval);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            cur.skip_separators();
            if (cur.pos() >= bytes.size()) {
                throw ParseError("PGM: truncated raster, expected " + std::to_string(count) + " samples, found " +
                                     std::to_string(i),
                                 cur.pos());
            }
            const std::size_t at = cur.pos();
            const unsigned long v = cur.read_uint("sample");
            if (v > maxval) {
                throw ParseError("PGM: sample exceeds maxval", at);
            }
            frame.pixels[i] = rescale(v, maxval);
        }
    }
    return frame;
}

std::string write_pgm(const GrayFrame& frame) {
    std::string out = pnm_header("P5", frame.width, frame.height);
    out.append(frame.pixels.begin(), frame.pixels.end());
    return out;
}

VoltageFrame normalize(const GrayFrame& frame, double v_ref) {
    if (!(v_ref > 0.0) || !std::isfinite(v_ref)) {
        throw InvalidInput("v_ref must be positive");
    }
    std::vector<double> v;
    v.reserve(frame.pixels.size());
    for (auto p : frame.pixels) {
        v.push_back(static_cast<double>(p) / 255.0 * v_ref);
    }
    return VoltageFrame(frame.width, frame.height, std::move(v));
}

GrayFrame crop_to_multiple(const GrayFrame& frame, std::size_t block) {
    if (block < 1) {
        throw DimensionError("block size must be at least 1");
    }
    GrayFrame out;
    out.width = frame.width / block * block;
    out.height = frame.height / block * block;
    if (out.width == 0 || out.height == 0) {
        throw DimensionError("frame smaller than one block");
    }
    out.pixels.reserve(out.width * out.height);
    for (std::size_t r = 0; r < out.height; ++r) {
        const auto row = frame.pixels.begin() + static_cast<std::ptrdiff_t>(r * frame.width);
        out.pixels.insert(out.pixels.end(), row, row + static_cast<std::ptrdiff_t>(out.width));
    }
    return out;
}

std::string write_change_map(const ChangeMap& map) {
    std::string out = pnm_header("P5", map.cells_w, map.cells_h);
    for (auto c : map.changed) {
        out += static_cast<char>(c ? 0 : 255);
    }
    return out;
}

ChangeMap change_map_from_pgm(const GrayFrame& frame) {
    ChangeMap map;
    map.cells_w = frame.width;
    map.cells_h = frame.height;
    map.changed.reserve(frame.pixels.size());
    for (auto p : frame.pixels) {
        map.changed.push_back(p < 128 ? 1 : 0);
    }
    return map;
}

std::string overlay(const ChangeMap& map, const GrayFrame& frame) {
    if (map.cells_w == 0 || map.cells_h == 0 || frame.width % map.cells_w != 0 ||
        frame.height % map.cells_h != 0 || frame.width / map.cells_w != frame.height / map.cells_h) {
        throw DimensionError("overlay: change map does not tile the frame");
    }
    const std::size_t block = frame.width / map.cells_w;
    std::string out = pnm_header("P6", frame.width, frame.height);
    out.reserve(out.size() + frame.pixels.size() * 3);
    for (std::size_t r = 0; r < frame.height; ++r) {
        for (std::size_t c = 0; c < frame.width; ++c) {
            const unsigned g = frame.pixels[r * frame.width + c];
            if (map.at(c / block, r / block)) {
                out += static_cast<char>((g + 255 + 1) / 2);
                out += static_cast<char>((g + 1) / 2);
                out += static_cast<char>((g + 1) / 2);
            } else {
                out.append(3, static_cast<char>(g));
            }
        }
    }
    return out;
}

std::string format_real(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    if (ec != std::errc()) {
        throw InvariantViolation("format_real: buffer too small");
    }
    return std::string(buf.data(), ptr);
}

std::string save_model(const DetectorModel& model) {
    const TrainedNetwork& m1 = model.module1;
    const CellParams& p = m1.params;
    std::string out = "BPRT1\n";
    out += "dims " + std::to_string(m1.cells_w * m1.block) + " " + std::to_string(m1.cells_h * m1.block) + " " +
           std::to_string(m1.block) + "\n";
    out += "vref " + format_real(model.v_ref) + "\n";
    out += "params " + format_real(p.w_h) + " " + format_real(p.w_l) + " " + format_real(p.w_0) + " " +
           format_real(p.t_a) + " " + format_real(p.b) + " " + format_real(p.b1) + "\n";
    out += std::string("mode ") + (p.mode == ThresholdMode::hard ? "hard" : "soft") + "\n";
    write_module(out, 1, model.module1);
    write_module(out, 2, model.module2);

    std::array<char, 16> hex{};
    std::snprintf(hex.data(), hex.size(), "%08x", crc32_of(out));
    out += "crc32 ";
    out += hex.data();
    out += '\n';
    return out;
}

DetectorModel load_model(std::string_view bytes) {
    LineReader in(bytes);
    const auto magic = in.next("header");
    if (magic != "BPRT1") {
        if (magic.substr(0, 4) == "BPRT") {
            throw VersionError("model file: unsupported version '" + std::string(magic) + "'");
        }
        throw ParseError("model file: missing BPRT1 header", 0);
    }

    const auto dims = keyed_line(in, "dims", 3);
    const std::size_t width = parse_count(dims[0], in.line_start());
    const std::size_t height = parse_count(dims[1], in.line_start());
    const std::size_t block = parse_count(dims[2], in.line_start());
    if (block == 0 || width == 0 || height == 0 || width % block != 0 || height % block != 0) {
        throw DimensionError("model file: inconsistent dims");
    }

    DetectorModel model;
    model.v_ref = parse_real(keyed_line(in, "vref", 1)[0], in.line_start());

    const auto pv = keyed_line(in, "params", 6);
    CellParams params;
    params.w_h = parse_real(pv[0], in.line_start());
    params.w_l = parse_real(pv[1], in.line_start());
    params.w_0 = parse_real(pv[2], in.line_start());
    params.t_a = parse_real(pv[3], in.line_start());
    params.b = parse_real(pv[4], in.line_start());
    params.b1 = parse_real(pv[5], in.line_start());
    const auto mode = keyed_line(in, "mode", 1)[0];
    if (mode == "hard") {
        params.mode = ThresholdMode::hard;
    } else if (mode == "soft") {
        params.mode = ThresholdMode::soft;
    } else {
        throw ParseError("model file: unknown mode '" + std::string(mode) + "'", in.line_start());
    }
    try {
        params.validate();
    } catch (const InvalidInput& e) {
        throw ParseError(std::string("model file: ") + e.what(), in.line_start());
    }

    const std::size_t cells_w = width / block;
    const std::size_t cells_h = height / block;
    model.module1 = read_module(in, 1, block, cells_w, cells_h, params);
    model.module2 = read_module(in, 2, block, cells_w, cells_h, params);

    const std::size_t crc_at = in.pos();
    const auto crc_words = keyed_line(in, "crc32", 1);
    if (!in.done()) {
        throw ParseError("model file: trailing data after checksum", in.pos());
    }
    std::uint32_t stored = 0;
    const auto token = crc_words[0];
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), stored, 16);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.size() != 8) {
        throw ParseError("model file: malformed checksum", crc_at);
    }
    const std::uint32_t actual = crc32_of(bytes.substr(0, crc_at));
    if (stored != actual) {
        throw ChecksumError("model file: checksum mismatch");
    }
    return model;
}

std::string export_netlist(const DetectorModel& model) {
    const TrainedNetwork& m1 = model.module1;
    std::string out;
    out += "* BPRT dual-module change detector\n";
    out += "* dims " + std::to_string(m1.cells_w * m1.block) + "x" + std::to_string(m1.cells_h * m1.block) +
           " block " + std::to_string(m1.block) + " t_a " + format_real(m1.params.t_a) + " v_ref " +
           format_real(model.v_ref) + "\n";
    out += "* module 1 x_a " + format_real(model.module1.x_a) + "\n";
    out += "* module 2 x_a " + format_real(model.module2.x_a) + "\n";
    out += ".SUBCKT INV in out\n.ENDS INV\n";

    const TrainedNetwork* modules[] = {&model.module1, &model.module2};
    for (int m = 0; m < 2; ++m) {
        const TrainedNetwork& net = *modules[m];
        const std::string tag = "m" + std::to_string(m + 1) + "_";
        const std::string leg = format_real(1.0 / net.params.w_0);
        out += "* module " + std::to_string(m + 1) + "\n";
        for (std::size_t j = 0; j < net.cell_count(); ++j) {
            const std::string cell = tag + std::to_string(j);
            const auto w = net.cell_weights(j);
            for (std::size_t i = 0; i < w.size(); ++i) {
                const std::string pin = cell + "_" + std::to_string(i);
                out += "R_" + pin + " in_" + pin + " mid_" + cell + " " + format_real(1.0 / w[i]) + "\n";
            }
            out += "R0_" + cell + " mid_" + cell + " 0 " + leg + "\n";
            out += "Xinv_" + cell + " mid_" + cell + " out_" + cell + " INV\n";
        }
    }
    out += ".END\n";
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("write failed for '" + path.string() + "'");
    }
}

std::vector<fs::path> list_frames(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw Error("'" + dir.string() + "' is not a directory");
    }
    std::vector<fs::path> frames;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
            frames.push_back(entry.path());
        }
    }
    std::sort(frames.begin(), frames.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    return frames;
}

} // namespace bprt
