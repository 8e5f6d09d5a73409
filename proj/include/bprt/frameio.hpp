#pragma once

#include "bprt/detector.hpp"
#include "bprt/network.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bprt {

struct GrayFrame {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // row-major

    friend bool operator==(const GrayFrame&, const GrayFrame&) = default;
};

// NetPBM P2 or P5 with maxval <= 255. Samples are rescaled to 0..255 when
// maxval is smaller. Throws ParseError carrying the byte offset.
[[nodiscard]] GrayFrame load_pgm(std::string_view bytes);

// Canonical binary P5, maxval 255.
[[nodiscard]] std::string write_pgm(const GrayFrame& frame);

// v = intensity / 255 * v_ref.
[[nodiscard]] VoltageFrame normalize(const GrayFrame& frame, double v_ref);

// Drops trailing rows/columns so both dimensions are multiples of block.
// Throws DimensionError if nothing would remain.
[[nodiscard]] GrayFrame crop_to_multiple(const GrayFrame& frame, std::size_t block);

// One pixel per cell: changed = 0, unchanged = 255.
[[nodiscard]] std::string write_change_map(const ChangeMap& map);

// Inverse of write_change_map for ground-truth files: values below 128 are
// changes.
[[nodiscard]] ChangeMap change_map_from_pgm(const GrayFrame& frame);

// P6 of the frame with every changed block blended 50% with pure red.
[[nodiscard]] std::string overlay(const ChangeMap& map, const GrayFrame& frame);

// Line-oriented "BPRT1" text with a trailing CRC-32 of all preceding bytes.
[[nodiscard]] std::string save_model(const DetectorModel& model);

// Throws VersionError, ChecksumError, DimensionError or ParseError.
[[nodiscard]] DetectorModel load_model(std::string_view bytes);

// SPICE deck: per cell one resistor per weight, a w_0 leg to ground and an
// instance of an empty INV subcircuit.
[[nodiscard]] std::string export_netlist(const DetectorModel& model);

// 17 significant digits, locale independent.
[[nodiscard]] std::string format_real(double value);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

// Regular files with .pgm extension, lexicographic by filename.
[[nodiscard]] std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

} // namespace bprt
