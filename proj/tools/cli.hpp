#pragma once

#include "bprt/cell.hpp"
#include "bprt/memristor.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace bprt::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDataError = 2;
inline constexpr int kInternal = 3;

struct RunConfig {
    std::size_t block = 2;
    CellParams params{};
    double v_ref = 1.0;
    bool crop = false;
    bool program = false;
    PulseSpec pulse{};
    MemristorParams device{};
    unsigned threads = 1;

    // Throws ValidationError.
    void validate() const;
};

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bprt::cli
