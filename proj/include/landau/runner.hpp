#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "landau/common.hpp"
#include "landau/io.hpp"

namespace landau {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verify_failed = 1;
inline constexpr int usage = 2;
inline constexpr int unknown = 70;
}  // namespace exit_code

// 10 + position of the kind in ErrorKind (domain = 10 ... io = 19).
int exit_code_for(ErrorKind kind);

const std::vector<std::string>& subcommands();

struct RunOptions {
    std::string subcommand;
    std::optional<std::string> scenario_path;  // empty: documented defaults
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    bool override_horizon = false;
    std::optional<std::string> route;  // density: volterra | green | both
    std::vector<std::string> inputs;   // diagnose: snapshot paths or globs
};

struct RunResult {
    int exit_code = 0;
    std::string status;   // complete | failed
    std::string message;  // error text when failed
    std::string out_dir;
    json manifest;
};

// Runs one subcommand end to end. Never throws: module errors become exit
// codes and a manifest with status "failed" plus whatever was written.
RunResult run(const RunOptions& opt);

}  // namespace landau
