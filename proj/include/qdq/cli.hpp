#pragma once

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace qdq::cli {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

/// Process exit codes.
enum ExitCode : int { kOk = 0, kUsageOrDomain = 2, kResourceLimit = 3, kIo = 4 };

/// Uniform envelope written by every command.
struct RunReport {
    std::string command;
    nlohmann::json inputs;
    nlohmann::json outputs;
    std::optional<std::uint64_t> seed;

    nlohmann::json to_json() const;
    static RunReport from_json(const nlohmann::json& j);

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

struct SimulateArgs {
    std::string circuit_file;
    std::string backend = "statevector";
    std::string mode = "strong";
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
    std::optional<std::size_t> chi_max;
    double trunc_tol = 0.0;
};

struct LinksimArgs {
    std::optional<std::string> config_file;
    std::optional<double> p_gen, slot_duration, tau, f_init, f_min;
    std::optional<std::uint64_t> hold_slots, n_slots, seed;
    std::optional<std::string> stats_csv_file;
};

struct FidelityArgs {
    std::string tool;  // werner-from-p | werner-from-f | decay
    std::optional<double> p, f, dt, tau;
};

struct SuperdenseArgs {
    int a = 0;
    int b = 0;
    std::optional<double> fidelity;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
};

RunReport cmd_simulate(const SimulateArgs& args);
RunReport cmd_linksim(const LinksimArgs& args);
RunReport cmd_fidelity(const FidelityArgs& args);
RunReport cmd_superdense(const SuperdenseArgs& args);

/// Serialized report: two-space indented JSON plus a trailing newline.
std::string render(const RunReport& report);

/**
 * Full command-line entry point. Reports go to `out` (or --output), a single
 * JSON error line goes to `err`, and the return value is the exit code.
 */
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdq::cli
