// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "ddop/pulse_spec.hpp"

namespace ddop::cli {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

enum class OutputFormat { Csv, Json };

struct RunConfig {
    PulseSpec pulse;
    int oversample = 16;
    int zero_pad = 4;
    std::optional<double> band_half_width;  // default 5M/T
    std::string output_path;                // empty writes to stdout
    OutputFormat output_format = OutputFormat::Csv;
    double tolerance = 2.0;                 // percent

    double band() const;
    void validate() const;
};

// Keys: pulse (object of PulseSpec fields), oversample, zero_pad,
// band_half_width, output_path, output_format, tolerance. Unknown keys are
// rejected.
RunConfig run_config_from_json(const nlohmann::json& j);

// Entry point behind the `ddop` binary; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ddop::cli
