#pragma once

// Drivers behind the `verify`, `extend` and `norms` subcommands. Each
// writes its files under cfg.out and returns the process exit status.

#include <iosfwd>

#include "json.hpp"

#include "mixsmooth/analysis.hpp"
#include "mixsmooth/config.hpp"

namespace mixsmooth {

// <out>/verify_report.json; 1 when any check fails.
int cmd_verify(const ExperimentConfig& cfg, std::ostream& log);

// <out>/extend.csv and <out>/extension.json for cfg.function.
int cmd_extend(const ExperimentConfig& cfg, std::ostream& log);

// <out>/norms.json for cfg.function; with_extension adds the whole-space
// ratio table.
int cmd_norms(const ExperimentConfig& cfg, bool with_extension, std::ostream& log);

nlohmann::json to_json(const NormReport& r);

// Shortest round-trip decimal, "inf"/"-inf"/"nan" otherwise.
std::string csv_double(double v);

}  // namespace mixsmooth
