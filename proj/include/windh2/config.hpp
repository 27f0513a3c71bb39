#pragma once

#include "windh2/backtest.hpp"
#include "windh2/core.hpp"

#include <string>

namespace windh2 {

/// Run configuration loaded from a key = value file with [section] headers.
struct RunConfig {
    PlantParams plant;
    BacktestConfig backtest;
    std::string data_path;
    std::string out_dir = "out";
    int synth_overlap_days = 30;

    /// Parses and validates; the referenced data path must exist.
    static RunConfig load(const std::string& path);

    /// Verbatim-formula mode: no quota guard and no monotonic projection.
    void apply_faithful() {
        backtest.strict_guard = false;
        backtest.grid.monotonic_projection = false;
    }
};

}  // namespace windh2
