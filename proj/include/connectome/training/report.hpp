// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>

#include "connectome/training/experiment.hpp"
#include "connectome/training/trainer.hpp"
#include "json.hpp"

namespace connectome::training {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// "52.00 ± 2.00"
std::string format_mean_std(const Summary& s);

nlohmann::ordered_json to_json(const EpochMetrics& m);
nlohmann::ordered_json to_json(const RunResult& r);
nlohmann::ordered_json to_json(const Summary& s);

/// Throws ParseError (line 0) on malformed input.
RunResult run_result_from_json(const nlohmann::json& j);

/// Header `epoch,split,accuracy,loss,lr`, then one row per (epoch, split).
void write_curves_csv(std::ostream& out, const RunResult& run);

}  // namespace connectome::training
