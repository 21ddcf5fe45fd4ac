// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/common/errors.hpp"

namespace connectome {

DegenerateSeriesError::DegenerateSeriesError(std::size_t row)
    : Error("time series row " + std::to_string(row) + " has zero variance"), row_(row) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

DivergenceError::DivergenceError(int epoch, std::size_t batch, const std::string& context)
    : Error("non-finite loss at epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch) +
            (context.empty() ? std::string{} : " (" + context + ")")),
      epoch_(epoch),
      batch_(batch) {}

}  // namespace connectome
