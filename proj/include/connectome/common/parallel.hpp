// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace connectome {

/// Runs fn(0..count-1) on at most `workers` threads. Tasks must not share
/// mutable state. The first exception thrown by any task is rethrown after
/// all workers have joined. workers == 0 means hardware concurrency.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace connectome
