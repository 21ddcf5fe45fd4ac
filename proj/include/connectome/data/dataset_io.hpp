// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "connectome/data/connectome_graph.hpp"

// JSON Lines dataset files. Line 1 is the header
//   {"version":1,"num_classes":C,"spec":{...}}
// and each following line is one graph
//   {"n":N,"d":D,"x":[N*D floats],"edges":[[u,v],...],"w":[...],"y":label}
// Doubles are written in shortest round-trip form, so a load of a saved
// dataset is bit-exact. Edges given with u > v are accepted and stored as
// (v, u); self-loops and duplicates are rejected.

namespace connectome::data {

inline constexpr int kDatasetFormatVersion = 1;

std::string serialize_dataset(const Dataset& dataset);
void write_dataset(std::ostream& out, const Dataset& dataset);
/// Throws IoError when the file cannot be written.
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

/// Throws ParseError carrying the offending 1-based line number.
Dataset parse_dataset(std::string_view text);
Dataset read_dataset(std::istream& in);
/// Throws IoError when the file cannot be opened, ParseError on bad content.
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace connectome::data
