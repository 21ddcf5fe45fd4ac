// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace connectome {

/// Lower-case hex SHA-1 digest of `bytes`.
std::string sha1_hex(std::string_view bytes);

/// Git blob id of `content`: SHA-1 over "blob <size>\0" + content.
std::string git_blob_hash(std::string_view content);

}  // namespace connectome
