// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/models/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "connectome/common/errors.hpp"

namespace connectome::models {

namespace {

constexpr std::array<char, 8> kMagic{'C', 'N', 'B', 'C', 'K', 'P', 'T', '1'};
// Guards against absurd lengths in corrupt files before allocating.
constexpr std::uint64_t kMaxLength = std::uint64_t{1} << 34;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }

class Reader {
 public:
  explicit Reader(std::string bytes) : bytes_(std::move(bytes)) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string bytes(std::uint64_t n) {
    if (n > kMaxLength) throw ParseError(0, "checkpoint length field too large");
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const noexcept { return pos_ == bytes_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (bytes_.size() - pos_ < n) throw ParseError(0, "checkpoint truncated at byte " + std::to_string(pos_));
  }
  std::string bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ad::ParamStore& params,
                     const nlohmann::ordered_json& config) {
  std::string out(kMagic.begin(), kMagic.end());
  const std::string cfg = config.dump();
  put_u64(out, cfg.size());
  out += cfg;
  put_u64(out, params.size());
  for (const auto& [name, tensor] : params.entries()) {
    put_u64(out, name.size());
    out += name;
    put_u64(out, tensor.rows());
    put_u64(out, tensor.cols());
    for (double v : tensor.values()) put_f64(out, v);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("failed writing '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open checkpoint '" + path.string() + "'");
  Reader in(std::string(std::istreambuf_iterator<char>(file), {}));

  const std::string magic = in.bytes(kMagic.size());
  if (std::memcmp(magic.data(), kMagic.data(), kMagic.size()) != 0) throw ParseError(0, "not a checkpoint file");
  Checkpoint ckpt;
  try {
    ckpt.config = nlohmann::ordered_json::parse(in.bytes(in.u64()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("checkpoint config: ") + e.what());
  }
  const std::uint64_t count = in.u64();
  if (count > kMaxLength) throw ParseError(0, "checkpoint tensor count too large");
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string name = in.bytes(in.u64());
    const std::uint64_t rows = in.u64();
    const std::uint64_t cols = in.u64();
    if (rows > kMaxLength || cols > kMaxLength || rows * cols > kMaxLength) {
      throw ParseError(0, "checkpoint tensor '" + name + "' too large");
    }
    std::vector<double> values(rows * cols);
    for (double& v : values) v = in.f64();
    ckpt.tensors.push_back({std::move(name), ad::Tensor(rows, cols, std::move(values))});
  }
  if (!in.done()) throw ParseError(0, "trailing bytes after checkpoint tensors");
  return ckpt;
}

void restore_params(ad::ParamStore& params, const Checkpoint& checkpoint) {
  if (checkpoint.tensors.size() != params.size()) {
    throw ContractError("checkpoint has " + std::to_string(checkpoint.tensors.size()) + " tensors, model has " +
                        std::to_string(params.size()));
  }
  for (const auto& [name, saved] : checkpoint.tensors) {
    ad::Tensor target = params.get(name);
    if (target.shape() != saved.shape()) {
      throw DimensionError("checkpoint tensor '" + name + "' has shape " + ad::to_string(saved.shape()) +
                           ", model expects " + ad::to_string(target.shape()));
    }
    std::copy(saved.values().begin(), saved.values().end(), target.mutable_values().begin());
  }
}

}  // namespace connectome::models
