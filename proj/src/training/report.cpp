// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/training/report.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "connectome/common/errors.hpp"

namespace connectome::training {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string format_mean_std(const Summary& s) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f ± %.2f", s.mean, s.std);
  return buf.data();
}

namespace {

nlohmann::ordered_json split_json(const SplitMetrics& m) { return {{"accuracy", m.accuracy}, {"loss", m.loss}}; }

SplitMetrics split_from_json(const nlohmann::json& j) {
  return {j.at("accuracy").get<double>(), j.at("loss").get<double>()};
}

}  // namespace

nlohmann::ordered_json to_json(const EpochMetrics& m) {
  nlohmann::ordered_json j;
  j["epoch"] = m.epoch;
  j["lr"] = m.lr;
  j["train_loss"] = m.train_loss;
  j["train"] = split_json(m.train);
  j["val"] = split_json(m.val);
  j["test"] = split_json(m.test);
  return j;
}

nlohmann::ordered_json to_json(const RunResult& r) {
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["drop_probability"] = r.drop_probability;
  j["edges_after_drop"] = r.edges_after_drop;
  j["best_val_epoch"] = r.best_val_epoch;
  j["best_val_accuracy"] = r.best_val_accuracy;
  j["test_at_best_val"] = r.test_at_best_val;
  auto curve = nlohmann::ordered_json::array();
  for (const auto& m : r.curve) curve.push_back(to_json(m));
  j["curve"] = std::move(curve);
  return j;
}

nlohmann::ordered_json to_json(const Summary& s) { return {{"mean", s.mean}, {"std", s.std}}; }

RunResult run_result_from_json(const nlohmann::json& j) {
  try {
    RunResult r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.drop_probability = j.at("drop_probability").get<double>();
    r.edges_after_drop = j.at("edges_after_drop").get<std::size_t>();
    r.best_val_epoch = j.at("best_val_epoch").get<int>();
    r.best_val_accuracy = j.at("best_val_accuracy").get<double>();
    r.test_at_best_val = j.at("test_at_best_val").get<double>();
    for (const auto& e : j.at("curve")) {
      EpochMetrics m;
      m.epoch = e.at("epoch").get<int>();
      m.lr = e.at("lr").get<double>();
      m.train_loss = e.at("train_loss").get<double>();
      m.train = split_from_json(e.at("train"));
      m.val = split_from_json(e.at("val"));
      m.test = split_from_json(e.at("test"));
      r.curve.push_back(m);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("run result: ") + e.what());
  }
}

void write_curves_csv(std::ostream& out, const RunResult& run) {
  out << "epoch,split,accuracy,loss,lr\n";
  for (const auto& m : run.curve) {
    const std::pair<const char*, const SplitMetrics*> rows[] = {{"train", &m.train}, {"val", &m.val},
                                                                {"test", &m.test}};
    for (const auto& [name, s] : rows) {
      out << m.epoch << ',' << name << ',' << format_double(s->accuracy) << ',' << format_double(s->loss) << ','
          << format_double(m.lr) << '\n';
    }
  }
}

}  // namespace connectome::training
