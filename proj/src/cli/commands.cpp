// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "connectome/common/errors.hpp"
#include "connectome/common/hash.hpp"
#include "connectome/common/parallel.hpp"
#include "connectome/data/dataset_io.hpp"
#include "connectome/training/report.hpp"

namespace connectome::cli {

namespace {

using training::format_double;
using training::format_mean_std;

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) ensure_directory(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string fixed2(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

// 0.0 / 0.5 / 1.0 as in the published table; finer values keep full precision.
std::string table_probability(double p) {
  if (std::round(p * 10.0) != p * 10.0) return format_double(p);
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(1);
  s << p;
  return s.str();
}

struct Cell {
  std::string tag;
  training::TrainConfig config;
};

// Cells run on the worker pool; logs and records are assembled afterwards in cell order.
std::vector<training::ExperimentResult> run_cells(const std::string& command, const std::vector<Cell>& cells,
                                                  const LoadedDataset& dataset, double drop_p,
                                                  const SweepSpec& sweep, std::ostream& log) {
  std::vector<training::ExperimentResult> results(cells.size());
  parallel_for(cells.size(), sweep.workers, [&](std::size_t i) {
    results[i] = training::run_experiment(cells[i].config, dataset.dataset, drop_p, 1);
  });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& r = results[i];
    for (const auto& run : r.runs) {
      log << "[" << command << "] " << cells[i].tag << " seed=" << run.seed << " p=" << format_double(drop_p)
          << " edges_after_drop=" << run.edges_after_drop << " best_val_epoch=" << run.best_val_epoch
          << " val=" << fixed2(run.best_val_accuracy) << " test=" << fixed2(run.test_at_best_val) << '\n';
    }
    log << "[" << command << "] " << cells[i].tag << " test " << format_mean_std(r.test) << '\n';
    write_file(sweep.out_dir / "runs" / (command + "-" + cells[i].tag + ".json"),
               run_record(command, dataset, cells[i].config, r).dump(2) + "\n");
  }
  return results;
}

void set_dropouts(training::TrainConfig& cfg, double dropout, double attention_dropout) {
  switch (cfg.model.kind) {
    case models::ModelKind::exphormer:
      cfg.model.exphormer.dropout = dropout;
      cfg.model.exphormer.attention_dropout = attention_dropout;
      return;
    case models::ModelKind::attn_residual_gcn:
      cfg.model.gcn.dropout = dropout;
      cfg.model.variant.attention_dropout = attention_dropout;
      return;
    case models::ModelKind::residual_gcn:
      break;
  }
  throw ConfigError("sweep-dropout needs a model with attention (exphormer or attn-residual-gcn)");
}

void set_layers(training::TrainConfig& cfg, std::size_t layers) {
  if (cfg.model.kind == models::ModelKind::exphormer) {
    cfg.model.exphormer.num_layers = layers;
  } else {
    cfg.model.gcn.num_gcn_layers = layers;
  }
}

training::TrainConfig base_config(const SweepSpec& sweep, models::ModelKind kind) {
  auto cfg = sweep.train;
  cfg.model.kind = kind;
  return cfg;
}

}  // namespace

nlohmann::ordered_json run_record(const std::string& command, const LoadedDataset& dataset,
                                  const training::TrainConfig& config, const training::ExperimentResult& result) {
  const auto cfg = config.to_json();
  nlohmann::ordered_json j;
  j["command"] = command;
  j["dataset"] = {{"name", dataset.name}, {"hash", dataset.hash}, {"num_graphs", dataset.dataset.graphs.size()}};
  j["config"] = cfg;
  j["config_hash"] = sha1_hex(cfg.dump());
  j["seeds"] = config.seeds;
  j["drop_probability"] = result.drop_probability;
  j["summary"] = {{"val", training::to_json(result.val)}, {"test", training::to_json(result.test)}};
  auto runs = nlohmann::ordered_json::array();
  for (const auto& r : result.runs) runs.push_back(training::to_json(r));
  j["runs"] = std::move(runs);
  return j;
}

GenDataSummary cmd_gen_data(const data::SyntheticSpec& spec, const std::filesystem::path& out, std::ostream& log) {
  const auto ds = data::make_synthetic_dataset(spec);
  if (out.has_parent_path()) ensure_directory(out.parent_path());
  data::save_dataset(out, ds);
  GenDataSummary s{ds.graphs.size(), ds.num_classes, ds.mean_edge_density()};
  log << "graphs=" << s.graphs << " classes=" << s.classes << " mean_edge_density=" << std::fixed
      << std::setprecision(3) << s.mean_edge_density << std::defaultfloat << '\n';
  return s;
}

std::vector<DropEdgeRow> cmd_sweep_dropedge(const SweepSpec& sweep, std::ostream& log) {
  sweep.validate();
  const auto dataset = resolve_dataset(sweep);
  std::vector<DropEdgeRow> rows;
  for (auto kind : sweep.models) {
    for (double p : sweep.drop_probabilities) {
      const std::vector<Cell> cells{{models::to_string(kind) + "-p" + format_double(p), base_config(sweep, kind)}};
      const auto results = run_cells("sweep-dropedge", cells, dataset, p, sweep, log);
      rows.push_back({dataset.name, p, kind, results.front().test});
    }
  }

  std::ostringstream csv;
  csv << "dataset,p,model,mean,std\n";
  for (const auto& r : rows) {
    csv << r.dataset << ',' << table_probability(r.p) << ',' << models::to_string(r.model) << ',' << fixed2(r.test.mean)
        << ',' << fixed2(r.test.std) << '\n';
  }
  write_file(sweep.out_dir / "dropedge.csv", csv.str());

  std::ostringstream md;
  md << "| Dataset | p |";
  for (auto kind : sweep.models) md << ' ' << models::to_string(kind) << " |";
  md << "\n|---|---|";
  for (std::size_t i = 0; i < sweep.models.size(); ++i) md << "---|";
  md << '\n';
  for (std::size_t pi = 0; pi < sweep.drop_probabilities.size(); ++pi) {
    md << "| " << dataset.name << " | " << table_probability(sweep.drop_probabilities[pi]) << " |";
    for (std::size_t mi = 0; mi < sweep.models.size(); ++mi) {
      md << ' ' << format_mean_std(rows[mi * sweep.drop_probabilities.size() + pi].test) << " |";
    }
    md << '\n';
  }
  write_file(sweep.out_dir / "dropedge.md", md.str());
  log << md.str();
  return rows;
}

std::vector<DropoutCell> cmd_sweep_dropout(const SweepSpec& sweep, std::ostream& log) {
  sweep.validate();
  const auto dataset = resolve_dataset(sweep);
  const auto kind = sweep.models.front();
  std::vector<Cell> cells;
  for (double d : sweep.dropout_grid) {
    for (double a : sweep.attention_dropout_grid) {
      auto cfg = base_config(sweep, kind);
      set_dropouts(cfg, d, a);
      cells.push_back({models::to_string(kind) + "-dropout" + format_double(d) + "-attn" + format_double(a), cfg});
    }
  }
  const auto results = run_cells("sweep-dropout", cells, dataset, 0.0, sweep, log);

  std::vector<DropoutCell> out;
  std::size_t i = 0;
  for (double d : sweep.dropout_grid) {
    for (double a : sweep.attention_dropout_grid) {
      out.push_back({d, a, results[i].val, results[i].test});
      ++i;
    }
  }
  for (const char* split : {"val", "test"}) {
    std::ostringstream csv;
    csv << "dropout\\attention_dropout";
    for (double a : sweep.attention_dropout_grid) csv << ',' << format_double(a);
    csv << '\n';
    const std::size_t cols = sweep.attention_dropout_grid.size();
    for (std::size_t r = 0; r < sweep.dropout_grid.size(); ++r) {
      csv << format_double(sweep.dropout_grid[r]);
      for (std::size_t c = 0; c < cols; ++c) {
        const auto& cell = out[r * cols + c];
        csv << ',' << format_mean_std(std::string(split) == "val" ? cell.val : cell.test);
      }
      csv << '\n';
    }
    write_file(sweep.out_dir / (std::string("dropout_") + split + ".csv"), csv.str());
    log << split << " accuracy\n" << csv.str();
  }
  return out;
}

std::vector<LayerRow> cmd_sweep_layers(const SweepSpec& sweep, std::ostream& log) {
  sweep.validate();
  const auto dataset = resolve_dataset(sweep);
  const auto kind = sweep.models.front();
  std::vector<Cell> cells;
  for (auto layers : sweep.layer_counts) {
    auto cfg = base_config(sweep, kind);
    set_layers(cfg, layers);
    cells.push_back({models::to_string(kind) + "-layers" + std::to_string(layers), cfg});
  }
  const auto results = run_cells("sweep-layers", cells, dataset, 0.0, sweep, log);

  std::vector<LayerRow> out;
  std::ostringstream csv;
  csv << "layers,val_mean,val_std,test_mean,test_std\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out.push_back({sweep.layer_counts[i], results[i].val, results[i].test});
    csv << sweep.layer_counts[i] << ',' << fixed2(results[i].val.mean) << ',' << fixed2(results[i].val.std) << ','
        << fixed2(results[i].test.mean) << ',' << fixed2(results[i].test.std) << '\n';
  }
  write_file(sweep.out_dir / "layers.csv", csv.str());
  log << csv.str();
  return out;
}

std::vector<VariantRow> cmd_sweep_variants(const SweepSpec& sweep, std::ostream& log) {
  sweep.validate();
  const auto dataset = resolve_dataset(sweep);
  std::vector<Cell> cells{{"baseline", base_config(sweep, models::ModelKind::residual_gcn)}};
  for (const auto& v : sweep.variants) {
    auto cfg = base_config(sweep, models::ModelKind::attn_residual_gcn);
    cfg.model.variant.placement = v.placement;
    cfg.model.variant.apply_probability = v.apply_probability;
    cells.push_back({"variant-" + models::to_string(v.placement) + "-p" + format_double(v.apply_probability), cfg});
  }
  const auto results = run_cells("sweep-variants", cells, dataset, 0.0, sweep, log);

  std::vector<VariantRow> out;
  std::ostringstream csv;
  csv << "placement,probability,val_mean,val_std,test_mean,test_std\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    VariantRow row;
    row.placement = i == 0 ? "none" : models::to_string(sweep.variants[i - 1].placement);
    row.probability = i == 0 ? 0.0 : sweep.variants[i - 1].apply_probability;
    row.val = results[i].val;
    row.test = results[i].test;
    row.runs = results[i].runs;
    csv << row.placement << ',' << format_double(row.probability) << ',' << fixed2(row.val.mean) << ','
        << fixed2(row.val.std) << ',' << fixed2(row.test.mean) << ',' << fixed2(row.test.std) << '\n';
    out.push_back(std::move(row));
  }
  write_file(sweep.out_dir / "variants.csv", csv.str());
  log << csv.str();
  return out;
}

CurvesSummary cmd_curves(const std::filesystem::path& run_json, std::optional<std::uint64_t> seed,
                         const std::filesystem::path& out_csv, std::ostream& log) {
  std::ifstream in(run_json);
  if (!in) throw LookupError("no run record at '" + run_json.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, "run record '" + run_json.string() + "': " + e.what());
  }
  if (!j.contains("runs") || !j.at("runs").is_array() || j.at("runs").empty()) {
    throw LookupError("run record '" + run_json.string() + "' holds no runs");
  }
  const nlohmann::json* chosen = nullptr;
  for (const auto& r : j.at("runs")) {
    if (!seed || (r.contains("seed") && r.at("seed").get<std::uint64_t>() == *seed)) {
      chosen = &r;
      break;
    }
  }
  if (!chosen) throw LookupError("no run with seed " + std::to_string(*seed) + " in '" + run_json.string() + "'");
  const auto run = training::run_result_from_json(*chosen);
  if (run.curve.empty()) throw LookupError("run has an empty curve");

  std::ostringstream csv;
  training::write_curves_csv(csv, run);
  write_file(out_csv, csv.str());

  const auto& last = run.curve.back();
  CurvesSummary s{3 * run.curve.size(), last.train.accuracy, last.test.accuracy,
                  last.train.accuracy - last.test.accuracy};
  log << "seed=" << run.seed << " epochs=" << run.curve.size() << " final_train=" << fixed2(s.final_train)
      << " final_test=" << fixed2(s.final_test) << " gap=" << fixed2(s.gap) << '\n';
  return s;
}

}  // namespace connectome::cli
