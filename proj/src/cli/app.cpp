// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/cli/app.hpp"

#include <optional>

#include "CLI11.hpp"
#include "connectome/cli/commands.hpp"
#include "connectome/common/errors.hpp"

namespace connectome::cli {

namespace {

struct SharedFlags {
  std::optional<std::string> dataset;
  std::optional<std::string> synthetic_mode;
  std::optional<std::string> models;
  std::optional<std::string> seeds;
  std::optional<int> epochs;
  std::optional<int> warmup;
  std::optional<std::size_t> batch_size;
  std::optional<double> lr;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::optional<std::size_t> workers;
  std::optional<std::string> probs;
  std::optional<std::string> dropout_grid;
  std::optional<std::string> attention_dropout_grid;
  std::optional<std::string> layers;
  std::optional<std::string> variant_probs;
};

void add_shared_flags(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--dataset", f.dataset, "Dataset file (JSON Lines)");
  cmd->add_option("--synthetic", f.synthetic_mode,
                  "Generate a default synthetic dataset in memory (feature_only|structure_only|mixed)");
  cmd->add_option("--model", f.models, "Comma-separated models: residual-gcn, exphormer, attn-residual-gcn");
  cmd->add_option("--seeds", f.seeds, "Comma-separated training seeds");
  cmd->add_option("--epochs", f.epochs, "Total epochs");
  cmd->add_option("--warmup", f.warmup, "Warmup epochs");
  cmd->add_option("--batch-size", f.batch_size, "Graphs per optimizer step");
  cmd->add_option("--lr", f.lr, "Base learning rate");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--config", f.config, "JSON config file");
  cmd->add_option("--workers", f.workers, "Worker threads (0 = all cores)");
  cmd->add_option("--probs", f.probs, "Edge-drop probabilities");
  cmd->add_option("--dropout-grid", f.dropout_grid, "Network dropout values");
  cmd->add_option("--attention-dropout-grid", f.attention_dropout_grid, "Attention dropout values");
  cmd->add_option("--layers", f.layers, "Layer counts");
  cmd->add_option("--variant-probs", f.variant_probs, "Attention application probabilities (both placements)");
}

// Defaults, then the config file, then explicit flags.
SweepSpec build_sweep(const SharedFlags& f) {
  SweepSpec s;
  if (f.config) s = SweepSpec::from_json(read_config_file(*f.config));
  if (f.dataset) {
    s.dataset_path = *f.dataset;
    s.synthetic.reset();
  }
  if (f.synthetic_mode) {
    data::SyntheticSpec spec = s.synthetic.value_or(data::SyntheticSpec{});
    spec.label_mode = data::parse_label_mode(*f.synthetic_mode);
    s.synthetic = spec;
    s.dataset_path.reset();
  }
  if (f.models) s.models = parse_model_list(*f.models);
  if (f.seeds) s.train.seeds = parse_seed_list(*f.seeds);
  if (f.epochs) s.train.total_epochs = *f.epochs;
  if (f.warmup) s.train.warmup_epochs = *f.warmup;
  if (f.batch_size) s.train.batch_size = *f.batch_size;
  if (f.lr) s.train.base_lr = *f.lr;
  if (f.out) s.out_dir = *f.out;
  if (f.workers) s.workers = *f.workers;
  if (f.probs) s.drop_probabilities = parse_double_list(*f.probs);
  if (f.dropout_grid) s.dropout_grid = parse_double_list(*f.dropout_grid);
  if (f.attention_dropout_grid) s.attention_dropout_grid = parse_double_list(*f.attention_dropout_grid);
  if (f.layers) s.layer_counts = parse_size_list(*f.layers);
  if (f.variant_probs) {
    s.variants.clear();
    const auto probs = parse_double_list(*f.variant_probs);
    for (auto placement : {models::AttnPlacement::after_concat, models::AttnPlacement::after_each_gcn}) {
      for (double p : probs) {
        auto v = s.train.model.variant;
        v.placement = placement;
        v.apply_probability = p;
        s.variants.push_back(v);
      }
    }
  }
  s.validate();
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edge-perturbation benchmark for connectome graph classifiers", "connectome-bench"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic connectome dataset");
  std::string gen_out;
  std::optional<std::string> gen_config;
  data::SyntheticSpec gen_spec;
  std::optional<std::size_t> g_graphs, g_nodes, g_features;
  std::optional<int> g_classes;
  std::optional<double> g_threshold, g_noise, g_signal;
  std::optional<std::string> g_mode;
  std::optional<std::uint64_t> g_seed;
  gen->add_option("--out", gen_out, "Output file")->required();
  gen->add_option("--config", gen_config, "JSON synthetic spec");
  gen->add_option("--graphs", g_graphs, "Number of graphs");
  gen->add_option("--nodes", g_nodes, "Nodes per graph");
  gen->add_option("--features", g_features, "Feature dimension (0 = nodes)");
  gen->add_option("--classes", g_classes, "Number of classes");
  gen->add_option("--threshold", g_threshold, "Correlation threshold");
  gen->add_option("--mode", g_mode, "feature_only | structure_only | mixed");
  gen->add_option("--noise", g_noise, "Series noise scale");
  gen->add_option("--signal", g_signal, "Feature signal strength");
  gen->add_option("--seed", g_seed, "Generator seed");

  SharedFlags dropedge_flags, dropout_flags, layers_flags, variants_flags;
  auto* dropedge = app.add_subcommand("sweep-dropedge", "Accuracy across edge-drop probabilities");
  add_shared_flags(dropedge, dropedge_flags);
  auto* dropout = app.add_subcommand("sweep-dropout", "Network x attention dropout grid");
  add_shared_flags(dropout, dropout_flags);
  auto* layers = app.add_subcommand("sweep-layers", "Accuracy across layer counts");
  add_shared_flags(layers, layers_flags);
  auto* variants = app.add_subcommand("sweep-variants", "ResidualGCN with optional attention");
  add_shared_flags(variants, variants_flags);

  auto* curves = app.add_subcommand("curves", "Per-epoch curves from a run record");
  std::string curves_run;
  std::string curves_out;
  std::optional<std::uint64_t> curves_seed;
  curves->add_option("--run", curves_run, "Run record JSON")->required();
  curves->add_option("--out", curves_out, "Output CSV")->required();
  curves->add_option("--seed", curves_seed, "Seed to extract (default: first run)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) {
      if (gen_config) gen_spec = data::synthetic_spec_from_json(read_config_file(*gen_config));
      if (g_graphs) gen_spec.num_graphs = *g_graphs;
      if (g_nodes) gen_spec.n = *g_nodes;
      if (g_features) gen_spec.d = *g_features;
      if (g_classes) gen_spec.num_classes = *g_classes;
      if (g_threshold) gen_spec.threshold = *g_threshold;
      if (g_mode) gen_spec.label_mode = data::parse_label_mode(*g_mode);
      if (g_noise) gen_spec.noise_scale = *g_noise;
      if (g_signal) gen_spec.signal_strength = *g_signal;
      if (g_seed) gen_spec.seed = *g_seed;
      cmd_gen_data(gen_spec, gen_out, out);
    } else if (dropedge->parsed()) {
      cmd_sweep_dropedge(build_sweep(dropedge_flags), out);
    } else if (dropout->parsed()) {
      cmd_sweep_dropout(build_sweep(dropout_flags), out);
    } else if (layers->parsed()) {
      cmd_sweep_layers(build_sweep(layers_flags), out);
    } else if (variants->parsed()) {
      cmd_sweep_variants(build_sweep(variants_flags), out);
    } else if (curves->parsed()) {
      cmd_curves(curves_run, curves_seed, curves_out, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const LookupError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace connectome::cli
