#pragma once

#include <string>

#include "attex/config.hpp"

namespace attex {

/// Command implementations behind the CLI. Each writes its outputs under
/// config.paths.out_dir and prints a short summary to stdout; contract
/// violations raise exceptions which the CLI maps to a nonzero exit.
struct RunPaths {
  std::string checkpoint;   // out_dir/checkpoint.bin
  std::string metrics;      // out_dir/metrics.tsv
  std::string predictions;  // out_dir/predictions.tsv
  std::string ds_corpus;    // out_dir/ds_corpus.jsonl
  std::string analysis;     // out_dir/analysis.tsv
  std::string kde_dir;      // out_dir/kde
};

RunPaths run_paths(const RunConfig& config);

void cmd_train(const RunConfig& config);
void cmd_eval(const RunConfig& config, const std::string& checkpoint_path);
void cmd_annotate(const RunConfig& config);
void cmd_analyze(const RunConfig& config, const std::string& checkpoint_path);
void cmd_gen_synthetic(const RunConfig& config);

}  // namespace attex
