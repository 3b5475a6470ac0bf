#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "attex/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string checkpoint;
  std::string out_dir;
  std::string mode;
  std::int64_t seed = -1;
};

attex::RunConfig load_with_overrides(const CommonArgs& args) {
  attex::RunConfig config = attex::load_config(args.config_path);
  if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
  if (!args.out_dir.empty()) config.paths.out_dir = args.out_dir;
  if (!args.mode.empty()) config.mode = attex::parse_train_mode(args.mode);
  return config;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_checkpoint, bool with_mode) {
  cmd->add_option("--config", args.config_path, "run configuration file")->required();
  cmd->add_option("--seed", args.seed, "override train.seed");
  cmd->add_option("--out", args.out_dir, "override paths.out_dir");
  if (with_checkpoint) {
    cmd->add_option("--checkpoint", args.checkpoint, "model checkpoint path")->required();
  }
  if (with_mode) cmd->add_option("--mode", args.mode, "training mode: sl or ds");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attitude extraction toolkit"};
  app.require_subcommand(1);

  CommonArgs train_args, eval_args, annotate_args, analyze_args, gen_args;

  CLI::App* train = app.add_subcommand("train", "train a context classifier");
  add_common(train, train_args, false, true);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  add_common(eval, eval_args, true, false);

  CLI::App* annotate = app.add_subcommand("annotate", "label news via distant supervision");
  add_common(annotate, annotate_args, false, false);

  CLI::App* analyze = app.add_subcommand("analyze", "attention weight distribution analysis");
  add_common(analyze, analyze_args, true, false);

  CLI::App* gen = app.add_subcommand("gen-synthetic", "generate a synthetic corpus");
  add_common(gen, gen_args, false, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      attex::cmd_train(load_with_overrides(train_args));
    } else if (eval->parsed()) {
      attex::cmd_eval(load_with_overrides(eval_args), eval_args.checkpoint);
    } else if (annotate->parsed()) {
      attex::cmd_annotate(load_with_overrides(annotate_args));
    } else if (analyze->parsed()) {
      attex::cmd_analyze(load_with_overrides(analyze_args), analyze_args.checkpoint);
    } else if (gen->parsed()) {
      attex::cmd_gen_synthetic(load_with_overrides(gen_args));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
