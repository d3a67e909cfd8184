// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// rnse command line: dataset synthesis, mask training, enhancement,
// objective evaluation and derivation verification.

#include <CLI11.hpp>

#include "rnse/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"speech enhancement toolkit with residual noise control"};
  app.require_subcommand(1);

  rnse::SynthOptions synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "synthesize a dataset from a manifest");
  synth_cmd->add_option("--manifest", synth.manifest_path,
                        "manifest path (omit for the built-in desk corpus)");
  synth_cmd->add_option("--out", synth.out_dir, "output dataset directory")
      ->required();

  rnse::TrainOptions train;
  CLI::App* train_cmd =
      app.add_subcommand("train", "train a mask estimator from a config file");
  train_cmd->add_option("--config", train.config_path, "training config path")
      ->required();

  rnse::EnhanceOptions enhance;
  CLI::App* enhance_cmd =
      app.add_subcommand("enhance", "enhance a noisy WAV file");
  enhance_cmd->add_option("--in", enhance.input_wav, "input noisy WAV")
      ->required();
  enhance_cmd->add_option("--out", enhance.output_wav, "output WAV")
      ->required();
  enhance_cmd
      ->add_option("--mode", enhance.mode,
                   "mask source: model | wiener | parametric | unit")
      ->required();
  enhance_cmd->add_option("--checkpoint", enhance.checkpoint,
                          "model checkpoint (model mode)");
  enhance_cmd->add_option("--clean", enhance.clean_wav,
                          "oracle clean WAV (wiener/parametric modes)");
  enhance_cmd->add_option("--noise", enhance.noise_wav,
                          "oracle noise WAV (wiener/parametric modes)");
  enhance_cmd->add_option("--mu", enhance.mu, "trade-off weight");
  enhance_cmd->add_option("--gamma", enhance.gamma, "error exponent");
  enhance_cmd->add_option("--alpha", enhance.alpha, "compression exponent");

  rnse::EvalOptions eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "objective metrics over a dataset split");
  eval_cmd->add_option("--data", eval.data_dir,
                       "dataset directory (default $RNSE_DATA_ROOT)");
  eval_cmd->add_option("--split", eval.split, "split name (default test)");
  eval_cmd->add_option("--mode", eval.mode,
                       "mask source: model | wiener | parametric | unit");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "model checkpoint");
  eval_cmd->add_option("--mu", eval.mu, "trade-off weight");
  eval_cmd->add_option("--gamma", eval.gamma, "error exponent");
  eval_cmd->add_option("--alpha", eval.alpha, "compression exponent");
  eval_cmd->add_option("--report", eval.report_csv, "output CSV path")
      ->required();
  eval_cmd->add_option("--sweep", eval.sweep_config,
                       "sweep config: one aggregate row per entry");

  rnse::VerifyOptions verify;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "brute-force and Monte-Carlo derivation checks");
  verify_cmd->add_option("--report", verify.report_csv,
                         "output CSV path (default stdout)");
  verify_cmd->add_option("--n", verify.n, "Monte-Carlo sample count");
  verify_cmd->add_option("--grid", verify.grid, "gain grid size");
  verify_cmd->add_option("--seed", verify.seed, "base RNG seed");
  verify_cmd->add_option("--gamma", verify.gammas,
                         "gamma values to check (gamma 1 rows are skipped)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rnse::kExitOk : rnse::kExitUsage;
  }

  if (synth_cmd->parsed()) return rnse::cmd_synth(synth);
  if (train_cmd->parsed()) return rnse::cmd_train(train);
  if (enhance_cmd->parsed()) return rnse::cmd_enhance(enhance);
  if (eval_cmd->parsed()) return rnse::cmd_eval(eval);
  if (verify_cmd->parsed()) return rnse::cmd_verify(verify);
  return rnse::kExitUsage;
}
