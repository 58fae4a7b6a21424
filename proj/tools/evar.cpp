// Command-line workbench for uncertainty-aware active recognition: dataset
// generation, staged training, evaluation sweeps and report emission.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evar/cli/commands.hpp"

namespace {

std::vector<double> parse_sigma_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream is(csv);
  std::string field;
  while (std::getline(is, field, ',')) {
    if (!field.empty()) out.push_back(std::stod(field));
  }
  return out;
}

std::vector<std::string> parse_name_list(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream is(csv);
  std::string field;
  while (std::getline(is, field, ',')) {
    if (!field.empty()) out.push_back(field);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active-recognition workbench"};

  bool print_config = false;
  app.add_flag("--print-config", print_config, "dump the resolved default config as JSON and exit");

  // gen-dataset
  auto* gen = app.add_subcommand("gen-dataset", "generate a difficulty-scored episode set");
  evar::cli::GenDatasetOptions gen_opt;
  gen->add_option("--n", gen_opt.n, "number of instances");
  gen->add_option("--seed", gen_opt.seed, "master seed");
  gen->add_option("--out", gen_opt.out, "output JSONL path");
  gen->add_option("--config", gen_opt.config_path, "experiment config JSON");

  // train
  auto* train = app.add_subcommand("train", "staged training: recognizer then policy");
  evar::cli::TrainOptions train_opt;
  train->add_option("--stage", train_opt.stage, "recognizer | policy | all");
  train->add_option("--config", train_opt.config_path, "experiment config JSON");
  train->add_option("--out", train_opt.out_dir, "output directory");
  train->add_flag("--resume", train_opt.resume, "skip stages whose checkpoints already exist");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "run the evaluation matrix on a test set");
  evar::cli::EvaluateOptions eval_opt;
  std::string agents_csv = "ours", fusions_csv = "evidential", sigmas_csv = "0";
  eval->add_option("--agent", agents_csv, "comma list: ours,fixation,random,single_view");
  eval->add_option("--fusion", fusions_csv, "comma list: evidential,average,vote,last,max");
  eval->add_option("--sigma-list", sigmas_csv, "comma list of feature-noise levels");
  eval->add_option("--testset", eval_opt.testset_path, "test set JSONL");
  eval->add_option("--recognizer", eval_opt.recognizer_path, "recognizer checkpoint");
  eval->add_option("--policy", eval_opt.policy_path, "policy checkpoint (for agent 'ours')");
  eval->add_option("--out", eval_opt.out_dir, "output directory");
  eval->add_option("--seed", eval_opt.seed, "evaluation seed");
  eval->add_option("--horizon", eval_opt.horizon, "episode length T");
  eval->add_option("--jobs", eval_opt.jobs, "worker threads");
  eval->add_option("--episode-log", eval_opt.episode_log_limit,
                   "log per-step opinions for the first N episodes");

  // report
  auto* report = app.add_subcommand("report", "aggregate csv outputs into a JSON report");
  evar::cli::ReportOptions report_opt;
  report->add_option("--in", report_opt.in_dir, "directory of evaluation csv files");
  report->add_option("--out", report_opt.out_path, "report JSON path");

  CLI11_PARSE(app, argc, argv);

  if (print_config) {
    evar::cli::ExperimentConfig cfg;
    cfg.resolve();
    nlohmann::json j = cfg;
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  if (gen->parsed()) return evar::cli::cmd_gen_dataset(gen_opt);
  if (train->parsed()) return evar::cli::cmd_train(train_opt);
  if (eval->parsed()) {
    if (eval_opt.testset_path.empty() || eval_opt.recognizer_path.empty()) {
      std::cerr << "evaluate: --testset and --recognizer are required\n";
      return 2;
    }
    eval_opt.agents = parse_name_list(agents_csv);
    eval_opt.fusions = parse_name_list(fusions_csv);
    eval_opt.sigmas = parse_sigma_list(sigmas_csv);
    return evar::cli::cmd_evaluate(eval_opt);
  }
  if (report->parsed()) return evar::cli::cmd_report(report_opt);

  std::cerr << app.help();
  return 2;
}
