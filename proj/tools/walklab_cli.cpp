// Command-line front end. Talks to the library exclusively through the
// public C API; exit codes mirror its error codes (0 ok, 2 divergence,
// 3 validation).
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "walklab.h"

namespace {

int report_failure(int rc) {
  std::fprintf(stderr, "error: %s\n", wl_last_error());
  return rc;
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream f(path, std::ios::trunc);
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"walklab: a desk-scale locomotion RL laboratory"};
  app.set_version_flag("--version", wl_version());
  app.require_subcommand(1);

  std::string config, resume, checkpoint, layout, metrics, grid, out_dir;
  int episodes = 100;
  bool stochastic = false;

  CLI::App* train = app.add_subcommand("train", "Train a policy from a config");
  train->add_option("--config", config, "experiment config file")->required();
  train->add_option("--resume", resume, "checkpoint to continue from");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--checkpoint", checkpoint, "trained checkpoint")->required();
  eval->add_option("--layout", layout, "course layout file")->required();
  eval->add_option("--episodes", episodes, "episode count")->required();
  eval->add_flag("--stochastic", stochastic, "sample actions instead of mean");

  CLI::App* robust = app.add_subcommand(
      "robustness", "Displacement sweep; grid CSV on stdout");
  robust->add_option("--checkpoint", checkpoint, "trained checkpoint")
      ->required();
  robust->add_option("--layout", layout, "base layout file")->required();
  robust->add_option("--grid", grid, "offsets as lo:step:hi")->required();
  robust->add_option("--episodes", episodes, "episodes per cell (default 20)")
      ->default_val(20);
  robust->add_flag("--stochastic", stochastic, "sample actions instead of mean");

  CLI::App* plot = app.add_subcommand(
      "plot-data", "Write downsampled learning-curve series");
  plot->add_option("--metrics", metrics, "metrics CSV from training")
      ->required();
  plot->add_option("--out-dir", out_dir,
                   "target directory (default: alongside the metrics file)");

  CLI::App* dump =
      app.add_subcommand("dump", "Print a checkpoint as diffable text");
  dump->add_option("--checkpoint", checkpoint, "checkpoint file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : WL_E_VALIDATION;
  }

  if (*train) {
    const int rc = wl_train(config.c_str(), resume.empty() ? nullptr
                                                           : resume.c_str());
    if (rc != WL_OK) return report_failure(rc);
    return 0;
  }

  if (*eval) {
    char* report = nullptr;
    const int rc = wl_eval(checkpoint.c_str(), layout.c_str(), episodes,
                           stochastic ? 1 : 0, &report);
    if (rc != WL_OK) return report_failure(rc);
    std::fputs(report, stdout);
    wl_string_free(report);
    return 0;
  }

  if (*robust) {
    char* csv = nullptr;
    const int rc = wl_robustness(checkpoint.c_str(), layout.c_str(),
                                 grid.c_str(), episodes, stochastic ? 1 : 0,
                                 &csv);
    if (rc != WL_OK) return report_failure(rc);
    std::fputs(csv, stdout);
    wl_string_free(csv);
    return 0;
  }

  if (*plot) {
    char* ret = nullptr;
    char* len = nullptr;
    const int rc = wl_plot_data(metrics.c_str(), &ret, &len);
    if (rc != WL_OK) return report_failure(rc);
    const std::filesystem::path dir =
        out_dir.empty() ? std::filesystem::path(metrics).parent_path()
                        : std::filesystem::path(out_dir);
    const std::string rp = (dir / "return_vs_steps.txt").string();
    const std::string lp = (dir / "length_vs_steps.txt").string();
    const bool ok = write_file(rp, ret) && write_file(lp, len);
    wl_string_free(ret);
    wl_string_free(len);
    if (!ok) {
      std::fprintf(stderr, "error: cannot write series under %s\n",
                   dir.string().c_str());
      return WL_E_VALIDATION;
    }
    std::printf("%s\n%s\n", rp.c_str(), lp.c_str());
    return 0;
  }

  if (*dump) {
    char* text = nullptr;
    const int rc = wl_checkpoint_dump(checkpoint.c_str(), &text);
    if (rc != WL_OK) return report_failure(rc);
    std::fputs(text, stdout);
    wl_string_free(text);
    return 0;
  }

  return WL_E_VALIDATION;
}
