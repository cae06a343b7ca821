// Command line interface: generate, noise, denoise, gridsearch, metric,
// export. Errors print one machine-parsable line (key=value pairs) and map
// to exit codes: 1 validation, 2 geometry domain, 3 I/O.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "manitv/cppa.hpp"
#include "manitv/datagen.hpp"
#include "manitv/io.hpp"

namespace {

using namespace manitv;

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == '"' || c == '\n') c = '\'';
  return s;
}

void print_error(const char* kind, const std::string& msg) {
  std::fprintf(stderr, "error=%s msg=\"%s\"\n", kind, sanitize(msg).c_str());
}

FunctionalParams parse_params(const std::vector<double>& alpha,
                              const std::vector<double>& beta) {
  FunctionalParams p;
  if (alpha.size() == 1)
    p.alpha = {alpha[0], alpha[0]};
  else if (alpha.size() == 2)
    p.alpha = {alpha[0], alpha[1]};
  else
    throw ValidationError("--alpha takes one or two values");
  if (beta.size() == 1)
    p.beta = {beta[0], beta[0], beta[0]};
  else if (beta.size() == 3)
    p.beta = {beta[0], beta[1], beta[2]};
  else
    throw ValidationError("--beta takes one or three values");
  return p;
}

void write_diagnostics(std::ostream& os, const Diagnostics& diag) {
  os << "cycle,functional,elapsed_seconds\n";
  char buf[96];
  for (const auto& c : diag.cycles) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.6f\n", c.cycle, c.functional,
                  c.elapsed_seconds);
    os << buf;
  }
}

struct SolverFlags {
  double lambda0 = std::numbers::pi / 2.0;
  int cycles = 0;
  int inner_iters = 50;
  std::uint64_t seed = 0;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda0", lambda0, "Outer step seed lambda_0")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--cycles", cycles,
                    "Outer cycles (default 1000 for signals, 400 for images)");
    cmd->add_option("--inner-iters", inner_iters,
                    "Subgradient iterations per d2/d11 prox")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Run seed (recorded; the solver is deterministic)");
    cmd->add_option("--threads", threads, "Worker threads (0 = hardware)");
  }

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.lambda0 = lambda0;
    cfg.cycles = cycles;
    cfg.prox_schedule.max_inner_iters = inner_iters;
    cfg.seed = seed;
    cfg.threads = threads;
    return cfg;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"First plus second order total variation denoising of "
               "manifold-valued signals and images"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "manitv 0.1.0");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic data set");
  std::string gen_kind, gen_output;
  int gen_size = 0;
  gen->add_option("--kind", gen_kind, "lemniscate | s2field | spdimage")
      ->required()
      ->check(CLI::IsMember({"lemniscate", "s2field", "spdimage"}));
  gen->add_option("--size", gen_size, "Sample count / grid side (defaults: 512/64/25)");
  gen->add_option("--output", gen_output, "Output image file")->required();

  // noise
  auto* noise = app.add_subcommand("noise", "Add noise to an image");
  std::string noise_input, noise_output, noise_model = "gaussian";
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
  noise->add_option("--input", noise_input)->required();
  noise->add_option("--output", noise_output)->required();
  noise->add_option("--model", noise_model, "gaussian | rician")
      ->check(CLI::IsMember({"gaussian", "rician"}));
  noise->add_option("--sigma", noise_sigma, "Noise level (0 copies the input)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  noise->add_option("--seed", noise_seed);

  // denoise
  auto* den = app.add_subcommand("denoise", "Run the cyclic proximal point denoiser");
  std::string den_input, den_output, den_diag;
  std::vector<double> den_alpha{0.0}, den_beta{0.0};
  SolverFlags den_flags;
  den->add_option("--input", den_input)->required();
  den->add_option("--output", den_output)->required();
  den->add_option("--alpha", den_alpha, "a1[,a2] first difference weights")
      ->delimiter(',');
  den->add_option("--beta", den_beta, "b1[,b2,b3] second difference weights")
      ->delimiter(',');
  den->add_option("--diag", den_diag, "Diagnostics CSV path (default: stdout)");
  den_flags.attach(den);

  // gridsearch
  auto* grid = app.add_subcommand("gridsearch",
                                  "Scan (alpha, beta) grids against a reference");
  std::string grid_input, grid_reference;
  std::vector<double> grid_alphas, grid_betas;
  SolverFlags grid_flags;
  grid->add_option("--input", grid_input, "Noisy image")->required();
  grid->add_option("--reference", grid_reference, "Clean reference image")->required();
  grid->add_option("--alphas", grid_alphas)->required()->delimiter(',');
  grid->add_option("--betas", grid_betas)->required()->delimiter(',');
  grid_flags.attach(grid);

  // metric
  auto* metric = app.add_subcommand("metric", "Mean error between two images");
  std::string metric_a, metric_b;
  metric->add_option("--a", metric_a)->required();
  metric->add_option("--b", metric_b)->required();

  // export
  auto* exp = app.add_subcommand("export", "Convert an image to CSV");
  std::string exp_input, exp_output, exp_format = "csv";
  exp->add_option("--input", exp_input)->required();
  exp->add_option("--output", exp_output)->required();
  exp->add_option("--format", exp_format)->check(CLI::IsMember({"csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("validation", e.what());
    return 1;
  }

  if (gen->parsed()) {
    ManifoldImage img = [&] {
      if (gen_kind == "lemniscate") return gen_lemniscate(gen_size > 0 ? gen_size : 512);
      if (gen_kind == "s2field") return gen_s2_field(gen_size > 0 ? gen_size : 64);
      return gen_spd_image(gen_size > 0 ? gen_size : 25);
    }();
    write_image(gen_output, img);
    return 0;
  }

  if (noise->parsed()) {
    const ManifoldImage input = read_image(noise_input);
    if (noise_sigma == 0.0) {
      write_image(noise_output, input);  // identity
      return 0;
    }
    NoiseSpec spec;
    spec.model = noise_model == "rician" ? NoiseModel::RicianEntrywise
                                         : NoiseModel::GaussianTangent;
    spec.sigma = noise_sigma;
    spec.seed = noise_seed;
    write_image(noise_output, add_noise(input, spec));
    return 0;
  }

  if (den->parsed()) {
    const ManifoldImage input = read_image(den_input);
    const FunctionalParams params = parse_params(den_alpha, den_beta);
    const DenoiseResult result = cppa_run(input, params, den_flags.config());
    write_image(den_output, result.image);
    if (den_diag.empty()) {
      write_diagnostics(std::cout, result.diagnostics);
    } else {
      std::ofstream os(den_diag);
      if (!os) throw IoError("cannot open for writing: " + den_diag);
      write_diagnostics(os, result.diagnostics);
    }
    return 0;
  }

  if (grid->parsed()) {
    const ManifoldImage noisy = read_image(grid_input);
    const ManifoldImage clean = read_image(grid_reference);
    const GridSearchResult result =
        grid_search(noisy, clean, grid_alphas, grid_betas, grid_flags.config());
    std::printf("alpha,beta,mean_error\n");
    for (const auto& e : result.table)
      std::printf("%.10g,%.10g,%.10g\n", e.alpha, e.beta, e.mean_error);
    std::printf("best alpha=%.10g beta=%.10g E=%.10g\n", result.best.alpha,
                result.best.beta, result.best.mean_error);
    return 0;
  }

  if (metric->parsed()) {
    const double e = mean_error(read_image(metric_a), read_image(metric_b));
    std::printf("%.10g\n", e);
    return 0;
  }

  if (exp->parsed()) {
    export_csv(exp_output, read_image(exp_input));
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const manitv::ValidationError& e) {
    print_error("validation", e.what());
    return 1;
  } catch (const manitv::GeometryDomainError& e) {
    print_error("geometry", e.what());
    return 2;
  } catch (const manitv::IoError& e) {
    print_error("io", e.what());
    return 3;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
}
