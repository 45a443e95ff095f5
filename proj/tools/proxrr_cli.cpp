// proxrr: run shuffling-based proximal optimizers on elastic-net logistic
// regression experiments described by a JSON config.
//
// Exit codes: 0 success, 1 I/O or unexpected error, 2 invalid config or
// arguments, 3 dataset error, 4 numerical failure (divergence, reference
// solver not converging).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "proxrr/errors.hpp"
#include "proxrr/harness/config.hpp"
#include "proxrr/harness/csv.hpp"
#include "proxrr/harness/experiment.hpp"
#include "proxrr/reference.hpp"

namespace {

namespace h = proxrr::harness;

enum Exit : int { kOk = 0, kIo = 1, kConfig = 2, kData = 3, kNumerical = 4 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
};

h::ExperimentConfig load(const std::string& path, const Overrides& o) {
  h::ExperimentConfig c = h::load_config(path);
  if (o.seed) c.seeds = {*o.seed};
  if (o.out) c.output = *o.out;
  if (o.threads) c.threads = *o.threads;
  h::validate(c);
  return c;
}

int cmd_run(const h::ExperimentConfig& c) {
  const h::ExperimentResult r = h::run_experiment(c);
  std::size_t bad = 0;
  for (const auto& cell : r.cells) {
    if (cell.status != h::CellStatus::ok) {
      ++bad;
      std::cerr << "cell " << cell.label << " seed " << cell.seed << ": " << cell.message << '\n';
    }
  }
  std::cout << "wrote " << r.cells.size() << " cells to " << c.output << '\n';
  for (const auto& chk : r.checks) {
    std::cout << (chk.pass ? "PASS " : "FAIL ") << chk.name << " = " << h::format_double(chk.value)
              << " (threshold " << h::format_double(chk.threshold) << ")\n";
  }
  return bad == 0 ? kOk : kNumerical;
}

int cmd_solve_ref(const h::ExperimentConfig& c) {
  const h::BuiltProblem built = h::build_problem(c);
  const proxrr::Vec x = h::solve_reference_for(c, built);
  std::filesystem::create_directories(c.output);
  const auto path = std::filesystem::path(c.output) / "x_star.csv";
  h::write_vector_csv(path, x);
  const double gamma = 1.0 / (2.0 * built.problem.l_max());
  std::cout << "objective " << h::format_double(built.problem.objective(x)) << '\n'
            << "residual " << h::format_double(proxrr::prox_gradient_residual(built.problem, x, gamma)) << '\n'
            << "l1 " << h::format_double(built.l1) << " l2 " << h::format_double(built.l2) << '\n'
            << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_diagnose(const h::ExperimentConfig& c) {
  const auto report = h::diagnose(c);
  std::filesystem::create_directories(c.output);
  const auto path = std::filesystem::path(c.output) / "diagnose.json";
  std::ofstream out(path);
  out << report.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::cout << report.dump(2) << '\n';
  return kOk;
}

int cmd_validate(const h::ExperimentConfig& c) {
  const h::SparseDataset data = h::load_dataset(c.dataset);
  std::cout << "config ok: " << c.algorithms.size() << " algorithms, " << c.seeds.size() << " seeds, "
            << c.epochs << " epochs; dataset " << data.size() << " rows x " << data.dim << " features\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proximal random reshuffling experiments"};
  app.require_subcommand(1);

  Overrides o;
  std::string config_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "experiment config (JSON)")->required();
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { o.seed = s; },
                                            "run a single seed instead of the config's list");
    sub->add_option_function<std::string>("--out", [&](const std::string& s) { o.out = s; }, "output directory");
    sub->add_option_function<std::size_t>("--threads", [&](const std::size_t& t) { o.threads = t; },
                                          "worker threads (0: all cores)");
  };
  auto* run = app.add_subcommand("run", "run every (algorithm, seed) cell and write CSVs");
  auto* solve = app.add_subcommand("solve-ref", "compute the reference solution x_*");
  auto* diag = app.add_subcommand("diagnose", "report the shuffling radius and related constants");
  auto* val = app.add_subcommand("validate", "check the config and load the dataset");
  for (auto* sub : {run, solve, diag, val}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    const h::ExperimentConfig c = load(config_path, o);
    if (run->parsed()) return cmd_run(c);
    if (solve->parsed()) return cmd_solve_ref(c);
    if (diag->parsed()) return cmd_diagnose(c);
    return cmd_validate(c);
  } catch (const h::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const proxrr::ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const proxrr::DivergenceError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const proxrr::ConvergenceError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const proxrr::ArgumentError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
}
