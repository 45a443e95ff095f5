#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "proxrr/algorithms.hpp"
#include "proxrr/errors.hpp"
#include "proxrr/harness/config.hpp"
#include "proxrr/harness/csv.hpp"
#include "proxrr/harness/dataset.hpp"
#include "proxrr/harness/experiment.hpp"
#include "proxrr/reference.hpp"

using namespace proxrr;
using namespace proxrr::harness;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("proxrr_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SparseDataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_libsvm(in, "test");
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

json small_config(const fs::path& out) {
  return json{{"dataset", {{"kind", "synthetic"}, {"n", 30}, {"d", 4}, {"sparsity", 1.0}, {"seed", 3}}},
              {"regularization", {{"l1", 0.01}, {"l2", "auto"}}},
              {"algorithms", json::array({{{"name", "prox_rr"}}, {{"name", "prox_sgd"}}, {{"name", "rr_heuristic"}}})},
              {"epochs", 40},
              {"seeds", {0, 1}},
              {"output", out.string()},
              {"threads", 2}};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + PROXRR_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("libsvm: single lines") {
  const auto a = parse("+1 3:0.5 7:1.2\n");
  REQUIRE(a.size() == 1);
  CHECK(a.labels[0] == 1);
  CHECK(a.rows[0].indices == std::vector<std::uint32_t>{2, 6});
  CHECK(a.rows[0].values == std::vector<double>{0.5, 1.2});
  CHECK(a.dim == 7);

  const auto b = parse("-1\n+1 1:2\n");
  CHECK(b.labels == std::vector<int>{0, 1});
  CHECK(b.rows[0].indices.empty());
  CHECK(b.rows[0].dim == 1);
}

TEST_CASE("libsvm: label conventions") {
  CHECK(parse("0 1:1\n1 2:1\n").labels == std::vector<int>{0, 1});
  CHECK(parse("1 1:1\n2 2:1\n").labels == std::vector<int>{0, 1});
  CHECK(parse("-1 1:1\n1 2:1\n").labels == std::vector<int>{0, 1});
  CHECK(parse("# comment\n\n1 1:1\n\n-1 1:2\n").size() == 2);
  CHECK(parse_error_line("1 1:1\n2 1:1\n-1 1:1\n") == 3);
  CHECK(parse_error_line("1 1:1\n5 1:1\n") == 2);
}

TEST_CASE("libsvm: malformed input names the line") {
  CHECK(parse_error_line("1 1:1\n1 3:0.5 1:0.2\n") == 2);
  CHECK(parse_error_line("1 2:1 2:1\n") == 1);
  CHECK(parse_error_line("1 0:1\n") == 1);
  CHECK(parse_error_line("1 1:1\n1 x:1\n") == 2);
  CHECK(parse_error_line("1 1:abc\n") == 1);
  CHECK(parse_error_line("1 11\n") == 1);
  CHECK(parse_error_line("one 1:1\n") == 1);
  std::istringstream in("1 1:1 5:1\n");
  CHECK_THROWS_AS(parse_libsvm(in, "x", 4), ParseError);
  CHECK_THROWS_AS(parse_libsvm(fs::path("/nonexistent/file.svm")), ParseError);
}

TEST_CASE("libsvm: file round trip with declared dimension") {
  const fs::path dir = scratch("libsvm");
  {
    std::ofstream f(dir / "d.svm");
    f << "+1 1:0.25 4:-3e-2\n-1 2:1\n";
  }
  const auto d = parse_libsvm(dir / "d.svm", 10);
  CHECK(d.dim == 10);
  CHECK(d.rows[0].dim == 10);
  CHECK(d.rows[0].values[1] == -0.03);
}

TEST_CASE("synthetic data is reproducible") {
  const auto a = synth_logreg(50, 8, 0.3, 0.1, 9);
  const auto b = synth_logreg(50, 8, 0.3, 0.1, 9);
  CHECK(a == b);
  CHECK_FALSE(a == synth_logreg(50, 8, 0.3, 0.1, 10));
  const auto dense = synth_logreg(20, 6, 1.0, 0.0, 1);
  for (const auto& row : dense.rows) CHECK(row.indices.size() == 6);
}

TEST_CASE("planted model is recovered without label noise") {
  const auto data = synth_logreg(300, 5, 1.0, 0.0, 4);
  // Separable data and no ridge: gradient descent drifts toward a separating direction.
  const Problem p(logistic_components(data), Regularizer::zero());
  const Vec x = prox_gd(p, Vec::Zero(5), 1.0 / p.l_max(), 200000).x;
  CHECK(misclassification_rate(data, x) <= 1e-3);
}

TEST_CASE("partitions cover every row once") {
  const auto data = synth_logreg(41, 3, 1.0, 0.1, 2);
  for (auto part : {Partition::iid, Partition::by_label, Partition::by_shard}) {
    const auto groups = partition_rows(data, 4, part, 5);
    REQUIRE(groups.size() == 4);
    std::vector<int> seen(41, 0);
    for (const auto& g : groups) {
      CHECK(!g.empty());
      for (auto i : g) ++seen[i];
    }
    for (int s : seen) CHECK(s == 1);
  }
  CHECK_THROWS_AS(partition_rows(data, 50, Partition::iid, 0), ArgumentError);
}

TEST_CASE("csv helpers") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
  const fs::path dir = scratch("csv");
  Vec v(3);
  v << 1.0 / 3.0, -2.5e-17, 7.0;
  write_vector_csv(dir / "v.csv", v);
  CHECK(read_vector_csv(dir / "v.csv") == v);
  CHECK(slurp(dir / "v.csv").rfind("index,value\n", 0) == 0);
}

TEST_CASE("config round trip") {
  const json j = small_config("o");
  const ExperimentConfig c = parse_config(j);
  CHECK(c.dataset.n == 30);
  CHECK_FALSE(c.regularization.l2.has_value());
  CHECK(c.algorithms.size() == 3);
  CHECK(parse_config(to_json(c)) == c);
  CHECK(to_json(parse_config(to_json(c))) == to_json(c));

  json fed = j;
  fed["algorithms"] = json::array({{{"name", "fed_rr"}}});
  fed["federated"] = {{"clients", 3}, {"partition", "by-shard"}};
  const auto cf = parse_config(fed);
  CHECK(cf.federated->partition == Partition::by_shard);
  CHECK(parse_config(to_json(cf)) == cf);
}

TEST_CASE("config validation") {
  json j = small_config("o");
  j["epochs"] = 0;
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("empty budget") != std::string::npos);
  }
  json unknown = small_config("o");
  unknown["colour"] = "red";
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  json bad_alg = small_config("o");
  bad_alg["algorithms"] = json::array({{{"name", "adam"}}});
  CHECK_THROWS_AS(parse_config(bad_alg), ConfigError);
  json no_fed = small_config("o");
  no_fed["algorithms"] = json::array({{{"name", "fed_rr"}}});
  CHECK_THROWS_AS(parse_config(no_fed), ConfigError);
  json tuned = small_config("o");
  tuned["algorithms"] = json::array({{{"name", "prox_rr"}, {"schedule", "tuned"}}});
  CHECK_THROWS_AS(parse_config(tuned), ConfigError);
  json step = small_config("o");
  step["algorithms"] = json::array({{{"name", "prox_rr"}, {"schedule", "decreasing"}, {"stepsize", 0.1}}});
  CHECK_THROWS_AS(parse_config(step), ConfigError);
  json neg = small_config("o");
  neg["regularization"]["l1"] = -1.0;
  CHECK_THROWS_AS(parse_config(neg), ConfigError);
}

TEST_CASE("run_experiment writes traces with the documented counters") {
  const fs::path dir = scratch("run");
  const ExperimentConfig c = parse_config(small_config(dir / "a"));
  const ExperimentResult r = run_experiment(c);
  CHECK(r.all_cells_ok());
  CHECK(r.cells.size() == 6);
  for (const char* f : {"config.json", "x_star.csv", "cells.csv", "summary.csv", "checks.csv", "prox_rr_seed0.csv",
                        "prox_sgd_seed1.csv", "rr_heuristic_seed0.csv"}) {
    CHECK(fs::exists(dir / "a" / f));
  }
  const std::string trace = slurp(dir / "a" / "prox_rr_seed0.csv");
  CHECK(trace.rfind("epoch,stepsize,dist_sq_to_opt,objective,grad_calls,prox_calls\n", 0) == 0);
  for (const auto& cell : r.cells) {
    const auto& last = cell.trace.back();
    CHECK(last.epoch == 40);
    if (cell.algorithm == AlgorithmName::prox_rr) CHECK(last.prox_calls == 40);
    else CHECK(last.prox_calls == 30 * 40);
  }
  CHECK(parse_config(json::parse(slurp(dir / "a" / "config.json"))) == c);

  // Same config, different output directory: identical bytes.
  ExperimentConfig c2 = c;
  c2.output = (dir / "b").string();
  c2.threads = 1;
  run_experiment(c2);
  for (const char* f : {"prox_rr_seed0.csv", "prox_sgd_seed1.csv", "rr_heuristic_seed1.csv", "summary.csv", "x_star.csv",
                        "checks.csv"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
}

TEST_CASE("auto regularization") {
  json j = small_config("o");
  j["dataset"]["d"] = 12;
  j["regularization"] = {{"l1", "auto"}, {"l2", "auto"}};
  const auto built = build_problem(parse_config(j));
  CHECK(built.l1 > 0.0);
  CHECK(built.l2 == doctest::Approx(smoothness_constants(Problem(logistic_components(built.data), Regularizer::zero())).l_max / 30.0));
  const Vec xs = solve_reference(built.problem);
  std::size_t nnz = 0;
  for (Eigen::Index k = 0; k < xs.size(); ++k) nnz += xs[k] != 0.0;
  CHECK(double(nnz) < 0.5 * 12);
}

TEST_CASE("cli exit codes") {
  const fs::path dir = scratch("cli");
  const fs::path good = dir / "good.json";
  json j = small_config(dir / "out");
  j["epochs"] = 5;
  std::ofstream(good) << j.dump(2);
  CHECK(run_cli("validate " + good.string()) == 0);
  CHECK(run_cli("run " + good.string() + " --seed 4 --threads 1") == 0);
  CHECK(fs::exists(dir / "out" / "prox_rr_seed4.csv"));
  CHECK(run_cli("solve-ref " + good.string() + " --out " + (dir / "ref").string()) == 0);
  CHECK(fs::exists(dir / "ref" / "x_star.csv"));
  CHECK(run_cli("diagnose " + good.string() + " --out " + (dir / "diag").string()) == 0);
  CHECK(fs::exists(dir / "diag" / "diagnose.json"));

  json empty = j;
  empty["epochs"] = 0;
  std::ofstream(dir / "empty.json") << empty.dump();
  CHECK(run_cli("run " + (dir / "empty.json").string()) == 2);

  json missing = j;
  missing["dataset"] = {{"kind", "libsvm"}, {"path", (dir / "nope.svm").string()}};
  std::ofstream(dir / "missing.json") << missing.dump();
  CHECK(run_cli("run " + (dir / "missing.json").string()) == 3);

  std::ofstream(dir / "bad.svm") << "1 2:1 1:1\n";
  json malformed = j;
  malformed["dataset"] = {{"kind", "libsvm"}, {"path", (dir / "bad.svm").string()}};
  std::ofstream(dir / "malformed.json") << malformed.dump();
  CHECK(run_cli("validate " + (dir / "malformed.json").string()) == 3);

  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(run_cli("run " + (dir / "broken.json").string()) == 2);
  CHECK(run_cli("run " + (dir / "absent.json").string()) != 0);
  CHECK(run_cli("frobnicate") != 0);

  json diverge = j;
  // Ridge inside the losses makes every step multiply x by about (1 - 1e6).
  diverge["regularization"] = {{"l1", 0.0}, {"l2", 1.0}, {"placement", "loss"}};
  diverge["algorithms"] = json::array({{{"name", "prox_rr"}, {"stepsize", 1e6}}});
  std::ofstream(dir / "diverge.json") << diverge.dump();
  CHECK(run_cli("run " + (dir / "diverge.json").string()) == 4);
}
