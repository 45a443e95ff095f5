#include "proxrr/harness/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

namespace proxrr::harness {

using nlohmann::json;

namespace {

template <class E>
using NameTable = std::vector<std::pair<E, const char*>>;

const NameTable<AlgorithmName> kAlgorithms = {
    {AlgorithmName::prox_rr, "prox_rr"},   {AlgorithmName::prox_so, "prox_so"},
    {AlgorithmName::prox_sgd, "prox_sgd"}, {AlgorithmName::rr_heuristic, "rr_heuristic"},
    {AlgorithmName::prox_gd, "prox_gd"},   {AlgorithmName::fed_rr, "fed_rr"},
    {AlgorithmName::fed_so, "fed_so"}};
const NameTable<ScheduleKind> kSchedules = {
    {ScheduleKind::constant, "constant"}, {ScheduleKind::decreasing, "decreasing"}, {ScheduleKind::tuned, "tuned"}};
const NameTable<DatasetKind> kDatasets = {{DatasetKind::synthetic, "synthetic"}, {DatasetKind::libsvm, "libsvm"}};
const NameTable<Placement> kPlacements = {{Placement::regularizer, "regularizer"}, {Placement::loss, "loss"}};
const NameTable<Partition> kPartitions = {
    {Partition::iid, "iid"}, {Partition::by_label, "by-label"}, {Partition::by_shard, "by-shard"}};

template <class E>
std::string name_of(const NameTable<E>& table, E value) {
  for (const auto& [e, s] : table) {
    if (e == value) return s;
  }
  throw ConfigError("unnamed enum value");
}

template <class E>
E enum_of(const NameTable<E>& table, const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  const auto s = j.get<std::string>();
  for (const auto& [e, name] : table) {
    if (s == name) return e;
  }
  std::string allowed;
  for (const auto& [e, name] : table) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  throw ConfigError(where + ": unknown value '" + s + "' (expected one of " + allowed + ")");
}

// Object reader that rejects keys it was never asked about.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  const json* get(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  const json& require(const char* key) {
    const json* v = get(key);
    if (!v) throw ConfigError(where_ + ": missing key '" + key + "'");
    return *v;
  }
  std::string path(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

std::uint64_t as_uint(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ConfigError(where + ": expected a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

// A number, or the string "auto" for nullopt.
std::optional<double> auto_or_double(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "auto") return std::nullopt;
    throw ConfigError(where + ": expected a number or \"auto\"");
  }
  return as_double(j, where);
}

DatasetSpec parse_dataset(const json& j) {
  Fields f(j, "dataset");
  DatasetSpec d;
  d.kind = enum_of(kDatasets, f.require("kind"), f.path("kind"));
  if (d.kind == DatasetKind::libsvm) {
    d.path = as_string(f.require("path"), f.path("path"));
    if (const json* v = f.get("dim")) d.dim = as_uint(*v, f.path("dim"));
  } else {
    if (const json* v = f.get("n")) d.n = as_uint(*v, f.path("n"));
    if (const json* v = f.get("d")) d.d = as_uint(*v, f.path("d"));
    if (const json* v = f.get("sparsity")) d.sparsity = as_double(*v, f.path("sparsity"));
    if (const json* v = f.get("label_noise")) d.label_noise = as_double(*v, f.path("label_noise"));
    if (const json* v = f.get("seed")) d.seed = as_uint(*v, f.path("seed"));
  }
  f.finish();
  return d;
}

RegularizationSpec parse_regularization(const json& j) {
  Fields f(j, "regularization");
  RegularizationSpec r;
  r.l1 = 0.0;
  if (const json* v = f.get("l1")) r.l1 = auto_or_double(*v, f.path("l1"));
  if (const json* v = f.get("l2")) r.l2 = auto_or_double(*v, f.path("l2"));
  if (const json* v = f.get("placement")) r.placement = enum_of(kPlacements, *v, f.path("placement"));
  f.finish();
  return r;
}

AlgorithmSpec parse_algorithm(const json& j, std::size_t index) {
  Fields f(j, "algorithms[" + std::to_string(index) + "]");
  AlgorithmSpec a;
  a.name = enum_of(kAlgorithms, f.require("name"), f.path("name"));
  if (const json* v = f.get("schedule")) a.schedule = enum_of(kSchedules, *v, f.path("schedule"));
  if (const json* v = f.get("stepsize")) a.stepsize = as_double(*v, f.path("stepsize"));
  if (const json* v = f.get("epsilon")) a.epsilon = as_double(*v, f.path("epsilon"));
  f.finish();
  return a;
}

FederatedSpec parse_federated(const json& j) {
  Fields f(j, "federated");
  FederatedSpec s;
  s.clients = as_uint(f.require("clients"), f.path("clients"));
  if (const json* v = f.get("partition")) s.partition = enum_of(kPartitions, *v, f.path("partition"));
  if (const json* v = f.get("seed")) s.seed = as_uint(*v, f.path("seed"));
  f.finish();
  return s;
}

json auto_or(const std::optional<double>& v) { return v ? json(*v) : json("auto"); }

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::string to_string(AlgorithmName name) { return name_of(kAlgorithms, name); }
std::string to_string(ScheduleKind kind) { return name_of(kSchedules, kind); }

ExperimentConfig parse_config(const json& j) {
  Fields f(j, "config");
  ExperimentConfig c;
  c.dataset = parse_dataset(f.require("dataset"));
  if (const json* v = f.get("regularization")) {
    c.regularization = parse_regularization(*v);
  } else {
    c.regularization.l1 = 0.0;
  }
  const json& algs = f.require("algorithms");
  if (!algs.is_array()) throw ConfigError("config.algorithms: expected an array");
  for (std::size_t i = 0; i < algs.size(); ++i) c.algorithms.push_back(parse_algorithm(algs[i], i));
  c.epochs = as_uint(f.require("epochs"), "config.epochs");
  if (const json* v = f.get("seeds")) {
    if (!v->is_array()) throw ConfigError("config.seeds: expected an array");
    c.seeds.clear();
    for (const auto& s : *v) c.seeds.push_back(as_uint(s, "config.seeds"));
  }
  if (const json* v = f.get("federated")) c.federated = parse_federated(*v);
  if (const json* v = f.get("reference")) {
    Fields r(*v, "reference");
    if (const json* t = r.get("tol")) c.reference.tol = as_double(*t, r.path("tol"));
    if (const json* t = r.get("max_iters")) c.reference.max_iters = as_uint(*t, r.path("max_iters"));
    r.finish();
  }
  if (const json* v = f.get("diagnose")) {
    Fields r(*v, "diagnose");
    if (const json* t = r.get("num_perms")) c.diagnose.num_perms = as_uint(*t, r.path("num_perms"));
    if (const json* t = r.get("exact_max_n")) c.diagnose.exact_max_n = as_uint(*t, r.path("exact_max_n"));
    r.finish();
  }
  if (const json* v = f.get("output")) c.output = as_string(*v, "config.output");
  if (const json* v = f.get("threads")) c.threads = as_uint(*v, "config.threads");
  f.finish();
  validate(c);
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j;
  json d;
  d["kind"] = name_of(kDatasets, c.dataset.kind);
  if (c.dataset.kind == DatasetKind::libsvm) {
    d["path"] = c.dataset.path;
    if (c.dataset.dim) d["dim"] = *c.dataset.dim;
  } else {
    d["n"] = c.dataset.n;
    d["d"] = c.dataset.d;
    d["sparsity"] = c.dataset.sparsity;
    d["label_noise"] = c.dataset.label_noise;
    d["seed"] = c.dataset.seed;
  }
  j["dataset"] = d;
  j["regularization"] = {{"l1", auto_or(c.regularization.l1)},
                         {"l2", auto_or(c.regularization.l2)},
                         {"placement", name_of(kPlacements, c.regularization.placement)}};
  json algs = json::array();
  for (const auto& a : c.algorithms) {
    json aj = {{"name", name_of(kAlgorithms, a.name)}, {"schedule", name_of(kSchedules, a.schedule)}};
    if (a.stepsize) aj["stepsize"] = *a.stepsize;
    if (a.epsilon) aj["epsilon"] = *a.epsilon;
    algs.push_back(aj);
  }
  j["algorithms"] = algs;
  j["epochs"] = c.epochs;
  j["seeds"] = c.seeds;
  if (c.federated) {
    j["federated"] = {{"clients", c.federated->clients},
                      {"partition", name_of(kPartitions, c.federated->partition)},
                      {"seed", c.federated->seed}};
  }
  j["reference"] = {{"tol", c.reference.tol}, {"max_iters", c.reference.max_iters}};
  j["diagnose"] = {{"num_perms", c.diagnose.num_perms}, {"exact_max_n", c.diagnose.exact_max_n}};
  j["output"] = c.output;
  j["threads"] = c.threads;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& c) {
  if (c.epochs == 0) throw ConfigError("empty budget: epochs must be at least 1");
  if (c.algorithms.empty()) throw ConfigError("no algorithms configured");
  if (c.seeds.empty()) throw ConfigError("no seeds configured");
  if (c.dataset.kind == DatasetKind::synthetic) {
    if (c.dataset.n == 0 || c.dataset.d == 0) throw ConfigError("dataset: n and d must be positive");
    if (!(c.dataset.sparsity > 0.0 && c.dataset.sparsity <= 1.0)) throw ConfigError("dataset: sparsity must be in (0, 1]");
    if (!(c.dataset.label_noise >= 0.0 && c.dataset.label_noise <= 1.0)) {
      throw ConfigError("dataset: label_noise must be in [0, 1]");
    }
  } else if (c.dataset.path.empty()) {
    throw ConfigError("dataset: libsvm needs a path");
  }
  if (c.dataset.dim && *c.dataset.dim == 0) throw ConfigError("dataset: dim must be positive");
  const auto& r = c.regularization;
  if (r.l1 && !(std::isfinite(*r.l1) && *r.l1 >= 0.0)) throw ConfigError("regularization: l1 must be >= 0");
  if (r.l2 && !(std::isfinite(*r.l2) && *r.l2 >= 0.0)) throw ConfigError("regularization: l2 must be >= 0");
  for (const auto& a : c.algorithms) {
    const std::string name = to_string(a.name);
    if (a.stepsize && !positive(*a.stepsize)) throw ConfigError(name + ": stepsize must be positive");
    if (a.stepsize && a.schedule != ScheduleKind::constant) {
      throw ConfigError(name + ": an explicit stepsize needs the constant schedule");
    }
    if (a.schedule == ScheduleKind::tuned) {
      if (!a.epsilon) throw ConfigError(name + ": tuned schedule needs epsilon");
      if (!positive(*a.epsilon)) throw ConfigError(name + ": epsilon must be positive");
    }
    const bool fed = a.name == AlgorithmName::fed_rr || a.name == AlgorithmName::fed_so;
    if (fed && !c.federated) throw ConfigError(name + ": needs a federated block");
    if (fed && a.schedule != ScheduleKind::constant) throw ConfigError(name + ": only the constant schedule is supported");
    if (a.name == AlgorithmName::prox_gd && a.schedule != ScheduleKind::constant) {
      throw ConfigError("prox_gd: only the constant schedule is supported");
    }
  }
  if (c.federated && c.federated->clients == 0) throw ConfigError("federated: clients must be positive");
  if (!positive(c.reference.tol)) throw ConfigError("reference: tol must be positive");
  if (c.reference.max_iters == 0) throw ConfigError("reference: max_iters must be positive");
  if (c.diagnose.num_perms == 0) throw ConfigError("diagnose: num_perms must be positive");
  if (c.diagnose.exact_max_n > 8) throw ConfigError("diagnose: exact_max_n above 8 is too expensive");
  if (c.output.empty()) throw ConfigError("output must not be empty");
}

}  // namespace proxrr::harness
