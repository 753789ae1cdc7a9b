#include "effdom/cli.hpp"

#include <cmath>
#include <limits>

#include "effdom/dominance.hpp"
#include "effdom/families.hpp"
#include "effdom/simulate.hpp"
#include "effdom/spectral.hpp"

namespace effdom::cli {

using nlohmann::ordered_json;

namespace {

// JSON has no infinities; a null value stands for +infinity.
ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json vec(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

struct Loaded {
  ProblemFile problem;
  std::string digest;
};

Loaded load(const std::string& path) {
  const std::string bytes = read_file(path);
  return {parse_problem(bytes), fnv1a64_hex(bytes)};
}

ordered_json base_tolerances() {
  return ordered_json{{"tol_sum", tol::kSum},       {"tol_rev", tol::kReversible},
                      {"tol_edge", tol::kEdge},     {"tol_center", tol::kCenter},
                      {"tol_one", tol::kOne},       {"tol_mass", tol::kMass},
                      {"tol_pos", tol::kPositive},  {"tol_pesk", tol::kPeskun},
                      {"tol_residual", tol::kResidual}};
}

ordered_json skeleton(const std::string& command, ordered_json arguments, const std::string& file,
                      const std::string& digest) {
  ordered_json r;
  r["command"] = command;
  r["arguments"] = std::move(arguments);
  r["input"] = {{"file", file}, {"fnv1a64", digest}};
  r["results"] = ordered_json::object();
  r["tolerances"] = base_tolerances();
  r["version"] = kVersion;
  return r;
}

ordered_json error_json(const std::exception& e) {
  ordered_json j;
  if (const auto* err = dynamic_cast<const Error*>(&e)) j["code"] = std::string(to_string(err->code()));
  else j["code"] = "Exception";
  j["message"] = e.what();
  return j;
}

TransitionKernel kernel_from(const ProblemFile& problem, const std::string& name,
                             const StationaryDistribution& pi) {
  return validate_kernel(problem.kernel(name), pi);
}

ordered_json variance_json(const VarianceResult& v) {
  ordered_json j;
  j["method"] = std::string(to_string(v.method));
  j["value"] = num(v.value);
  j["divergent"] = !v.finite();
  j["weight_near_one"] = v.weight_near_one;
  if (v.method == VarianceMethod::Autocov) {
    j["lags"] = v.lags;
    j["truncation_bound"] = v.truncation_bound;
  }
  return j;
}

ordered_json dominance_json(const DominanceReport& r) {
  ordered_json j;
  j["relation"] = std::string(to_string(r.relation));
  j["summary"] = r.summary();
  if (r.min_eig_qp) j["min_eig_qp"] = *r.min_eig_qp;
  if (r.min_eig_pq) j["min_eig_pq"] = *r.min_eig_pq;
  j["tolerance"] = r.tolerance;
  j["max_entry_difference"] = r.max_entry_difference;
  if (r.kind == OrderKind::Efficiency) {
    j["hypotheses_verified"] = r.hypotheses_verified;
  } else {
    j["p_dominates"] = r.p_dominates();
    ordered_json witness = ordered_json::array();
    for (const auto& w : r.witness) witness.push_back({{"x", w.x}, {"y", w.y}, {"p", w.p}, {"q", w.q}});
    j["witness"] = std::move(witness);
  }
  return j;
}

int exit_for(Relation r) {
  switch (r) {
    case Relation::Dominates: return kExitOk;
    case Relation::Dominated: return kExitDominated;
    case Relation::Incomparable: return kExitIncomparable;
    case Relation::Equal: return kExitEqual;
  }
  return kExitFailure;
}

// Runs every structural check; returns the report block and whether all passed.
std::pair<ordered_json, bool> check_problem(const ProblemFile& problem) {
  ordered_json out;
  bool pass = true;
  std::optional<StationaryDistribution> pi;
  try {
    pi.emplace(problem.pi);
    out["pi"] = {{"valid", true}};
  } catch (const std::exception& e) {
    out["pi"] = {{"valid", false}, {"error", error_json(e)}};
    pass = false;
  }

  ordered_json kernels = ordered_json::array();
  for (const auto& [name, m] : problem.kernels) {
    ordered_json k;
    k["name"] = name;
    try {
      const auto kernel = pi ? validate_kernel(m, *pi) : validate_stochastic(m);
      const bool irreducible = check_irreducible(kernel);
      k["stochastic"] = kernel.checks().stochastic;
      k["stationary"] = pi ? ordered_json(kernel.checks().stationary) : ordered_json(nullptr);
      k["reversible"] = pi ? ordered_json(kernel.checks().reversible) : ordered_json(nullptr);
      k["irreducible"] = irreducible;
      k["period"] = irreducible ? ordered_json(compute_period(kernel).period) : ordered_json(nullptr);
      if (pi) k["detailed_balance_defect"] = detailed_balance_defect(kernel.matrix(), *pi);
      const bool ok = kernel.checks().stochastic && kernel.checks().stationary &&
                      kernel.checks().reversible && irreducible;
      k["passed"] = ok;
      pass = pass && ok;
    } catch (const std::exception& e) {
      k["passed"] = false;
      k["error"] = error_json(e);
      pass = false;
    }
    kernels.push_back(std::move(k));
  }
  out["kernels"] = std::move(kernels);

  ordered_json observables = ordered_json::array();
  for (const auto& [name, f] : problem.observables) {
    ordered_json o{{"name", name}, {"finite", f.allFinite()}};
    if (pi) o["mean"] = expectation(f, *pi);
    pass = pass && f.allFinite();
    observables.push_back(std::move(o));
  }
  out["observables"] = std::move(observables);
  out["passed"] = pass;
  return {std::move(out), pass};
}

}  // namespace

ordered_json error_report(const std::string& command, const std::exception& e) {
  ordered_json r;
  r["command"] = command;
  r["error"] = error_json(e);
  r["version"] = kVersion;
  return r;
}

CommandOutput cmd_validate(const ValidateArgs& args) {
  auto [problem, digest] = load(args.file);
  CommandOutput out;
  out.report = skeleton("validate",
                        {{"repair", args.repair}, {"prune", args.prune},
                         {"output", args.output ? ordered_json(*args.output) : ordered_json(nullptr)}},
                        args.file, digest);
  auto& results = out.report["results"];
  results["n"] = problem.n;
  if (args.prune) {
    results["pruned_states"] = prune_zero_mass(problem);
    results["n_after_prune"] = problem.n;
  }

  auto [checks, pass] = check_problem(problem);
  results["checks"] = std::move(checks);
  if (args.repair) {
    if (problem.pi.sum() > 0.0) problem.pi /= problem.pi.sum();
    for (auto& [name, m] : problem.kernels) m = renormalize_rows(std::move(m));
    auto [repaired, repaired_pass] = check_problem(problem);
    results["after_repair"] = std::move(repaired);
    pass = repaired_pass;
  }
  if (args.output) write_file(*args.output, dump_problem(problem));
  results["passed"] = pass;
  out.exit_code = pass ? kExitOk : kExitFailure;
  return out;
}

CommandOutput cmd_spectrum(const SpectrumArgs& args) {
  const auto [problem, digest] = load(args.file);
  CommandOutput out;
  out.report = skeleton("spectrum", {{"kernel", args.kernel}}, args.file, digest);
  const auto pi = problem.distribution();
  const auto k = kernel_from(problem, args.kernel, pi);
  const auto dec = eigendecompose_restricted(k, pi);
  const bool irreducible = check_irreducible(k);

  auto& results = out.report["results"];
  results["n"] = problem.n;
  results["eigenvalues"] = vec(dec.eigenvalues);
  results["spectral_gap"] = 1.0 - dec.max_eigenvalue();
  results["spectral_radius"] = dec.spectral_radius();
  results["antithetic"] = is_antithetic(k, pi);
  results["irreducible"] = irreducible;
  results["period"] = irreducible ? ordered_json(compute_period(k).period) : ordered_json(nullptr);
  results["residual"] = dec.residual;
  results["orthonormality_defect"] = dec.orthonormality_defect;
  return out;
}

CommandOutput cmd_variance(const VarianceArgs& args) {
  if (args.method != "spectral" && args.method != "autocov" && args.method != "both")
    throw Error(ErrorCode::InvalidArgument, "method must be spectral, autocov or both");
  const auto [problem, digest] = load(args.file);
  CommandOutput out;
  out.report = skeleton("variance",
                        {{"kernel", args.kernel}, {"observable", args.observable},
                         {"method", args.method}, {"tail_tol", args.tail_tol},
                         {"unchecked", args.unchecked}},
                        args.file, digest);
  out.report["tolerances"]["tail_tol"] = args.tail_tol;
  const auto pi = problem.distribution();
  const auto k = kernel_from(problem, args.kernel, pi);
  const Observable f(problem.observable(args.observable));

  auto& results = out.report["results"];
  results["hypotheses_verified"] = !args.unchecked;
  std::optional<VarianceResult> spectral;
  std::optional<VarianceResult> autocov;
  if (args.method != "autocov") {
    if (args.unchecked) {
      const auto dec = eigendecompose_restricted(k, pi);
      spectral = variance_from_measure(spectral_measure(center_observable(f, pi), dec, pi));
    } else {
      spectral = asymptotic_variance_spectral(f, k, pi);
    }
    results["spectral"] = variance_json(*spectral);
  }
  if (args.method != "spectral") {
    autocov = asymptotic_variance_autocov(f, k, pi, args.tail_tol);
    results["autocov"] = variance_json(*autocov);
  }
  if (spectral && autocov) results["agreement_delta"] = num(std::abs(spectral->value - autocov->value));
  return out;
}

CommandOutput cmd_compare(const CompareArgs& args) {
  const auto [problem, digest] = load(args.file);
  CommandOutput out;
  out.report = skeleton("compare",
                        {{"p", args.p}, {"q", args.q}, {"peskun", args.peskun}, {"tol", args.tol},
                         {"unchecked", args.unchecked}},
                        args.file, digest);
  out.report["tolerances"]["tol_pos"] = args.tol;
  const auto pi = problem.distribution();
  const auto p = kernel_from(problem, args.p, pi);
  const auto q = kernel_from(problem, args.q, pi);

  DominanceOptions options;
  options.tol_pos = args.tol;
  options.unchecked = args.unchecked;
  const auto efficiency = efficiency_dominates(p, q, pi, options);
  auto& results = out.report["results"];
  results["efficiency"] = dominance_json(efficiency);
  if (args.peskun) results["peskun"] = dominance_json(peskun_dominates(p, q, pi));
  out.exit_code = exit_for(efficiency.relation);
  results["exit_code"] = out.exit_code;
  return out;
}

CommandOutput cmd_order(const OrderArgs& args) {
  const auto [problem, digest] = load(args.file);
  CommandOutput out;
  out.report = skeleton("order",
                        {{"kernels", args.kernels}, {"tol", args.tol}, {"unchecked", args.unchecked},
                         {"edges", args.edges_path ? ordered_json(*args.edges_path) : ordered_json(nullptr)}},
                        args.file, digest);
  out.report["tolerances"]["tol_pos"] = args.tol;
  const auto pi = problem.distribution();

  std::vector<std::string> names = args.kernels;
  if (names.empty())
    for (const auto& [name, m] : problem.kernels) names.push_back(name);
  std::vector<NamedKernel> kernels;
  for (const auto& name : names) kernels.push_back({name, kernel_from(problem, name, pi)});

  DominanceOptions options;
  options.tol_pos = args.tol;
  options.unchecked = args.unchecked;
  const auto diagram = partial_order_diagram(kernels, pi, options);

  auto& results = out.report["results"];
  ordered_json nodes = ordered_json::array();
  for (std::size_t i = 0; i < diagram.nodes.size(); ++i)
    nodes.push_back({{"label", diagram.node_label(i)}, {"members", diagram.nodes[i]}});
  results["nodes"] = std::move(nodes);
  ordered_json edges = ordered_json::array();
  for (const auto& [a, b] : diagram.edges)
    edges.push_back({{"from", diagram.node_label(a)}, {"to", diagram.node_label(b)}});
  results["edges"] = std::move(edges);
  ordered_json pairwise = ordered_json::array();
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      pairwise.push_back({{"p", names[i]}, {"q", names[j]},
                          {"relation", std::string(to_string(diagram.pairwise[i][j]))}});
  results["pairwise"] = std::move(pairwise);
  ordered_json violations = ordered_json::array();
  for (const auto& [a, b, c] : diagram.transitivity_violations)
    violations.push_back({diagram.node_label(a), diagram.node_label(b), diagram.node_label(c)});
  results["transitivity_violations"] = std::move(violations);
  results["acyclic"] = diagram.acyclic;
  results["hypotheses_verified"] = !args.unchecked;
  if (args.edges_path) write_file(*args.edges_path, diagram.edge_list());
  return out;
}

CommandOutput cmd_simulate(const SimulateArgs& args) {
  if (args.method != "batch" && args.method != "overlapping")
    throw Error(ErrorCode::InvalidArgument, "method must be batch or overlapping");
  const auto [problem, digest] = load(args.file);
  CommandOutput out;
  out.report = skeleton(
      "simulate",
      {{"kernel", args.kernel}, {"observable", args.observable}, {"n_steps", args.n_steps},
       {"reps", args.reps}, {"seed", args.seed},
       {"batch_len", args.batch_len ? ordered_json(*args.batch_len) : ordered_json(nullptr)},
       {"method", args.method},
       {"export_path", args.export_path ? ordered_json(*args.export_path) : ordered_json(nullptr)}},
      args.file, digest);
  const auto pi = problem.distribution();
  const auto k = kernel_from(problem, args.kernel, pi);
  const Observable f(problem.observable(args.observable));

  SimulationOptions options;
  options.n_steps = args.n_steps;
  options.replicates = args.reps;
  options.seed = args.seed;
  options.batch_len = args.batch_len;
  options.method = args.method == "batch" ? BatchMethod::BatchMeans : BatchMethod::OverlappingBatch;
  const auto cmp = empirical_vs_spectral(f, k, pi, options);

  auto& results = out.report["results"];
  results["spectral"] = num(cmp.spectral);
  results["empirical_mean"] = cmp.mean;
  results["spread"] = cmp.spread;
  results["standard_error"] = cmp.standard_error;
  results["z"] = num(cmp.z);
  results["estimator"] = std::string(to_string(options.method));
  results["batch_len"] = cmp.batch_len;
  results["batch_len_adjusted"] = cmp.batch_len_adjusted;
  results["period"] = cmp.period;
  ordered_json reps = ordered_json::array();
  for (std::size_t r = 0; r < cmp.replicates.size(); ++r)
    reps.push_back({{"seed", replicate_seed(args.seed, r)},
                    {"estimate", cmp.replicates[r].estimate},
                    {"std_error", cmp.replicates[r].std_error},
                    {"batch_count", cmp.replicates[r].batch_count}});
  results["replicates"] = std::move(reps);
  results["tripwire"] = 5.0;
  if (args.export_path) {
    const auto path = sample_chain(k, pi, args.n_steps, replicate_seed(args.seed, 0), args.kernel);
    write_file(*args.export_path, path.to_text());
  }
  out.exit_code = std::abs(cmp.z) > 5.0 ? kExitFailure : kExitOk;
  return out;
}

ProblemFile cmd_demo(const DemoArgs& args) {
  ProblemFile problem;
  const auto add_kernel = [&](const std::string& name, const TransitionKernel& k) {
    problem.kernels.emplace_back(name, k.matrix());
  };

  if (args.name == "two-state") {
    const auto pi = families::uniform(2);
    problem.n = 2;
    problem.pi = pi.vector();
    add_kernel("flip", families::two_state_flip(args.p));
    for (double p : {0.9, 0.6, 0.5, 0.25}) {
      std::string name = "flip" + std::to_string(p);
      name.erase(name.find_last_not_of('0') + 1);
      add_kernel(name, families::two_state_flip(p));
    }
    add_kernel("iid", make_iid(pi));
    problem.observables.emplace_back("f", Vector{{1.0, -1.0}});
    problem.observables.emplace_back("indicator0", Vector{{1.0, 0.0}});
    return problem;
  }

  if (args.name == "cycle-walk") {
    const std::size_t n = args.n ? args.n : 10;
    const auto pi = families::uniform(n);
    problem.n = n;
    problem.pi = pi.vector();
    add_kernel("lazy", families::cycle_walk(n, args.beta));
    add_kernel("simple", families::cycle_walk(n, 0.0));
    add_kernel("iid", make_iid(pi));
    Vector onehot = Vector::Zero(static_cast<Eigen::Index>(n));
    onehot[0] = 1.0;
    Vector wave(static_cast<Eigen::Index>(n));
    for (Eigen::Index x = 0; x < wave.size(); ++x)
      wave[x] = std::cos(2.0 * M_PI * static_cast<double>(x) / static_cast<double>(n));
    problem.observables.emplace_back("onehot0", std::move(onehot));
    problem.observables.emplace_back("cos1", std::move(wave));
    return problem;
  }

  if (args.name == "mh-discrete") {
    const std::size_t n = args.n ? args.n : 8;
    const auto pi = families::peaked_target(n);
    problem.n = n;
    problem.pi = pi.vector();
    const auto local = make_metropolis_hastings(families::local_proposal(n), pi);
    add_kernel("mh-local", local);
    add_kernel("mh-uniform", make_metropolis_hastings(families::uniform_proposal(n), pi));
    add_kernel("mh-local-lazy", make_lazy(local, 0.3));
    add_kernel("iid", make_iid(pi));
    Vector position(static_cast<Eigen::Index>(n));
    for (Eigen::Index x = 0; x < position.size(); ++x) position[x] = static_cast<double>(x);
    Vector peak = Vector::Zero(static_cast<Eigen::Index>(n));
    peak[static_cast<Eigen::Index>(n / 2)] = 1.0;
    problem.observables.emplace_back("position", std::move(position));
    problem.observables.emplace_back("indicator-peak", std::move(peak));
    return problem;
  }

  if (args.name == "mixture-counterexample") {
    // P1 dominates P2 (Peskun, hence efficiency); swapping the components
    // gives identical half/half mixtures although Q2 = P1 beats P2.
    const StationaryDistribution pi(Vector{{0.5, 0.3, 0.2}});
    problem.n = 3;
    problem.pi = pi.vector();
    const auto p1 = make_metropolis_hastings(families::uniform_proposal(3), pi);
    const auto p2 = make_lazy(p1, 0.5);
    const std::vector<TransitionKernel> ps{p1, p2};
    const std::vector<TransitionKernel> qs{p2, p1};
    const std::vector<double> half{0.5, 0.5};
    add_kernel("P1", p1);
    add_kernel("P2", p2);
    add_kernel("Q1", p2);
    add_kernel("Q2", p1);
    add_kernel("P", make_mixture(ps, half));
    add_kernel("Q", make_mixture(qs, half));
    problem.observables.emplace_back("f", Vector{{1.0, 0.0, -1.0}});
    return problem;
  }

  throw Error(ErrorCode::InvalidArgument,
              "unknown demo '" + args.name +
                  "' (two-state, cycle-walk, mh-discrete, mixture-counterexample)");
}

}  // namespace effdom::cli
