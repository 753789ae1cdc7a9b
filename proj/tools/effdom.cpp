// Command-line front end: validate, spectrum, variance, compare, order,
// simulate and demo. Every command prints a JSON report on stdout.
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "effdom/cli.hpp"

namespace {

std::vector<std::string> split_names(const std::string& list) {
  std::vector<std::string> names;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) names.push_back(item);
  return names;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace effdom::cli;
  CLI::App app{"Efficiency ordering of reversible Markov kernels on finite state spaces"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check stochasticity, stationarity, reversibility, irreducibility");
  validate_cmd->add_option("file", validate.file, "Problem file")->required();
  validate_cmd->add_flag("--repair", validate.repair, "Renormalise rows (and pi) and re-check");
  validate_cmd->add_flag("--prune", validate.prune, "Drop states with zero target mass");
  validate_cmd->add_option("-o,--output", validate.output, "Write the repaired/pruned problem here");

  SpectrumArgs spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Spectrum of a kernel on mean-zero functions");
  spectrum_cmd->add_option("file", spectrum.file, "Problem file")->required();
  spectrum_cmd->add_option("--kernel", spectrum.kernel, "Kernel name")->required();

  VarianceArgs variance;
  auto* variance_cmd = app.add_subcommand("variance", "Asymptotic variance of an observable");
  variance_cmd->add_option("file", variance.file, "Problem file")->required();
  variance_cmd->add_option("--kernel", variance.kernel, "Kernel name")->required();
  variance_cmd->add_option("--observable", variance.observable, "Observable name")->required();
  variance_cmd->add_option("--method", variance.method, "spectral | autocov | both")
      ->check(CLI::IsMember({"spectral", "autocov", "both"}));
  variance_cmd->add_option("--tail-tol", variance.tail_tol, "Truncation bound for the lag sum");
  variance_cmd->add_flag("--unchecked", variance.unchecked, "Skip the irreducibility requirement");

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand(
      "compare", "Efficiency dominance of P over Q (exit 0 dominates, 2 dominated, 3 incomparable, 4 equal)");
  compare_cmd->add_option("file", compare.file, "Problem file")->required();
  compare_cmd->add_option("--p", compare.p, "Kernel P")->required();
  compare_cmd->add_option("--q", compare.q, "Kernel Q")->required();
  compare_cmd->add_flag("--peskun", compare.peskun, "Also report Peskun dominance");
  compare_cmd->add_option("--tol", compare.tol, "Positivity tolerance");
  compare_cmd->add_flag("--unchecked", compare.unchecked, "Skip the irreducibility requirement");

  OrderArgs order;
  std::string order_names;
  auto* order_cmd = app.add_subcommand("order", "Hasse diagram of efficiency dominance");
  order_cmd->add_option("file", order.file, "Problem file")->required();
  order_cmd->add_option("--kernels", order_names, "Comma-separated kernel names (default: all)");
  order_cmd->add_option("--tol", order.tol, "Positivity tolerance");
  order_cmd->add_flag("--unchecked", order.unchecked, "Skip the irreducibility requirement");
  order_cmd->add_option("--edges", order.edges_path, "Write 'a > b' edge lines to this path");

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Batch-means estimate against the spectral value");
  simulate_cmd->add_option("file", simulate.file, "Problem file")->required();
  simulate_cmd->add_option("--kernel", simulate.kernel, "Kernel name")->required();
  simulate_cmd->add_option("--observable", simulate.observable, "Observable name")->required();
  simulate_cmd->add_option("-N,--steps", simulate.n_steps, "Steps per chain");
  simulate_cmd->add_option("--reps", simulate.reps, "Independent replicates");
  simulate_cmd->add_option("--seed", simulate.seed, "Master seed");
  simulate_cmd->add_option("--batch-len", simulate.batch_len, "Batch length (default floor(sqrt(N)))");
  simulate_cmd->add_option("--method", simulate.method, "batch | overlapping")
      ->check(CLI::IsMember({"batch", "overlapping"}));
  simulate_cmd->add_option("--export-path", simulate.export_path, "Write replicate 0's path here");

  DemoArgs demo;
  std::string demo_output;
  auto* demo_cmd = app.add_subcommand("demo", "Write a built-in problem file");
  demo_cmd->add_option("name", demo.name, "two-state | cycle-walk | mh-discrete | mixture-counterexample")
      ->required();
  demo_cmd->add_option("--p", demo.p, "two-state flip probability");
  demo_cmd->add_option("--n", demo.n, "Number of states");
  demo_cmd->add_option("--beta", demo.beta, "cycle-walk laziness");
  demo_cmd->add_option("-o,--output", demo_output, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (*demo_cmd) {
      const auto problem = cmd_demo(demo);
      if (demo_output.empty()) {
        std::cout << effdom::dump_problem(problem);
      } else {
        effdom::write_file(demo_output, effdom::dump_problem(problem));
      }
      return kExitOk;
    }

    CommandOutput out;
    if (*validate_cmd) out = cmd_validate(validate);
    else if (*spectrum_cmd) out = cmd_spectrum(spectrum);
    else if (*variance_cmd) out = cmd_variance(variance);
    else if (*compare_cmd) out = cmd_compare(compare);
    else if (*order_cmd) {
      order.kernels = split_names(order_names);
      out = cmd_order(order);
    } else if (*simulate_cmd) out = cmd_simulate(simulate);
    std::cout << out.report.dump(2) << '\n';
    return out.exit_code;
  } catch (const std::exception& e) {
    std::cout << error_report(command, e).dump(2) << '\n';
    return kExitFailure;
  }
}
