#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "effdom/problem.hpp"

namespace effdom::cli {

inline constexpr const char* kVersion = "effdom 1.0.0";

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitDominated = 2;
inline constexpr int kExitIncomparable = 3;
inline constexpr int kExitEqual = 4;

struct CommandOutput {
  nlohmann::ordered_json report;
  int exit_code = kExitOk;
};

struct ValidateArgs {
  std::string file;
  bool repair = false;
  bool prune = false;
  std::optional<std::string> output;  // write the repaired/pruned problem here
};

struct SpectrumArgs {
  std::string file;
  std::string kernel;
};

struct VarianceArgs {
  std::string file;
  std::string kernel;
  std::string observable;
  std::string method = "spectral";  // spectral | autocov | both
  double tail_tol = 1e-10;
  bool unchecked = false;
};

struct CompareArgs {
  std::string file;
  std::string p;
  std::string q;
  bool peskun = false;
  double tol = 1e-8;
  bool unchecked = false;
};

struct OrderArgs {
  std::string file;
  std::vector<std::string> kernels;  // empty: every kernel in the file
  double tol = 1e-8;
  bool unchecked = false;
  std::optional<std::string> edges_path;
};

struct SimulateArgs {
  std::string file;
  std::string kernel;
  std::string observable;
  std::size_t n_steps = 1'000'000;
  std::size_t reps = 10;
  std::uint64_t seed = 0;
  std::optional<std::size_t> batch_len;
  std::string method = "batch";  // batch | overlapping
  std::optional<std::string> export_path;
};

struct DemoArgs {
  std::string name;  // two-state | cycle-walk | mh-discrete | mixture-counterexample
  double p = 0.25;
  std::size_t n = 0;  // 0 picks the demo's default size
  double beta = 0.5;
};

CommandOutput cmd_validate(const ValidateArgs& args);
CommandOutput cmd_spectrum(const SpectrumArgs& args);
CommandOutput cmd_variance(const VarianceArgs& args);
CommandOutput cmd_compare(const CompareArgs& args);
CommandOutput cmd_order(const OrderArgs& args);
CommandOutput cmd_simulate(const SimulateArgs& args);

/// Builds the named demo problem.
ProblemFile cmd_demo(const DemoArgs& args);

/// Report emitted when a command throws.
nlohmann::ordered_json error_report(const std::string& command, const std::exception& e);

}  // namespace effdom::cli
