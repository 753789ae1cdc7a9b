#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "effdom/kernel.hpp"

namespace effdom {

/// SplitMix64: a splittable generator with a fixed, platform-independent
/// output sequence. `split` derives an independent child stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  SplitMix64 split() noexcept { return SplitMix64(next() ^ 0x6a09e667f3bcc909ULL); }

 private:
  std::uint64_t state_;
};

/// Seed of replicate `index` under a master seed; streams are disjoint by
/// construction of the mixing function.
std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t index) noexcept;

struct ChainPath {
  std::vector<std::uint32_t> states;
  std::uint64_t seed = 0;
  std::string kernel_id;

  std::size_t size() const noexcept { return states.size(); }
  /// Newline-delimited state indices.
  std::string to_text() const;
};

/// Stationary path: X_1 ~ pi, then inverse-CDF transitions from each row.
ChainPath sample_chain(const TransitionKernel& k, const StationaryDistribution& pi,
                       std::size_t n_steps, std::uint64_t seed, std::string kernel_id = {});

enum class BatchMethod { BatchMeans, OverlappingBatch };
std::string_view to_string(BatchMethod m);

struct EmpiricalVariance {
  double estimate = 0.0;
  double std_error = 0.0;
  BatchMethod method = BatchMethod::BatchMeans;
  std::size_t batch_count = 0;
  std::size_t batch_len = 0;
};

inline constexpr std::size_t kMinBatches = 20;

/// floor(sqrt(N)).
std::size_t default_batch_len(std::size_t n_steps) noexcept;

EmpiricalVariance empirical_asymptotic_variance(const ChainPath& path, const Observable& f,
                                                const StationaryDistribution& pi,
                                                BatchMethod method, std::size_t batch_len);

struct SimulationComparison {
  double spectral = 0.0;
  std::vector<EmpiricalVariance> replicates;
  double mean = 0.0;
  double spread = 0.0;          // sample standard deviation across replicates
  double standard_error = 0.0;  // of the mean
  double z = 0.0;
  std::size_t batch_len = 0;
  std::size_t period = 1;
  bool batch_len_adjusted = false;  // rounded up to a multiple of the period
  std::uint64_t seed = 0;
};

struct SimulationOptions {
  std::size_t n_steps = 1'000'000;
  std::size_t replicates = 10;
  std::uint64_t seed = 0;
  std::optional<std::size_t> batch_len;  // default floor(sqrt(N))
  BatchMethod method = BatchMethod::BatchMeans;
};

SimulationComparison empirical_vs_spectral(const Observable& f, const TransitionKernel& k,
                                           const StationaryDistribution& pi,
                                           const SimulationOptions& options);

}  // namespace effdom
