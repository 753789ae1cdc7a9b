#include "effdom/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "effdom/spectral.hpp"

namespace effdom {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Inverse-CDF lookup over one cumulative row. upper_bound lands on an entry
// with positive mass because the cumulative row only rises at such entries.
std::uint32_t draw(const double* cumulative, std::size_t n, double u) {
  const double target = u * cumulative[n - 1];
  const double* hit = std::upper_bound(cumulative, cumulative + n, target);
  if (hit == cumulative + n) {
    // Rounding pushed target onto the row total: take the last charged state.
    hit = cumulative + n - 1;
    while (hit > cumulative && *(hit - 1) == *hit) --hit;
  }
  return static_cast<std::uint32_t>(hit - cumulative);
}

}  // namespace

std::uint64_t SplitMix64::next() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) + (index + 1) * kGolden);
}

std::string ChainPath::to_text() const {
  std::ostringstream os;
  for (auto s : states) os << s << '\n';
  return os.str();
}

ChainPath sample_chain(const TransitionKernel& k, const StationaryDistribution& pi,
                       std::size_t n_steps, std::uint64_t seed, std::string kernel_id) {
  if (n_steps == 0) throw Error(ErrorCode::InvalidArgument, "a path needs at least one step");
  if (k.size() != pi.size()) throw Error(ErrorCode::DimensionMismatch, "kernel and pi differ in dimension");
  const std::size_t n = k.size();

  std::vector<double> start(n);
  std::vector<double> rows(n * n);
  double acc = 0.0;
  for (std::size_t x = 0; x < n; ++x) start[x] = acc += std::max(pi[x], 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    acc = 0.0;
    for (std::size_t y = 0; y < n; ++y) rows[x * n + y] = acc += std::max(k(x, y), 0.0);
  }

  ChainPath path;
  path.seed = seed;
  path.kernel_id = std::move(kernel_id);
  path.states.resize(n_steps);
  SplitMix64 rng(seed);
  std::uint32_t state = draw(start.data(), n, rng.uniform());
  path.states[0] = state;
  for (std::size_t t = 1; t < n_steps; ++t) {
    state = draw(rows.data() + static_cast<std::size_t>(state) * n, n, rng.uniform());
    path.states[t] = state;
  }
  return path;
}

std::string_view to_string(BatchMethod m) {
  switch (m) {
    case BatchMethod::BatchMeans: return "batch_means";
    case BatchMethod::OverlappingBatch: return "overlapping_batch";
  }
  return "unknown";
}

std::size_t default_batch_len(std::size_t n_steps) noexcept {
  auto len = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_steps)));
  while ((len + 1) * (len + 1) <= n_steps) ++len;
  while (len > 0 && len * len > n_steps) --len;
  return std::max<std::size_t>(len, 1);
}

EmpiricalVariance empirical_asymptotic_variance(const ChainPath& path, const Observable& f,
                                                const StationaryDistribution& pi,
                                                BatchMethod method, std::size_t batch_len) {
  if (f.size() != pi.size())
    throw Error(ErrorCode::DimensionMismatch, "observable and pi differ in dimension");
  if (batch_len == 0) throw Error(ErrorCode::InvalidArgument, "batch length must be positive");
  const std::size_t n = path.size();
  const std::size_t batches = n / batch_len;
  if (batches < kMinBatches) {
    std::ostringstream os;
    os << n << " steps give " << batches << " batches of length " << batch_len << "; need "
       << kMinBatches;
    throw Error(ErrorCode::TooFewBatches, os.str());
  }

  EmpiricalVariance out;
  out.method = method;
  out.batch_len = batch_len;
  out.batch_count = batches;
  const auto value = [&](std::size_t t) { return f.f[static_cast<Eigen::Index>(path.states[t])]; };
  const auto len = static_cast<double>(batch_len);

  if (method == BatchMethod::BatchMeans) {
    std::vector<double> means(batches);
    for (std::size_t b = 0; b < batches; ++b) {
      double sum = 0.0;
      for (std::size_t t = b * batch_len; t < (b + 1) * batch_len; ++t) sum += value(t);
      means[b] = sum / len;
    }
    double grand = 0.0;
    for (double m : means) grand += m;
    grand /= static_cast<double>(batches);
    double ss = 0.0;
    for (double m : means) ss += (m - grand) * (m - grand);
    const auto dof = static_cast<double>(batches - 1);
    out.estimate = len * ss / dof;
    out.std_error = out.estimate * std::sqrt(2.0 / dof);
    return out;
  }

  // Overlapping windows over the whole path.
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::size_t t = 0; t < n; ++t) prefix[t + 1] = prefix[t] + value(t);
  const long double grand = prefix[n] / static_cast<long double>(n);
  long double ss = 0.0L;
  for (std::size_t j = 0; j + batch_len <= n; ++j) {
    const long double d = (prefix[j + batch_len] - prefix[j]) / len - grand;
    ss += d * d;
  }
  const auto nn = static_cast<double>(n);
  out.estimate = static_cast<double>(ss) * nn * len / ((nn - len) * (nn - len + 1.0));
  // Overlapping batch means have 2/3 the variance of non-overlapping ones.
  out.std_error = out.estimate * std::sqrt((4.0 / 3.0) * 2.0 / static_cast<double>(batches));
  return out;
}

SimulationComparison empirical_vs_spectral(const Observable& f, const TransitionKernel& k,
                                           const StationaryDistribution& pi,
                                           const SimulationOptions& options) {
  if (options.replicates == 0) throw Error(ErrorCode::InvalidArgument, "need at least one replicate");
  SimulationComparison out;
  out.seed = options.seed;
  out.spectral = asymptotic_variance_spectral(f, k, pi).value;
  out.period = compute_period(k).period;

  std::size_t len = options.batch_len.value_or(default_batch_len(options.n_steps));
  if (len == 0) throw Error(ErrorCode::InvalidArgument, "batch length must be positive");
  if (out.period >= 2 && len % out.period != 0) {
    len += out.period - len % out.period;
    out.batch_len_adjusted = true;
  }
  out.batch_len = len;

  out.replicates.resize(options.replicates);
  std::vector<std::exception_ptr> failures(options.replicates);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t r = next++; r < options.replicates; r = next++) {
      try {
        const auto path = sample_chain(k, pi, options.n_steps, replicate_seed(options.seed, r));
        out.replicates[r] = empirical_asymptotic_variance(path, f, pi, options.method, len);
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(options.replicates, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : failures)
    if (e) std::rethrow_exception(e);

  const auto reps = static_cast<double>(options.replicates);
  for (const auto& r : out.replicates) out.mean += r.estimate;
  out.mean /= reps;
  if (options.replicates >= 2) {
    double ss = 0.0;
    for (const auto& r : out.replicates) ss += (r.estimate - out.mean) * (r.estimate - out.mean);
    out.spread = std::sqrt(ss / (reps - 1.0));
    out.standard_error = out.spread / std::sqrt(reps);
  } else {
    out.standard_error = out.replicates.front().std_error;
  }
  const double diff = out.mean - out.spectral;
  if (out.standard_error > 0.0) {
    out.z = diff / out.standard_error;
  } else {
    out.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return out;
}

}  // namespace effdom
