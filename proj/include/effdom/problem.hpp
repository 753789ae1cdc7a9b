#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "effdom/kernel.hpp"

namespace effdom {

/// Parsed problem file:
///   {"n": int, "pi": [float], "kernels": {"name": [[float]]}, "observables": {"name": [float]}}
/// Entries are kept raw so validation can report on them; names keep file order.
struct ProblemFile {
  std::size_t n = 0;
  Vector pi;
  std::vector<std::pair<std::string, Matrix>> kernels;
  std::vector<std::pair<std::string, Vector>> observables;

  const Matrix& kernel(std::string_view name) const;
  const Vector& observable(std::string_view name) const;
  StationaryDistribution distribution() const { return StationaryDistribution(pi); }
};

/// Throws ParseError (with line and column) on malformed text, duplicate
/// names or wrong types, DimensionMismatch on shape errors.
ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem(const std::string& path);

nlohmann::ordered_json to_json(const ProblemFile& problem);
std::string dump_problem(const ProblemFile& problem);

/// Removes states with zero target mass from pi, every kernel and every
/// observable. Returns the removed state indices.
std::vector<std::size_t> prune_zero_mass(ProblemFile& problem);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace effdom
