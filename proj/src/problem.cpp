#include "effdom/problem.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace effdom {

using nlohmann::ordered_json;

const Matrix& ProblemFile::kernel(std::string_view name) const {
  for (const auto& [key, m] : kernels)
    if (key == name) return m;
  throw Error(ErrorCode::InvalidArgument, "no kernel named '" + std::string(name) + "'");
}

const Vector& ProblemFile::observable(std::string_view name) const {
  for (const auto& [key, f] : observables)
    if (key == name) return f;
  throw Error(ErrorCode::InvalidArgument, "no observable named '" + std::string(name) + "'");
}

namespace {

std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

double number(const ordered_json& j, const std::string& where) {
  if (!j.is_number()) throw Error(ErrorCode::ParseError, where + " must be a number");
  return j.get<double>();
}

Vector vector_of(const ordered_json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, where + " must be an array");
  if (j.size() != n) {
    std::ostringstream os;
    os << where << " has " << j.size() << " entries, expected " << n;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    v[static_cast<Eigen::Index>(i)] = number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  // Track object keys per nesting level: duplicate names are an error, not
  // a silent overwrite.
  std::vector<std::set<std::string>> scopes;
  const ordered_json::parser_callback_t callback =
      [&scopes](int, ordered_json::parse_event_t event, ordered_json& parsed) {
        switch (event) {
          case ordered_json::parse_event_t::object_start: scopes.emplace_back(); break;
          case ordered_json::parse_event_t::object_end: scopes.pop_back(); break;
          case ordered_json::parse_event_t::key: {
            const auto key = parsed.get<std::string>();
            if (!scopes.back().insert(key).second)
              throw Error(ErrorCode::ParseError, "duplicate name '" + key + "'");
            break;
          }
          default: break;
        }
        return true;
      };

  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end(), callback);
  } catch (const ordered_json::parse_error& e) {
    throw Error(ErrorCode::ParseError, position(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");

  ProblemFile problem;
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 1)
    throw Error(ErrorCode::ParseError, "'n' must be a positive integer");
  problem.n = doc["n"].get<std::size_t>();
  if (!doc.contains("pi")) throw Error(ErrorCode::ParseError, "missing 'pi'");
  problem.pi = vector_of(doc["pi"], problem.n, "pi");

  if (doc.contains("kernels")) {
    const auto& kernels = doc["kernels"];
    if (!kernels.is_object()) throw Error(ErrorCode::ParseError, "'kernels' must be an object");
    for (const auto& [name, rows] : kernels.items()) {
      const std::string where = "kernels." + name;
      if (!rows.is_array()) throw Error(ErrorCode::ParseError, where + " must be an array of rows");
      if (rows.size() != problem.n) {
        std::ostringstream os;
        os << where << " has " << rows.size() << " rows, expected " << problem.n;
        throw Error(ErrorCode::DimensionMismatch, os.str());
      }
      const auto size = static_cast<Eigen::Index>(problem.n);
      Matrix m(size, size);
      for (std::size_t x = 0; x < problem.n; ++x)
        m.row(static_cast<Eigen::Index>(x)) =
            vector_of(rows[x], problem.n, where + "[" + std::to_string(x) + "]").transpose();
      problem.kernels.emplace_back(name, std::move(m));
    }
  }
  if (doc.contains("observables")) {
    const auto& observables = doc["observables"];
    if (!observables.is_object()) throw Error(ErrorCode::ParseError, "'observables' must be an object");
    for (const auto& [name, values] : observables.items())
      problem.observables.emplace_back(name, vector_of(values, problem.n, "observables." + name));
  }
  return problem;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << contents;
}

ProblemFile load_problem(const std::string& path) { return parse_problem(read_file(path)); }

ordered_json to_json(const ProblemFile& problem) {
  ordered_json doc;
  doc["n"] = problem.n;
  doc["pi"] = std::vector<double>(problem.pi.begin(), problem.pi.end());
  doc["kernels"] = ordered_json::object();
  for (const auto& [name, m] : problem.kernels) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index x = 0; x < m.rows(); ++x) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index y = 0; y < m.cols(); ++y) row.push_back(m(x, y));
      rows.push_back(std::move(row));
    }
    doc["kernels"][name] = std::move(rows);
  }
  doc["observables"] = ordered_json::object();
  for (const auto& [name, f] : problem.observables)
    doc["observables"][name] = std::vector<double>(f.begin(), f.end());
  return doc;
}

std::string dump_problem(const ProblemFile& problem) { return to_json(problem).dump(2) + "\n"; }

std::vector<std::size_t> prune_zero_mass(ProblemFile& problem) {
  std::vector<std::size_t> removed;
  std::vector<Eigen::Index> kept;
  for (std::size_t x = 0; x < problem.n; ++x) {
    if (problem.pi[static_cast<Eigen::Index>(x)] == 0.0) removed.push_back(x);
    else kept.push_back(static_cast<Eigen::Index>(x));
  }
  if (removed.empty()) return removed;
  if (kept.empty()) throw Error(ErrorCode::InvalidDistribution, "every state has zero mass");

  const auto keep = static_cast<Eigen::Index>(kept.size());
  Vector pi(keep);
  for (Eigen::Index i = 0; i < keep; ++i) pi[i] = problem.pi[kept[static_cast<std::size_t>(i)]];
  problem.pi = std::move(pi);
  for (auto& [name, m] : problem.kernels) {
    Matrix pruned(keep, keep);
    for (Eigen::Index i = 0; i < keep; ++i)
      for (Eigen::Index j = 0; j < keep; ++j)
        pruned(i, j) = m(kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)]);
    m = std::move(pruned);
  }
  for (auto& [name, f] : problem.observables) {
    Vector pruned(keep);
    for (Eigen::Index i = 0; i < keep; ++i) pruned[i] = f[kept[static_cast<std::size_t>(i)]];
    f = std::move(pruned);
  }
  problem.n = kept.size();
  return removed;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace effdom
