#pragma once

// Portable text format for a KlCache:
//
//   KLCACHE 1 n=<rank>
//   <x window>;<w window>;<coefficients>
//   ...
//
// Windows and coefficient lists are comma-separated integers; the zero
// polynomial has an empty coefficient field. Entries are written in sorted
// (x, w) order.

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "affkl/element_spec.hpp"
#include "affkl/errors.hpp"
#include "affkl/kl_engine.hpp"

namespace affkl {

inline constexpr int kCacheFormatVersion = 1;

namespace detail {

inline std::string join(std::span<const Entry> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace detail

inline void write_cache(std::ostream& out, const KlCache& cache) {
  out << "KLCACHE " << kCacheFormatVersion << " n=" << cache.context().n() << '\n';
  for (const auto& e : cache.entries()) {
    const auto& c = e.p.coefficients();
    out << detail::join(e.x.window()) << ';' << detail::join(e.w.window()) << ';'
        << detail::join(std::span<const Entry>(c.data(), c.size())) << '\n';
  }
}

/// Loads entries into `cache`. Returns the number of entries read.
inline std::size_t read_cache(std::istream& in, KlCache& cache) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty cache file", ParseError::npos);
  std::istringstream header(line);
  std::string magic, rank_field;
  int version = 0;
  if (!(header >> magic >> version >> rank_field) || magic != "KLCACHE" || rank_field.rfind("n=", 0) != 0)
    throw ParseError("malformed cache header '" + line + "'", 0);
  if (version != kCacheFormatVersion)
    throw ParseError("unsupported cache format version " + std::to_string(version) + " (this build reads version " +
                         std::to_string(kCacheFormatVersion) + ")",
                     ParseError::npos);
  int rank = 0;
  try {
    rank = std::stoi(rank_field.substr(2));
  } catch (const std::exception&) {
    throw ParseError("malformed rank in cache header '" + line + "'", 0);
  }
  if (rank != cache.context().n())
    throw ArgumentError("cache file is for rank " + std::to_string(rank) + ", engine rank is " +
                        std::to_string(cache.context().n()));

  const GroupContext& ctx = cache.context();
  std::size_t count = 0;
  for (int line_no = 2; std::getline(in, line); ++line_no) {
    if (line.empty()) continue;
    const auto a = line.find(';');
    const auto b = a == std::string::npos ? a : line.find(';', a + 1);
    if (b == std::string::npos) throw ParseError("cache line " + std::to_string(line_no) + ": expected 3 fields", 0);
    try {
      const auto x = parse_element(ctx, ElementSpec::window(line.substr(0, a)));
      const auto w = parse_element(ctx, ElementSpec::window(line.substr(a + 1, b - a - 1)));
      std::vector<IntPolynomial::Coefficient> coeffs;
      for (const auto& tok : detail::parse_integer_list(std::string_view(line).substr(b + 1)))
        coeffs.push_back(tok.value);
      cache.insert({x, w, IntPolynomial(std::move(coeffs))});
    } catch (const ParseError& e) {
      throw ParseError("cache line " + std::to_string(line_no) + ": " + e.what(), ParseError::npos);
    }
    ++count;
  }
  return count;
}

inline void save_cache(const std::filesystem::path& path, const KlCache& cache) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write cache file " + path.string());
  write_cache(out, cache);
}

/// False if the file does not exist yet.
inline bool load_cache(const std::filesystem::path& path, KlCache& cache) {
  std::ifstream in(path);
  if (!in) return false;
  read_cache(in, cache);
  return true;
}

}  // namespace affkl
