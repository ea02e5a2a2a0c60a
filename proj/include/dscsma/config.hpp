#pragma once
// Plain-text configuration files: one `key = value` per line, `#` comments,
// and an optional 0/1 partner-matrix block introduced by a bare `matrix =`
// line. The block is one whitespace-separated row per line and ends at the
// first blank line (or end of file):
//
//     # four stations, five TCPairs
//     w0 = 32
//     slot = 50
//     matrix =
//     0 1 0 1
//     1 0 1 1
//     0 1 0 1
//     1 1 1 0
//
// Later assignments to the same key override earlier ones, which is also how
// layering works: defaults, then file, then command-line flags, each parsed
// into a Config and overlaid in that order.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dscsma/core.hpp"
#include "dscsma/util.hpp"

namespace dscsma {

struct Config {
  std::map<std::string, std::string> values;
  std::optional<std::vector<std::vector<int>>> matrix;

  bool has(const std::string& key) const { return values.count(key) != 0; }

  void set(const std::string& key, const std::string& value) {
    values[key] = value;
  }

  // `other` wins on conflicts.
  void overlay(const Config& other) {
    for (const auto& [k, v] : other.values) values[k] = v;
    if (other.matrix) matrix = other.matrix;
  }

  std::string get_str(const std::string& key, const std::string& dflt) const {
    const auto it = values.find(key);
    return it == values.end() ? dflt : it->second;
  }

  long long get_int(const std::string& key, long long dflt) const {
    const auto it = values.find(key);
    if (it == values.end()) return dflt;
    return parse_int(key, it->second);
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) const {
    const auto it = values.find(key);
    if (it == values.end()) return dflt;
    const std::string& s = it->second;
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    require(ec == std::errc() && p == s.data() + s.size(), errc::config_error,
            "value of '" + key + "' is not an unsigned integer: " + s);
    return v;
  }

  double get_double(const std::string& key, double dflt) const {
    const auto it = values.find(key);
    if (it == values.end()) return dflt;
    const std::string& s = it->second;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    require(end == s.c_str() + s.size() && !s.empty(), errc::config_error,
            "value of '" + key + "' is not a number: " + s);
    return v;
  }

  static long long parse_int(const std::string& key, const std::string& s) {
    long long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    require(ec == std::errc() && p == s.data() + s.size(), errc::config_error,
            "value of '" + key + "' is not an integer: " + s);
    return v;
  }
};

inline Config parse_config(std::istream& in) {
  Config cfg;
  std::string line;
  bool in_matrix = false;
  std::vector<std::vector<int>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string t = util::trim(line);
    if (in_matrix) {
      if (t.empty()) {  // blank line closes the matrix block
        in_matrix = false;
        continue;
      }
      std::vector<int> row;
      for (const auto& tok : util::split_ws(t)) {
        int v = 0;
        const auto [p, ec] =
            std::from_chars(tok.data(), tok.data() + tok.size(), v);
        require(ec == std::errc() && p == tok.data() + tok.size(),
                errc::config_error,
                "line " + std::to_string(lineno) +
                    ": matrix entry is not an integer: " + tok);
        row.push_back(v);
      }
      rows.push_back(std::move(row));
      cfg.matrix = rows;  // keep in sync so EOF inside the block is fine
      continue;
    }
    if (t.empty()) continue;
    const auto eq = t.find('=');
    require(eq != std::string::npos, errc::config_error,
            "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = util::trim(t.substr(0, eq));
    const std::string value = util::trim(t.substr(eq + 1));
    require(!key.empty(), errc::config_error,
            "line " + std::to_string(lineno) + ": empty key");
    if (key == "matrix") {
      require(value.empty(), errc::config_error,
              "line " + std::to_string(lineno) +
                  ": 'matrix =' must start a block of rows");
      in_matrix = true;
      rows.clear();
      cfg.matrix = rows;
      continue;
    }
    require(!value.empty(), errc::config_error,
            "line " + std::to_string(lineno) + ": empty value for '" + key +
                "'");
    cfg.values[key] = value;
  }
  return cfg;
}

inline Config parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::config_error, "cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace dscsma
