#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace qfactor::cli {

struct Check {
  std::string name;
  bool pass = true;
  double residual = 0.0;
  double tolerance = 0.0;
};

/// Verification summary with a fixed key order:
/// {<fields>..., "checks", "max_residual", "worst_check", "seed", "pass"}.
/// An empty report is exactly {"checks": [], "pass": true}.
class Report {
 public:
  void add(Check c) { checks_.push_back(std::move(c)); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  /// Extra top-level fields, emitted before "checks".
  Json& fields() { return fields_; }

  bool pass() const;
  Json to_json() const;

 private:
  std::vector<Check> checks_;
  std::optional<std::uint64_t> seed_;
  Json fields_ = Json::object();
};

}  // namespace qfactor::cli
