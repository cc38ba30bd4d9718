#include "report.hpp"

namespace qfactor::cli {

bool Report::pass() const {
  for (const auto& c : checks_) {
    if (!c.pass) return false;
  }
  return true;
}

Json Report::to_json() const {
  Json out = fields_;
  Json checks = Json::array();
  for (const auto& c : checks_) {
    Json entry;
    entry["name"] = c.name;
    entry["pass"] = c.pass;
    entry["residual"] = c.residual;
    entry["tolerance"] = c.tolerance;
    checks.push_back(std::move(entry));
  }
  out["checks"] = std::move(checks);
  if (!checks_.empty()) {
    const Check* worst = &checks_.front();
    for (const auto& c : checks_) {
      if (c.residual > worst->residual) worst = &c;
    }
    out["max_residual"] = worst->residual;
    out["worst_check"] = worst->name;
  }
  if (seed_) out["seed"] = *seed_;
  out["pass"] = pass();
  return out;
}

}  // namespace qfactor::cli
