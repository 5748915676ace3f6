#include "relstring/tolerances.hpp"

namespace relstring {

namespace {

template <typename Visit>
void for_each_field(ToleranceConfig& cfg, Visit&& visit) {
  visit("regular_speed", cfg.regular_speed);
  visit("slice_regular", cfg.slice_regular);
  visit("admissible_margin", cfg.admissible_margin);
  visit("normal_velocity", cfg.normal_velocity);
  visit("normalization", cfg.normalization);
  visit("zero_mean", cfg.zero_mean);
  visit("unit_speed", cfg.unit_speed);
  visit("sub_unit", cfg.sub_unit);
  visit("collapse", cfg.collapse);
  visit("singular", cfg.singular);
  visit("degenerate_speed", cfg.degenerate_speed);
  visit("domain_slack", cfg.domain_slack);
  visit("inclusion_slack", cfg.inclusion_slack);
}

}  // namespace

std::map<std::string, double> ToleranceConfig::as_map() const {
  std::map<std::string, double> out;
  ToleranceConfig copy = *this;
  for_each_field(copy, [&](const char* name, double& value) { out[name] = value; });
  return out;
}

bool ToleranceConfig::set(const std::string& name, double value) {
  bool found = false;
  for_each_field(*this, [&](const char* field, double& slot) {
    if (name == field) {
      slot = value;
      found = true;
    }
  });
  return found;
}

namespace {
ToleranceConfig& active() {
  static ToleranceConfig cfg{};
  return cfg;
}
}  // namespace

const ToleranceConfig& tolerances() { return active(); }

void set_tolerances(const ToleranceConfig& cfg) { active() = cfg; }

}  // namespace relstring
