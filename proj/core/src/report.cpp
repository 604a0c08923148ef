#include "tmkt/report.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace tmkt {

namespace {

struct Entry {
  ConditionId id;
  std::string_view label;
};

constexpr std::array kRegistry{
    Entry{ConditionId::h2, "h:2"},
    Entry{ConditionId::h5, "h:5"},
    Entry{ConditionId::h3rd, "h:3rd"},
    Entry{ConditionId::h2rd, "h:2rd"},
    Entry{ConditionId::h4rd, "h:4rd"},
    Entry{ConditionId::plusmas, "plusmas"},
    Entry{ConditionId::h7rd, "h:7rd"},
    Entry{ConditionId::det_d, "detD"},
    Entry{ConditionId::rho, "rho"},
    Entry{ConditionId::sign, "sign"},
    Entry{ConditionId::p5, "p:5"},
    Entry{ConditionId::feltetel1, "1.feltetel"},
    Entry{ConditionId::feltetel2ujalak, "2.feltetelujalak"},
    Entry{ConditionId::dk, "d-k"},
    Entry{ConditionId::det1, "det1"},
    Entry{ConditionId::det2, "det2"},
    Entry{ConditionId::pathdkepletmas, "pathdkepletmas"},
};

constexpr auto make_ids() {
  std::array<ConditionId, kRegistry.size()> ids{};
  for (std::size_t i = 0; i < kRegistry.size(); ++i) ids[i] = kRegistry[i].id;
  return ids;
}

constexpr auto kIds = make_ids();

double slack(double diff, double rhs) {
  if (std::isinf(rhs)) {
    return diff > 0.0 ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
  }
  return rhs != 0.0 ? diff / std::abs(rhs) : diff;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::marginal: return "marginal";
  }
  return "marginal";
}

std::string_view label(ConditionId id) {
  for (const auto& e : kRegistry) {
    if (e.id == id) return e.label;
  }
  return "?";
}

std::optional<ConditionId> condition_from_label(std::string_view text) {
  for (const auto& e : kRegistry) {
    if (e.label == text) return e.id;
  }
  return std::nullopt;
}

std::span<const ConditionId> all_conditions() { return kIds; }

ConditionResult greater_than(ConditionId id, double lhs, double rhs) {
  return {id, lhs > rhs, slack(lhs - rhs, rhs)};
}

ConditionResult less_than(ConditionId id, double lhs, double rhs) {
  return {id, lhs < rhs, slack(rhs - lhs, rhs)};
}

const ConditionResult* StabilityReport::find(ConditionId id) const {
  for (const auto& c : conditions) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

bool StabilityReport::holds(ConditionId id) const {
  const auto* c = find(id);
  return c != nullptr && c->holds;
}

bool StabilityReport::all_hold(std::span<const ConditionId> ids) const {
  for (auto id : ids) {
    if (!holds(id)) return false;
  }
  return true;
}

bool StabilityReport::all_hold() const {
  for (const auto& c : conditions) {
    if (!c.holds) return false;
  }
  return true;
}

Verdict classify_spectrum(std::span<const Complex> values, double eps) {
  const double worst = max_real_part(values);
  if (worst < -eps) return Verdict::stable;
  if (worst > eps) return Verdict::unstable;
  return Verdict::marginal;
}

}  // namespace tmkt
