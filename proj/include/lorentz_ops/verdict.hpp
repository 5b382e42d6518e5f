#pragma once

#include <optional>
#include <string>

namespace lorentz_ops {

enum class VerdictKind {
  Exact,
  AtMost,
  AtLeast,
  InfiniteCertified,
  SymbolicInfinite,
  Unknown,
  NotFound,
  NoBoundFound,
  Refused,
  Equal,
  SubsetOnly,
};

std::string to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<unsigned> k;
  /// Failing hypothesis for Refused.
  std::string hypothesis;
  /// Free-form qualifier, e.g. "verified up to horizon".
  std::string annotation;

  static Verdict exact(unsigned k) { return {VerdictKind::Exact, k, {}, {}}; }
  static Verdict at_most(unsigned k) { return {VerdictKind::AtMost, k, {}, {}}; }
  static Verdict at_least(unsigned k) { return {VerdictKind::AtLeast, k, {}, {}}; }
  static Verdict unknown(unsigned horizon) { return {VerdictKind::Unknown, horizon, {}, {}}; }
  static Verdict refused(std::string h) { return {VerdictKind::Refused, std::nullopt, std::move(h), {}}; }
  static Verdict of(VerdictKind kind) { return {kind, std::nullopt, {}, {}}; }

  bool is(VerdictKind kd) const { return kind == kd; }
  bool operator==(const Verdict& o) const { return kind == o.kind && k == o.k && hypothesis == o.hypothesis; }
};

/// "Exact(1)", "Refused(u_bounded_away)", "InfiniteCertified".
std::string to_string(const Verdict& v);

}  // namespace lorentz_ops
