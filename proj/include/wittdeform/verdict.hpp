#pragma once

#include <string>
#include <utility>

namespace wd {

/// Three-valued outcome of an executable check. Inconclusive covers budget
/// exhaustion and truncation windows too small to decide.
struct Verdict {
  enum class Kind { Pass, Fail, Inconclusive };

  Kind kind = Kind::Pass;
  std::string detail;

  static Verdict pass(std::string d = {}) { return {Kind::Pass, std::move(d)}; }
  static Verdict fail(std::string d) { return {Kind::Fail, std::move(d)}; }
  static Verdict inconclusive(std::string d) { return {Kind::Inconclusive, std::move(d)}; }

  bool ok() const { return kind == Kind::Pass; }
  bool failed() const { return kind == Kind::Fail; }
};

inline const char* kind_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Pass: return "pass";
    case Verdict::Kind::Fail: return "fail";
    case Verdict::Kind::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Folds b into a: any fail wins, then inconclusive.
inline void merge(Verdict& a, const Verdict& b) {
  if (b.kind == Verdict::Kind::Pass || a.kind == Verdict::Kind::Fail) return;
  if (b.kind == Verdict::Kind::Fail || a.kind == Verdict::Kind::Pass) a = b;
}

}  // namespace wd
