#pragma once

#include <string>
#include <vector>

namespace ojj::cli {

struct SelftestCheck {
  std::string name;
  double measured = 0.0;  // worst value seen
  double limit = 0.0;     // pass iff measured <= limit
  bool passed = false;
  double seconds = 0.0;
};

enum class InjectedFault { kNone, kNonHermitian };

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  double max_norm_drift = 0.0;
  double max_hermiticity_residual = 0.0;

  bool all_passed() const;
};

/// Runs the invariant suite. kNonHermitian corrupts one operator before it is
/// wrapped, which raises IntegrityError out of this call.
SelftestReport run_selftest(InjectedFault fault = InjectedFault::kNone);

}  // namespace ojj::cli
