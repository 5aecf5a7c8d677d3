#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "logbn/domain.hpp"

namespace logbn {

/// Smooth random field: a few low sine modes with random amplitudes plus an
/// offset. With positive = true the result is strictly positive inside.
Field random_smooth_field(const Grid& grid, std::mt19937_64& rng, bool positive);

struct VerifyCheck {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  int passed() const;
  int failed() const;
};

/// Invariant suite on the given domain: gradient finite differences, the
/// Nehari identity, the eigenvalue oracle (boxes), Sobolev scale invariance,
/// the log-Sobolev check and curve plug-backs.
VerifyReport run_verify(const DomainSpec& spec, std::uint64_t seed);

}  // namespace logbn
