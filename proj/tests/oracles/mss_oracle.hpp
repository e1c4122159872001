#pragma once

// O(n^2) maximum-sum span with the earliest-then-shortest tie rule.

#include <cstddef>
#include <optional>
#include <span>

#include "pagesift/baselines.hpp"

namespace oracle {

inline std::optional<pagesift::baselines::ScoreSpan> brute_force_mss(std::span<const long long> scores) {
  std::optional<pagesift::baselines::ScoreSpan> best;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    long long sum = 0;
    for (std::size_t j = i; j < scores.size(); ++j) {
      sum += scores[j];
      if (!best || sum > best->sum) best = pagesift::baselines::ScoreSpan{i, j, sum};
    }
  }
  return best;
}

}  // namespace oracle
