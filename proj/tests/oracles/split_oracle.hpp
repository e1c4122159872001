#pragma once

// Exhaustive root-split search: every feature, every threshold between two
// adjacent distinct values, sums recomputed from scratch per candidate.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "pagesift/features.hpp"

namespace oracle {

struct BruteSplit {
  int feature = -1;
  double threshold = 0;
  double gain = -std::numeric_limits<double>::infinity();
};

inline double brute_gain(double gl, double hl, double gr, double hr) {
  constexpr double eps = 1e-9;
  double g = gl + gr;
  double h = hl + hr;
  return gl * gl / (hl + eps) + gr * gr / (hr + eps) - g * g / (h + eps);
}

inline BruteSplit brute_force_split(const pagesift::features::Matrix& x, std::span<const double> grad,
                                    std::span<const double> hess, std::size_t min_docs) {
  BruteSplit best;
  for (std::size_t f = 0; f < x.cols(); ++f) {
    std::vector<double> values;
    for (std::size_t r = 0; r < x.rows(); ++r) values.push_back(x.at(r, f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      double threshold = 0.5 * (values[k] + values[k + 1]);
      if (!(threshold >= values[k] && threshold < values[k + 1])) threshold = values[k];
      double gl = 0, hl = 0, gr = 0, hr = 0;
      std::size_t left = 0;
      for (std::size_t r = 0; r < x.rows(); ++r) {
        if (x.at(r, f) <= threshold) {
          gl += grad[r], hl += hess[r], ++left;
        } else {
          gr += grad[r], hr += hess[r];
        }
      }
      if (left < min_docs || x.rows() - left < min_docs) continue;
      double gain = brute_gain(gl, hl, gr, hr);
      if (gain > best.gain) best = {static_cast<int>(f), threshold, gain};
    }
  }
  return best;
}

}  // namespace oracle
