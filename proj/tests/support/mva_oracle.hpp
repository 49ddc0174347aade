#pragma once

// Textbook exact MVA recursion for a closed single-chain network of
// single-server FIFO stations plus a pure delay (think time). Written
// directly from the recurrence R_k(n) = D_k (1 + Q_k(n-1)); kept free of
// any production solver code so it can serve as an independent oracle.

#include <vector>

namespace archopt::oracle {

struct MvaResult {
  double throughput = 0.0;
  double response = 0.0;  // total residence over all stations, think excluded
  std::vector<double> utilization;
};

inline MvaResult exact_mva(int population, double think, const std::vector<double>& demands) {
  std::vector<double> q(demands.size(), 0.0), r(demands.size(), 0.0);
  double x = 0.0;
  for (int n = 1; n <= population; ++n) {
    double cycle = think;
    for (std::size_t k = 0; k < demands.size(); ++k) {
      r[k] = demands[k] * (1.0 + q[k]);
      cycle += r[k];
    }
    x = n / cycle;
    for (std::size_t k = 0; k < demands.size(); ++k) q[k] = x * r[k];
  }
  MvaResult out;
  out.throughput = x;
  for (std::size_t k = 0; k < demands.size(); ++k) {
    out.response += r[k];
    out.utilization.push_back(x * demands[k]);
  }
  return out;
}

}  // namespace archopt::oracle
