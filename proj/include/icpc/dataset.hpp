#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace icpc {

// Aligned monthly series for estimation: inflation, the one-step-ahead
// inflation expectation held at t, the output gap and the inference cost
// index. The cost-push path u is carried when the data are simulated and is
// empty for ingested data.
struct TimeSeriesDataset {
  std::vector<std::string> period;
  std::vector<double> pi;
  std::vector<double> pi_e;
  std::vector<double> ygap;
  std::vector<double> cinf;
  std::vector<double> u;

  std::size_t size() const { return pi.size(); }
  bool has_u() const { return !u.empty(); }

  // Equal column lengths, finite values, strictly increasing period labels.
  void validate() const;
};

// Zero-padded label for row t, lexicographic order == time order.
std::string period_label(std::size_t t);

}  // namespace icpc
