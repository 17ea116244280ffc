#include "icpc/dataset.hpp"

#include <cmath>
#include <cstdio>

#include "icpc/errors.hpp"

namespace icpc {

void TimeSeriesDataset::validate() const {
  const std::size_t n = pi.size();
  if (period.size() != n || pi_e.size() != n || ygap.size() != n ||
      cinf.size() != n)
    throw ValidationError("dataset columns have unequal lengths");
  if (!u.empty() && u.size() != n)
    throw ValidationError("dataset column u has unequal length");
  auto check_finite = [](const std::vector<double>& col, const char* name) {
    for (std::size_t i = 0; i < col.size(); ++i)
      if (!std::isfinite(col[i]))
        throw ValidationError(std::string("non-finite value in column ") +
                              name + " at row " + std::to_string(i + 1));
  };
  check_finite(pi, "pi");
  check_finite(pi_e, "pi_e");
  check_finite(ygap, "ygap");
  check_finite(cinf, "cinf");
  check_finite(u, "u");
  for (std::size_t i = 1; i < period.size(); ++i)
    if (!(period[i - 1] < period[i]))
      throw ValidationError("periods not strictly increasing at row " +
                            std::to_string(i + 1) + " (" + period[i] + ")");
}

std::string period_label(std::size_t t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "t%06zu", t);
  return buf;
}

}  // namespace icpc
