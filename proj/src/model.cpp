#include "icpc/model.hpp"

#include <cmath>
#include <sstream>

#include "icpc/errors.hpp"

namespace icpc {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("invalid parameter: " + what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ModelParams::validate() const {
  require(finite(theta) && theta > 0.0 && theta < 1.0,
          "theta must lie in (0,1)");
  require(finite(beta) && beta > 0.0 && beta < 1.0,
          "beta must lie in (0,1)");
  require(finite(lambda_bar) && lambda_bar >= 0.0 && lambda_bar <= 1.0,
          "lambda_bar must lie in [0,1]");
  require(finite(phi) && phi >= 0.0 && phi <= 1.0, "phi must lie in [0,1]");
  require(finite(rho) && rho >= 0.0 && rho < 1.0, "rho must lie in [0,1)");
  require(phi * rho < 1.0, "phi*rho must be < 1");
  require(finite(omega) && omega > 0.0 && omega <= 1.0,
          "omega must lie in (0,1]");
  require(finite(gamma) && gamma > 0.0, "gamma must be > 0");
}

void ShockMoments::validate() const {
  require(finite(var_inf) && var_inf >= 0.0, "var_inf must be >= 0");
  require(finite(var_ygap) && var_ygap >= 0.0, "var_ygap must be >= 0");
  require(finite(var_u) && var_u >= 0.0, "var_u must be >= 0");
}

}  // namespace icpc
