#pragma once

#include <cmath>
#include <span>

#include "dbs/error.hpp"

namespace dbs::signal {

/// sqrt((1/T) * integral of x^2 dt) over a recorded series sampled every dt ms.
inline double rms_of_series(std::span<const double> samples, double dt_ms) {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "empty series");
  if (!(dt_ms > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  double acc = 0.0;
  for (double x : samples) acc += x * x * dt_ms;
  const double total = dt_ms * static_cast<double>(samples.size());
  return std::sqrt(acc / total);
}

}  // namespace dbs::signal
