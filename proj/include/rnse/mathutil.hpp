// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RNSE_MATHUTIL_HPP_
#define RNSE_MATHUTIL_HPP_

#include <cmath>

namespace rnse {

// pow with exact fast paths for the small integer exponents the loss
// family uses. The fast paths keep the generalized loss bit-identical to
// its specialized reductions (exponents 1 and 2 stay plain products).
inline double pw(double base, double e) {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return base;
  if (e == 2.0) return base * base;
  if (e == 3.0) return base * base * base;
  return std::pow(base, e);
}

// Sign with sgn(0) = 0.
inline double sgn(double x) {
  if (x > 0.0) return 1.0;
  if (x < 0.0) return -1.0;
  return 0.0;
}

inline double db_from_power_ratio(double ratio) {
  return 10.0 * std::log10(ratio);
}

inline double amplitude_from_db(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace rnse

#endif  // RNSE_MATHUTIL_HPP_
