#pragma once

namespace casesens {

// Standard normal CDF and its upper tail.
double normal_cdf(double z);
double normal_sf(double z);

// Inverse of normal_cdf; p must lie in (0, 1).
double normal_quantile(double p);

}  // namespace casesens
