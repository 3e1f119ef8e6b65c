#include "casesens/normal.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>

#include "casesens/error.hpp"

namespace casesens {

namespace {
const boost::math::normal_distribution<double> kStandardNormal{0.0, 1.0};
}

double normal_cdf(double z) {
    if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
    return boost::math::cdf(kStandardNormal, z);
}

double normal_sf(double z) {
    if (std::isinf(z)) return z > 0 ? 0.0 : 1.0;
    return boost::math::cdf(boost::math::complement(kStandardNormal, z));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "normal quantile requires p in (0,1)");
    }
    return boost::math::quantile(kStandardNormal, p);
}

}  // namespace casesens
