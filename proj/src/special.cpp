#include "rsou/special.hpp"

#include <boost/math/distributions/normal.hpp>

namespace rsou {

double norm_quantile(double p) {
    static const boost::math::normal_distribution<double> unit(0.0, 1.0);
    return boost::math::quantile(unit, p);
}

}  // namespace rsou
