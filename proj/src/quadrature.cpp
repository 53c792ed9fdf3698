#include "vstates/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace vstates::quad {

double integrate(const std::function<double(double)>& f, double lo, double hi) {
    if (lo == hi) {
        return 0.0;
    }
    thread_local boost::math::quadrature::tanh_sinh<double> rule(kMaxRefinements);
    return rule.integrate(f, lo, hi, kAdaptiveTol);
}

} // namespace vstates::quad
