#include "cfsim/bessel.hpp"

#include <cmath>
#include <cstdlib>

namespace cfsim {

double bessel_j(int n, double x) {
    const bool neg_order = n < 0;
    const bool neg_arg = x < 0;
    const unsigned nu = static_cast<unsigned>(neg_order ? -n : n);
    double v = std::cyl_bessel_j(static_cast<double>(nu), std::fabs(x));
    // J_{-n}(x) = (-1)^n J_n(x), J_n(-x) = (-1)^n J_n(x): the two parity
    // factors cancel when both apply.
    if ((neg_order != neg_arg) && (nu % 2 == 1)) v = -v;
    return v;
}

double bessel_j0_plus_j2(double x) {
    x = std::fabs(x);
    return std::cyl_bessel_j(0.0, x) + std::cyl_bessel_j(2.0, x);
}

double first_root_j0_plus_j2() {
    // Bisection on [3.5, 4.2]; the function is monotone through this root.
    double lo = 3.5, hi = 4.2;
    double flo = bessel_j0_plus_j2(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bessel_j0_plus_j2(mid);
        if ((flo > 0) == (fm > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace cfsim
