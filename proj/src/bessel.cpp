#include "crowsim/bessel.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace crowsim {

double bessel_j(int m, double x) {
    assert(m >= 0);
    if (x < 0.0) throw std::domain_error("bessel_j: x must be >= 0");
    if (x == 0.0) return m == 0 ? 1.0 : 0.0;
    return std::cyl_bessel_j(static_cast<double>(m), x);
}

void bessel_j_upto(int m_max, double x, std::span<double> out) {
    assert(static_cast<int>(out.size()) >= m_max + 1);
    if (x == 0.0) {
        out[0] = 1.0;
        for (int m = 1; m <= m_max; ++m) out[m] = 0.0;
        return;
    }
    // Forward recurrence amplifies the Y_m admixture once m approaches x;
    // keep a wide safety margin before switching to direct evaluation.
    if (m_max >= 2 && x > 2.0 * m_max + 16.0) {
        out[0] = std::cyl_bessel_j(0.0, x);
        out[1] = std::cyl_bessel_j(1.0, x);
        for (int m = 1; m < m_max; ++m)
            out[m + 1] = (2.0 * m / x) * out[m] - out[m - 1];
        return;
    }
    for (int m = 0; m <= m_max; ++m) out[m] = bessel_j(m, x);
}

}  // namespace crowsim
