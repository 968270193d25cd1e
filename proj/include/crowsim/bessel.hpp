// bessel.hpp — Bessel functions of the first kind, integer order

#pragma once

#include <span>

namespace crowsim {

// J_m(x) for integer m >= 0, x >= 0.
double bessel_j(int m, double x);

// Orders 0..m_max at a common argument. Uses the upward recurrence
// J_{m+1} = (2m/x) J_m - J_{m-1} when it is stable (m_max well below x),
// otherwise falls back to per-order evaluation.
void bessel_j_upto(int m_max, double x, std::span<double> out);

}  // namespace crowsim
