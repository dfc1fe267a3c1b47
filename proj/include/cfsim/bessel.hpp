#pragma once

namespace cfsim {

// Bessel function of the first kind J_n for integer order, any real argument.
// Extends the standard routine (defined for x >= 0, n >= 0) by the parity
// relations J_n(-x) = (-1)^n J_n(x) and J_{-n}(x) = (-1)^n J_n(x).
double bessel_j(int n, double x);

// J0(x) + J2(x); the nonlinear amplitude factor shared by every resonant
// coupling formula. Equals 2*J1(x)/x by the standard recurrence, so it is
// even in x and its first positive root is the first nonzero root of J1.
double bessel_j0_plus_j2(double x);

// First positive root of J0(x) + J2(x) = 0 (~3.8317), to double precision.
double first_root_j0_plus_j2();

}  // namespace cfsim
