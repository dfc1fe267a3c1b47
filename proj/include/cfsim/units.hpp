#pragma once

#include <cmath>

// All frequencies are stored internally as angular frequencies in rad/ns.
// Configuration files and hardware tables quote ordinary frequencies
// (omega/2pi) in GHz or MHz; conversion multiplies by 2*pi. Times are in ns.
namespace cfsim::units {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double ghz_to_radns(double f_ghz) { return two_pi * f_ghz; }
inline constexpr double mhz_to_radns(double f_mhz) { return two_pi * 1e-3 * f_mhz; }
inline constexpr double radns_to_ghz(double w) { return w / two_pi; }
inline constexpr double radns_to_mhz(double w) { return 1e3 * w / two_pi; }

inline constexpr double deg_to_rad(double d) { return d * pi / 180.0; }
inline constexpr double rad_to_deg(double r) { return r * 180.0 / pi; }

// Wrap an angle into [-pi, pi).
inline double wrap_pi(double a) {
    a = std::fmod(a + pi, two_pi);
    if (a < 0) a += two_pi;
    return a - pi;
}

}  // namespace cfsim::units
