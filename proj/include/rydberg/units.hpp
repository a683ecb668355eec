#pragma once

#include <numbers>

#include <Eigen/Dense>

// Unit conventions used throughout the library:
//   - configuration frequencies are ordinary frequencies in MHz,
//   - Hamiltonian entries are angular frequencies in rad/us,
//   - propagation times are in us, scan durations in ns,
//   - lengths in um, wavevectors in rad/um.
// Since 1 MHz * 1 us = 1, converting MHz to rad/us is a factor 2 pi and
// nothing else. angular() is the only place that factor is applied.

namespace rydberg {

using Vec3 = Eigen::Vector3d;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// MHz -> rad/us
constexpr double angular(double mhz) { return two_pi * mhz; }

constexpr double ns_to_us(double ns) { return ns * 1e-3; }
constexpr double us_to_ns(double us) { return us * 1e3; }

} // namespace rydberg
