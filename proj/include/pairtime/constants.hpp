#ifndef PAIRTIME_CONSTANTS_HPP
#define PAIRTIME_CONSTANTS_HPP

#include <cmath>

namespace pairtime {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// angular frequency (rad/s) of a vacuum wavelength in meters
inline double omega_from_wavelength(double lambda_m) {
    return kTwoPi * kSpeedOfLight / lambda_m;
}

inline double wavelength_from_omega(double omega) {
    return kTwoPi * kSpeedOfLight / omega;
}

// dB/cm -> power attenuation coefficient in 1/m
inline double loss_db_cm_to_alpha(double db_per_cm) {
    return db_per_cm * 100.0 * std::log(10.0) / 10.0;
}

}  // namespace pairtime

#endif
