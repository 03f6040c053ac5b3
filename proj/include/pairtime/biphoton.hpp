#ifndef PAIRTIME_BIPHOTON_HPP
#define PAIRTIME_BIPHOTON_HPP

#include <complex>
#include <functional>
#include <vector>

#include "pairtime/axis.hpp"
#include "pairtime/constants.hpp"
#include "pairtime/joint_grid.hpp"

namespace pairtime {

enum class PulseShape { rectangular, gaussian };

// Pump pulse carved from the CW laser. duration is the full width of the
// rectangle (or the 1/e intensity half-width times 2 for gaussian).
struct PumpPulse {
    PulseShape shape = PulseShape::rectangular;
    double duration_s = 300e-12;
    double carrier_rad_s = 0.0;
    double energy_j = 0.0;
    double repetition_rate_hz = 10e6;

    void validate() const;
};

// Parametric single-pole resonance used when the full device model is not
// wanted: wavelength/Q pin the pole, escape scales the emission amplitude,
// center_offset displaces the pole from the nominal comb position (rad/s).
// The offsets are how comb non-equidistance (e.g. an auxiliary-resonator pull
// on one resonance) enters the joint amplitude.
struct ResonanceMode {
    double wavelength_m = 0.0;
    double loaded_q = 0.0;
    double escape = 1.0;
    double center_offset_rad_s = 0.0;

    double omega0() const { return omega_from_wavelength(wavelength_m); }
    double center() const { return omega0() + center_offset_rad_s; }
    double linewidth() const { return omega0() / loaded_q; }  // FWHM, rad/s
    double lifetime() const { return loaded_q / omega0(); }   // energy decay

    // causal-pole field enhancement, peak value escape-weighted
    std::complex<double> field(double omega) const {
        double g = linewidth();
        return std::sqrt(escape) / std::complex<double>(1.0, -2.0 * (omega - center()) / g);
    }
};

using FieldFunction = std::function<std::complex<double>(double omega)>;

// role-x field enhancement plus the grid hints compute_jsa needs
struct FieldSource {
    FieldFunction field;
    double center_rad_s = 0.0;
    double linewidth_rad_s = 0.0;
};

FieldSource field_source(const ResonanceMode& mode);

// complex pump spectral amplitude alpha(omega) on the grid, L2-normalized;
// throws std::runtime_error if more than 1% of the analytic norm falls
// outside the grid
std::vector<std::complex<double>> pump_spectrum(const PumpPulse& pulse,
                                                const Axis& grid);

struct JsaOptions {
    int n = 512;                 // points per axis
    double span_linewidths = 16; // per-axis span over the widest linewidth
    double quad_rel_tol = 1e-4;  // step-halving target for the inner integral
    int n_threads = 1;
};

// Joint spectral amplitude of the pair via the asymptotic-field convolution
//   JSA(ws, wi) = F_s(ws) F_i(wi) Int dw alpha(w) alpha(ws+wi-w) F_p(w) F_p(ws+wi-w)
// normalized to unit probability on the grid.
JointGrid compute_jsa(const FieldSource& pump, const FieldSource& signal,
                      const FieldSource& idler, const PumpPulse& pulse,
                      const JsaOptions& opt = {});

// 2D Fourier transform between conjugate domains (unitary, Parseval-exact up
// to rounding). Axes come back as envelope times with dt = 2*pi/(n*dw);
// per-axis carrier phases are dropped (they do not affect any observable
// derived here).
JointGrid jsa_to_jta(const JointGrid& jsa);
JointGrid jta_to_jsa(const JointGrid& jta);

struct TimeGridOptions {
    int n = 512;                 // output grid points per axis
    double span_lifetimes = 8.0; // extent past the pulse in max lifetimes
    int quad_oversample = 8;     // generation-time quadrature points per output step
    int n_threads = 1;
};

// Direct time-domain joint amplitude:
//   JTA(ts, ti) = Int dt p(t)^2 e^{i mismatch t} h_s(ts-t) h_i(ti-t)
// with p the driven intracavity pump envelope and h_x(tau) = theta(tau)
// exp(-tau/(2 tau_x)). mismatch = sum of the three center offsets
// (w_s0 + w_i0 - 2 w_p0) relative to the nominal energy-matched comb.
JointGrid jta_time_domain(const ResonanceMode& pump_mode,
                          const ResonanceMode& signal_mode,
                          const ResonanceMode& idler_mode,
                          const PumpPulse& pulse,
                          const TimeGridOptions& opt = {});

// driven-cavity envelope for a rectangular pulse on [0, T]
std::complex<double> intracavity_pump(double t, double duration,
                                      double linewidth, double detuning = 0.0);

}  // namespace pairtime

#endif
