#include "pairtime/biphoton.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace pairtime {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// unnormalized spectral amplitude of the carved pulse, relative to carrier
cd pulse_amplitude(const PumpPulse& p, double detuning) {
    const double T = p.duration_s;
    if (p.shape == PulseShape::rectangular) {
        // rectangle on [0, T]
        if (std::fabs(detuning) * T < 1e-9) return cd{T, 0.0};
        return (std::exp(kI * detuning * T) - 1.0) / (kI * detuning);
    }
    // gaussian with intensity std T/2, peaked at t = 0
    const double s = 0.5 * T;
    return std::sqrt(kTwoPi) * 2.0 * s * std::exp(-detuning * detuning * s * s);
}

}  // namespace

void PumpPulse::validate() const {
    if (!(duration_s > 0.0)) throw std::domain_error("PumpPulse: duration <= 0");
    if (repetition_rate_hz > 0.0 && repetition_rate_hz * duration_s >= 1.0)
        throw std::domain_error("PumpPulse: duty cycle >= 1");
}

FieldSource field_source(const ResonanceMode& mode) {
    if (!(mode.wavelength_m > 0.0) || !(mode.loaded_q > 0.0))
        throw std::domain_error("ResonanceMode: wavelength and Q must be positive");
    FieldSource src;
    src.field = [mode](double omega) { return mode.field(omega); };
    src.center_rad_s = mode.omega0();
    src.linewidth_rad_s = mode.linewidth();
    return src;
}

std::vector<cd> pump_spectrum(const PumpPulse& pulse, const Axis& grid) {
    pulse.validate();
    grid.validate();
    if (grid.span() < 20.0 / pulse.duration_s)
        throw std::runtime_error("pump_spectrum: grid narrower than 20/T");

    std::vector<cd> a(grid.n);
    double sum2 = 0.0;
    for (int k = 0; k < grid.n; ++k) {
        a[k] = pulse_amplitude(pulse, grid.value(k) - pulse.carrier_rad_s);
        double w = (k == 0 || k == grid.n - 1) ? 0.5 : 1.0;  // trapezoid
        sum2 += w * std::norm(a[k]);
    }
    sum2 *= grid.step;

    // analytic L2 norm: int |alpha|^2 dw = 2 pi int |f|^2 dt
    double analytic;
    if (pulse.shape == PulseShape::rectangular) {
        analytic = kTwoPi * pulse.duration_s;
    } else {
        const double s = 0.5 * pulse.duration_s;
        analytic = 4.0 * kPi * std::sqrt(kTwoPi) * s;
    }
    if (sum2 < 0.99 * analytic)
        throw std::runtime_error(
            "pump_spectrum: more than 1% of the pulse norm lies outside the grid");

    const double scale = 1.0 / std::sqrt(sum2);
    for (auto& v : a) v *= scale;
    return a;
}

namespace {

void parallel_for(int n, int n_threads, const std::function<void(int)>& body) {
    if (n_threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> cursor{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(n_threads, n); ++t)
        pool.emplace_back([&] {
            for (int i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1))
                body(i);
        });
    for (auto& th : pool) th.join();
}

// Trapezoid evaluation of the pump self-convolution
//   G(sum) = int dw A(w) A(sum - w),  A(w) = alpha(w) F_p(w).
// The pump quadrature grid divides the output sum-grid step, so s - w_k lands
// back on the grid and the inner loop is index arithmetic over a precomputed
// table.
std::vector<cd> pump_convolution(const FieldSource& pump, const PumpPulse& pulse,
                                 double sum0, double sum_step, int n_sums,
                                 int substeps, int n_threads) {
    const double wc = pulse.carrier_rad_s;
    const double g = pump.linewidth_rad_s;
    const double h = sum_step / substeps;
    const double bw = std::max(160.0 / pulse.duration_s, 40.0 * g);
    const int m = static_cast<int>(bw / h) + 1;
    // align so that (sum0 - lo) is an integer multiple of h
    const long j0 = std::lround((sum0 - (wc - 0.5 * bw)) / h);
    const double lo = sum0 - static_cast<double>(j0) * h;

    std::vector<cd> a(m);
    for (int k = 0; k < m; ++k) {
        const double w = lo + k * h;
        a[k] = pulse_amplitude(pulse, w - wc) * pump.field(w);
    }

    std::vector<cd> out(n_sums);
    parallel_for(n_sums, n_threads, [&](int idx) {
        // index of s - lo on the pump grid
        const long base = j0 + static_cast<long>(idx) * substeps;
        cd acc{0.0, 0.0};
        for (int k = 0; k < m; ++k) {
            const long k2 = base - k;
            if (k2 < 0) break;  // k2 decreases with k
            if (k2 >= m) continue;
            cd term = a[k] * a[k2];
            if (k == 0 || k == m - 1 || k2 == 0 || k2 == m - 1) term *= 0.5;
            acc += term;
        }
        out[idx] = acc * h;
    });
    return out;
}

double max_abs(const std::vector<cd>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

JointGrid compute_jsa(const FieldSource& pump, const FieldSource& signal,
                      const FieldSource& idler, const PumpPulse& pulse,
                      const JsaOptions& opt) {
    pulse.validate();
    if (opt.n < 8) throw std::domain_error("compute_jsa: grid too small");

    const double g_max = std::max({pump.linewidth_rad_s, signal.linewidth_rad_s,
                                   idler.linewidth_rad_s});
    const double span = opt.span_linewidths * g_max;
    for (double g : {pump.linewidth_rad_s, signal.linewidth_rad_s,
                     idler.linewidth_rad_s})
        if (span < 10.0 * g)
            throw std::runtime_error("compute_jsa: grid covers < 10 linewidths");

    const int n = opt.n;
    const double step = span / (n - 1);
    JointGrid jsa;
    jsa.domain = GridDomain::spectral;
    jsa.axis_s = {signal.center_rad_s - 0.5 * span, step, n};
    jsa.axis_i = {idler.center_rad_s - 0.5 * span, step, n};

    // the inner integral depends on ws + wi only: 2n-1 distinct sums
    const int n_sums = 2 * n - 1;
    const double sum0 = jsa.axis_s.start + jsa.axis_i.start;

    int substeps = 2 * std::max(1, static_cast<int>(std::ceil(
                           step / (pump.linewidth_rad_s / 10.0))));
    std::vector<cd> g_fine = pump_convolution(pump, pulse, sum0, step, n_sums,
                                              substeps, opt.n_threads);
    // step-halving error estimate; refine until the tolerance is met
    for (;;) {
        std::vector<cd> g_coarse = pump_convolution(
            pump, pulse, sum0, step, n_sums, substeps / 2, opt.n_threads);
        double err = 0.0;
        const double ref = max_abs(g_fine);
        for (int k = 0; k < n_sums; ++k)
            err = std::max(err, std::abs(g_fine[k] - g_coarse[k]) / ref);
        if (err < opt.quad_rel_tol) break;
        substeps *= 2;
        if (substeps > 4096)
            throw std::runtime_error("compute_jsa: quadrature did not reach tolerance");
        g_fine = pump_convolution(pump, pulse, sum0, step, n_sums, substeps,
                                  opt.n_threads);
    }

    jsa.values.resize(n, n);
    std::vector<cd> fs(n), fi(n);
    for (int k = 0; k < n; ++k) {
        fs[k] = signal.field(jsa.axis_s.value(k));
        fi[k] = idler.field(jsa.axis_i.value(k));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            jsa.values(i, j) = fs[i] * fi[j] * g_fine[i + j];

    jsa.normalize();
    return jsa;
}

namespace {

std::mutex fftw_mutex;  // FFTW planning is not thread-safe

// exact sampled continuous FT between conjugate grids, defined about the grid
// centers; sign = -1 maps spectral -> temporal, +1 maps back
JointGrid grid_fourier(const JointGrid& in, int sign) {
    in.validate();
    const int ns = in.axis_s.n, ni = in.axis_i.n;

    JointGrid out;
    out.domain = (sign < 0) ? GridDomain::temporal : GridDomain::spectral;
    const double dts = kTwoPi / (ns * in.axis_s.step);
    const double dti = kTwoPi / (ni * in.axis_i.step);
    out.axis_s = {-0.5 * ns * dts, dts, ns};
    out.axis_i = {-0.5 * ni * dti, dti, ni};

    // JTA[m,n] = C sum_{k,l} JSA[k,l] exp(sign*i*(u_k tau_m + u_l tau_n))
    // u_k about the input center, tau_m on the output axis; splits into an FFT
    // with per-index twiddles.
    Eigen::MatrixXcd work(ns, ni);
    const double us0 = in.axis_s.start - in.axis_s.center();
    const double ui0 = in.axis_i.start - in.axis_i.center();
    for (int k = 0; k < ns; ++k) {
        cd rs = std::exp(cd(0, sign * (in.axis_s.step * k) * out.axis_s.start));
        for (int l = 0; l < ni; ++l) {
            cd ri = std::exp(cd(0, sign * (in.axis_i.step * l) * out.axis_i.start));
            work(k, l) = in.values(k, l) * rs * ri;
        }
    }

    // row-major copy for FFTW
    std::vector<cd> buf(static_cast<size_t>(ns) * ni);
    for (int k = 0; k < ns; ++k)
        for (int l = 0; l < ni; ++l)
            buf[static_cast<size_t>(k) * ni + l] = work(k, l);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_plan plan = fftw_plan_dft_2d(
            ns, ni, reinterpret_cast<fftw_complex*>(buf.data()),
            reinterpret_cast<fftw_complex*>(buf.data()),
            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    const double measure = (sign < 0)
                               ? in.axis_s.step * in.axis_i.step / (kTwoPi * kTwoPi)
                               : in.axis_s.step * in.axis_i.step;
    out.values.resize(ns, ni);
    for (int m = 0; m < ns; ++m) {
        cd ps = std::exp(cd(0, sign * us0 * out.axis_s.value(m)));
        for (int nn = 0; nn < ni; ++nn) {
            cd pi = std::exp(cd(0, sign * ui0 * out.axis_i.value(nn)));
            out.values(m, nn) =
                buf[static_cast<size_t>(m) * ni + nn] * ps * pi * measure;
        }
    }
    return out;
}

}  // namespace

JointGrid jsa_to_jta(const JointGrid& jsa) {
    if (jsa.domain != GridDomain::spectral)
        throw std::domain_error("jsa_to_jta: input is not spectral");
    return grid_fourier(jsa, -1);
}

JointGrid jta_to_jsa(const JointGrid& jta) {
    if (jta.domain != GridDomain::temporal)
        throw std::domain_error("jta_to_jsa: input is not temporal");
    return grid_fourier(jta, +1);
}

std::complex<double> intracavity_pump(double t, double duration,
                                      double linewidth, double detuning) {
    if (t <= 0.0) return {0.0, 0.0};
    const cd s = cd(0.5 * linewidth, detuning);  // pole rotates e^{-i detuning t}
    if (t <= duration) return (1.0 - std::exp(-s * t)) / s;
    const cd at_end = (1.0 - std::exp(-s * duration)) / s;
    return at_end * std::exp(-s * (t - duration));
}

JointGrid jta_time_domain(const ResonanceMode& pump_mode,
                          const ResonanceMode& signal_mode,
                          const ResonanceMode& idler_mode,
                          const PumpPulse& pulse, const TimeGridOptions& opt) {
    pulse.validate();
    if (pulse.shape != PulseShape::rectangular)
        throw std::domain_error("jta_time_domain: rectangular pump only");
    if (opt.n < 8 || opt.quad_oversample < 1)
        throw std::domain_error("jta_time_domain: bad grid options");

    const double gp = pump_mode.linewidth();
    const double gs = signal_mode.linewidth();
    const double gi = idler_mode.linewidth();
    const double tau_max = std::max({1.0 / gp, 1.0 / gs, 1.0 / gi});
    const double T = pulse.duration_s;
    const double t_max = T + opt.span_lifetimes * tau_max;

    const int n = opt.n;
    const double step = t_max / (n - 1);
    const double tau_min = std::min({1.0 / gs, 1.0 / gi});
    if (step > tau_min / 20.0 * opt.quad_oversample * 4.0) {
        // quadrature still resolves the fastest kernel even when the output
        // grid does not; only reject hopeless settings
        if (step > tau_min)
            throw std::runtime_error("jta_time_domain: output step exceeds the shortest lifetime");
    }

    // generation-time phase: sum-frequency mismatch of the three pole centers
    const double mismatch = signal_mode.center_offset_rad_s +
                            idler_mode.center_offset_rad_s -
                            2.0 * pump_mode.center_offset_rad_s;

    // prefix integral S(tau) = int_0^tau b(t)^2 e^{i mismatch t}
    //                                   e^{(z_s + z_i) t} dt
    // with z_x = gamma_x/2 + i off_x; then
    // JTA(ts, ti) = e^{-z_s ts} e^{-z_i ti} S(min(ts, ti)).
    const cd zs = cd(0.5 * gs, signal_mode.center_offset_rad_s);
    const cd zi = cd(0.5 * gi, idler_mode.center_offset_rad_s);

    const int nt = (n - 1) * opt.quad_oversample + 1;
    const double dt = t_max / (nt - 1);
    std::vector<cd> prefix(nt);
    cd acc{0.0, 0.0};
    cd prev{0.0, 0.0};
    const double drive_detuning = -pump_mode.center_offset_rad_s;
    for (int k = 0; k < nt; ++k) {
        const double t = k * dt;
        cd b = intracavity_pump(t, T, gp, drive_detuning);
        cd integrand = b * b * std::exp(cd(0.0, mismatch * t)) *
                       std::exp((zs + zi) * t);
        if (k > 0) acc += 0.5 * (prev + integrand) * dt;
        prev = integrand;
        prefix[k] = acc;
    }

    JointGrid jta;
    jta.domain = GridDomain::temporal;
    jta.axis_s = {0.0, step, n};
    jta.axis_i = {0.0, step, n};
    jta.values.resize(n, n);

    std::vector<cd> es(n), ei(n);
    for (int k = 0; k < n; ++k) {
        es[k] = std::exp(-zs * (k * step));
        ei[k] = std::exp(-zi * (k * step));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int kmin = std::min(i, j) * opt.quad_oversample;
            jta.values(i, j) = es[i] * ei[j] * prefix[kmin];
        }
    }
    jta.normalize();
    return jta;
}

}  // namespace pairtime
