#ifndef PAIRTIME_SCHMIDT_HPP
#define PAIRTIME_SCHMIDT_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pairtime/joint_grid.hpp"

namespace pairtime {

// Schmidt spectrum of a joint amplitude. coefficients are the normalized
// lambda_k = sigma_k^2 / sum_j sigma_j^2 in descending order; purity is
// sum lambda_k^2 and equals Tr(rho^2) of the heralded single photon;
// schmidt_number K = 1/purity.
struct SchmidtResult {
    std::vector<double> coefficients;
    double purity = 0.0;
    double schmidt_number = 0.0;
    int mode_count_retained = 0;
    bool intensity_upper_bound = false;  // set by purity_upper_bound_from_jti
};

SchmidtResult schmidt_decompose(const Eigen::MatrixXcd& amplitude);

inline SchmidtResult schmidt_decompose(const JointGrid& g) {
    return schmidt_decompose(g.values);
}

// Phase-free surrogate: decomposes sqrt(JTI) element-wise. For a complex
// amplitude this bounds the true heralded purity from above; it is what a
// time-resolved coincidence measurement can report.
SchmidtResult purity_upper_bound_from_jti(const Eigen::MatrixXd& jti);

// leading Schmidt mode profiles (right = idler axis, left = signal axis)
struct SchmidtModes {
    Eigen::MatrixXcd signal_modes;  // column k: k-th signal-side mode
    Eigen::MatrixXcd idler_modes;
    std::vector<double> coefficients;
};
SchmidtModes schmidt_modes(const Eigen::MatrixXcd& amplitude, int n_modes);

// Bootstrap standard error of the sqrt-JTI purity for a histogram of
// coincidence counts: multinomial resamples of the bin contents, one purity
// per replica, deterministic per (seed, replica).
double statistical_error(const Eigen::MatrixXd& counts, int n_bootstrap,
                         std::uint64_t seed, int n_threads = 1);

}  // namespace pairtime

#endif
