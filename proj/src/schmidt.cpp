#include "pairtime/schmidt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "pairtime/rng.hpp"

namespace pairtime {

namespace {

// Singular values squared via the Gram matrix of the smaller side. The
// eigendecomposition of A^H A is much faster than a full SVD at 512^2 and
// purity only needs the spectrum.
std::vector<double> gram_spectrum(const Eigen::MatrixXcd& a) {
    Eigen::MatrixXcd gram;
    if (a.rows() >= a.cols())
        gram = a.adjoint() * a;
    else
        gram = a * a.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram,
                                                       Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("schmidt_decompose: eigensolver failed");
    std::vector<double> s2(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
    std::reverse(s2.begin(), s2.end());  // descending
    for (double& v : s2) v = std::max(v, 0.0);
    return s2;
}

SchmidtResult from_spectrum(std::vector<double> s2) {
    double total = 0.0;
    for (double v : s2) total += v;
    if (!(total > 0.0))
        throw std::domain_error("schmidt_decompose: zero amplitude");

    // drop numerical noise below (1e-12 * sigma_max)^2
    const double cut = s2.front() * 1e-24;
    SchmidtResult r;
    for (double v : s2) {
        if (v <= cut) break;
        r.coefficients.push_back(v / total);
    }
    r.mode_count_retained = static_cast<int>(r.coefficients.size());
    double p = 0.0;
    for (double lam : r.coefficients) p += lam * lam;
    r.purity = p;
    r.schmidt_number = 1.0 / p;
    return r;
}

}  // namespace

SchmidtResult schmidt_decompose(const Eigen::MatrixXcd& amplitude) {
    if (amplitude.size() == 0)
        throw std::domain_error("schmidt_decompose: empty amplitude");
    if (!amplitude.allFinite())
        throw std::domain_error("schmidt_decompose: non-finite amplitude");
    return from_spectrum(gram_spectrum(amplitude));
}

SchmidtResult purity_upper_bound_from_jti(const Eigen::MatrixXd& jti) {
    if (jti.size() == 0) throw std::domain_error("jti bound: empty input");
    if ((jti.array() < 0.0).any())
        throw std::domain_error("jti bound: negative entries");
    Eigen::MatrixXcd amp = jti.cwiseSqrt().cast<std::complex<double>>();
    SchmidtResult r = schmidt_decompose(amp);
    r.intensity_upper_bound = true;
    return r;
}

SchmidtModes schmidt_modes(const Eigen::MatrixXcd& amplitude, int n_modes) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        amplitude, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double total = sv.squaredNorm();
    if (!(total > 0.0)) throw std::domain_error("schmidt_modes: zero amplitude");
    int k = std::min<int>(n_modes, sv.size());
    SchmidtModes m;
    m.signal_modes = svd.matrixU().leftCols(k);
    m.idler_modes = svd.matrixV().leftCols(k);
    for (int i = 0; i < k; ++i)
        m.coefficients.push_back(sv[i] * sv[i] / total);
    return m;
}

double statistical_error(const Eigen::MatrixXd& counts, int n_bootstrap,
                         std::uint64_t seed, int n_threads) {
    if (n_bootstrap < 2)
        throw std::domain_error("statistical_error: need n_bootstrap >= 2");
    const double total = counts.sum();
    if (!(total > 0.0))
        throw std::domain_error("statistical_error: empty histogram");

    const auto rows = counts.rows(), cols = counts.cols();
    const std::int64_t n_total = static_cast<std::int64_t>(std::llround(total));

    // flattened bin probabilities for multinomial resampling
    std::vector<double> cum;
    cum.reserve(counts.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            acc += counts(i, j);
            cum.push_back(acc / total);
        }

    std::vector<double> purities(n_bootstrap);
    auto run_replica = [&](int rep) {
        RandomStream rng = RandomStream::substream(seed, 0x626f6f74ULL + rep);
        Eigen::MatrixXd resampled = Eigen::MatrixXd::Zero(rows, cols);
        for (std::int64_t d = 0; d < n_total; ++d) {
            double u = rng.uniform();
            auto it = std::upper_bound(cum.begin(), cum.end(), u);
            auto flat = static_cast<Eigen::Index>(it - cum.begin());
            if (flat >= counts.size()) flat = counts.size() - 1;
            resampled(flat / cols, flat % cols) += 1.0;
        }
        purities[rep] = purity_upper_bound_from_jti(resampled).purity;
    };

    if (n_threads <= 1) {
        for (int rep = 0; rep < n_bootstrap; ++rep) run_replica(rep);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> cursor{0};
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (int rep = cursor.fetch_add(1); rep < n_bootstrap;
                     rep = cursor.fetch_add(1))
                    run_replica(rep);
            });
        for (auto& th : pool) th.join();
    }

    double mean = 0.0;
    for (double p : purities) mean += p;
    mean /= n_bootstrap;
    double var = 0.0;
    for (double p : purities) var += (p - mean) * (p - mean);
    return std::sqrt(var / (n_bootstrap - 1));
}

}  // namespace pairtime
