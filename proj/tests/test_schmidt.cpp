#include "pairtime/schmidt.hpp"

#include <Eigen/Dense>
#include <complex>

#include "doctest.h"
#include "pairtime/rng.hpp"

using namespace pairtime;
using cd = std::complex<double>;

namespace {

// brute-force purity oracle: Tr(rho^2) with rho = A A^dag / Tr(A A^dag)
double purity_density_matrix(const Eigen::MatrixXcd& a) {
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();
    return (rho * rho).trace().real();
}

Eigen::MatrixXcd random_low_rank(int n, int rank, RandomStream& rng) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int r = 0; r < rank; ++r) {
        Eigen::VectorXcd u(n), v(n);
        for (int i = 0; i < n; ++i) {
            u[i] = cd(rng.gaussian(), rng.gaussian());
            v[i] = cd(rng.gaussian(), rng.gaussian());
        }
        a += std::pow(0.6, r) * u * v.transpose();
    }
    return a;
}

}  // namespace

TEST_CASE("separable amplitude has purity 1") {
    Eigen::VectorXcd u(32), v(32);
    for (int i = 0; i < 32; ++i) {
        u[i] = std::exp(-0.1 * i) * cd(1.0, 0.3);
        v[i] = std::exp(-0.05 * i);
    }
    auto r = schmidt_decompose(Eigen::MatrixXcd(u * v.transpose()));
    CHECK(r.purity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.schmidt_number == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.mode_count_retained >= 1);
}

TEST_CASE("two equal orthogonal modes give purity 1/2") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(16, 16);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    auto r = schmidt_decompose(a);
    CHECK(r.purity == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.schmidt_number == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.coefficients.size() == 2);
    CHECK(r.coefficients[0] == doctest::Approx(0.5));
}

TEST_CASE("coefficients are normalized and descending") {
    RandomStream rng(7);
    auto a = random_low_rank(48, 6, rng);
    auto r = schmidt_decompose(a);
    double sum = 0.0;
    for (size_t k = 0; k < r.coefficients.size(); ++k) {
        sum += r.coefficients[k];
        if (k) CHECK(r.coefficients[k] <= r.coefficients[k - 1] + 1e-15);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("purity equals density-matrix oracle on 64x64 grids") {
    RandomStream rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_low_rank(64, 4 + trial, rng);
        auto r = schmidt_decompose(a);
        CHECK(r.purity == doctest::Approx(purity_density_matrix(a)).epsilon(1e-10));
    }
}

TEST_CASE("zero or invalid amplitude raises") {
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(8, 8);
    CHECK_THROWS_AS(schmidt_decompose(z), std::domain_error);
    Eigen::MatrixXd neg = Eigen::MatrixXd::Constant(4, 4, -1.0);
    CHECK_THROWS_AS(purity_upper_bound_from_jti(neg), std::domain_error);
}

TEST_CASE("scaling invariance") {
    RandomStream rng(3);
    auto a = random_low_rank(32, 3, rng);
    auto r1 = schmidt_decompose(a);
    auto r2 = schmidt_decompose(Eigen::MatrixXcd(a * cd(0.0, -2.7e4)));
    CHECK(r1.purity == doctest::Approx(r2.purity).epsilon(1e-12));
}

TEST_CASE("unitary mixing of rows or columns leaves the spectrum unchanged") {
    RandomStream rng(11);
    auto a = random_low_rank(32, 5, rng);
    // random unitary via QR of a gaussian matrix
    Eigen::MatrixXcd gauss(32, 32);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
            gauss(i, j) = cd(rng.gaussian(), rng.gaussian());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gauss);
    Eigen::MatrixXcd q = qr.householderQ();
    auto r1 = schmidt_decompose(a);
    auto r2 = schmidt_decompose(Eigen::MatrixXcd(q * a));
    auto r3 = schmidt_decompose(Eigen::MatrixXcd(a * q));
    CHECK(r1.purity == doctest::Approx(r2.purity).epsilon(1e-9));
    CHECK(r1.purity == doctest::Approx(r3.purity).epsilon(1e-9));
    for (size_t k = 0; k < std::min<size_t>(5, r1.coefficients.size()); ++k)
        CHECK(r1.coefficients[k] == doctest::Approx(r2.coefficients[k]).epsilon(1e-8));
}

TEST_CASE("intensity bound dominates the true purity") {
    RandomStream rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_low_rank(24, 1 + trial % 5, rng);
        auto exact = schmidt_decompose(a);
        auto bound = purity_upper_bound_from_jti(a.cwiseAbs2());
        CHECK(bound.intensity_upper_bound);
        CHECK(bound.purity >= exact.purity - 1e-9);
    }
}

TEST_CASE("bound is tight for real nonnegative separable amplitudes") {
    Eigen::VectorXd u(16), v(16);
    for (int i = 0; i < 16; ++i) {
        u[i] = std::exp(-0.2 * i);
        v[i] = 1.0 / (1.0 + i);
    }
    Eigen::MatrixXd jti = (u * v.transpose()).array().square();
    auto bound = purity_upper_bound_from_jti(jti);
    CHECK(bound.purity == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("bootstrap error: determinism and sane scale") {
    // two-mode JTI with known statistics
    Eigen::MatrixXd counts(3, 3);
    counts << 400, 30, 2, 30, 250, 25, 1, 25, 120;
    double e1 = statistical_error(counts, 120, 99);
    double e2 = statistical_error(counts, 120, 99);
    CHECK(e1 == e2);  // fixed seed, identical estimate
    CHECK(e1 > 0.0);
    CHECK(e1 < 0.1);

    // more counts, smaller error
    Eigen::MatrixXd big = counts * 100.0;
    double e3 = statistical_error(big, 120, 99);
    CHECK(e3 < e1);

    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
    CHECK_THROWS_AS(statistical_error(zero, 120, 1), std::domain_error);
}

TEST_CASE("bootstrap error tracks ground-truth replication spread") {
    // draw histograms from a known JTI, compare the bootstrap error on one
    // of them with the spread of purities over independent regenerations
    const int n = 12;
    Eigen::MatrixXd jti(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            jti(i, j) = std::exp(-0.25 * (i - j) * (i - j) - 0.05 * (i + j));
    jti /= jti.sum();

    std::vector<double> cum;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cum.push_back(acc += jti(i, j));

    auto draw = [&](std::uint64_t seed) {
        RandomStream rng = RandomStream::substream(seed, 17);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        for (int d = 0; d < 10000; ++d) {
            double u = rng.uniform();
            int flat = static_cast<int>(
                std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            if (flat >= n * n) flat = n * n - 1;
            h(flat / n, flat % n) += 1.0;
        }
        return h;
    };

    double boot = statistical_error(draw(1), 200, 7);

    double mean = 0.0, m2 = 0.0;
    const int reps = 50;
    std::vector<double> ps;
    for (int r = 0; r < reps; ++r)
        ps.push_back(purity_upper_bound_from_jti(draw(100 + r)).purity);
    for (double p : ps) mean += p;
    mean /= reps;
    for (double p : ps) m2 += (p - mean) * (p - mean);
    double spread = std::sqrt(m2 / (reps - 1));

    CHECK(boot < 3.0 * spread);
    CHECK(boot > spread / 3.0);
}
