#include <doctest.h>

#include <cmath>

#include "svar/identification.hpp"
#include "svar/simulate.hpp"

using namespace svar;

namespace {

SvarDgp white_noise_dgp(int n, int T, std::uint64_t seed) {
    SvarDgp dgp;
    dgp.lag_matrices = {Eigen::MatrixXd::Zero(n, n)};
    dgp.impact = Eigen::MatrixXd::Identity(n, n);
    dgp.intercept = Eigen::VectorXd::Zero(n);
    dgp.sample_size = T;
    dgp.master_seed = seed;
    return dgp;
}

}  // namespace

TEST_CASE("white-noise DGP produces approximately identity covariance") {
    const int T = 20000;
    auto res = simulate(white_noise_dgp(3, T, 4));
    const Eigen::MatrixXd& y = res.data.values();
    Eigen::RowVectorXd mean = y.colwise().mean();
    Eigen::MatrixXd centered = y.rowwise() - mean;
    Eigen::MatrixXd cov = centered.transpose() * centered / (T - 1);
    CHECK((cov - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 0.05);
    CHECK(mean.cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("simulation mechanics") {
    SUBCASE("same seed gives identical output") {
        auto dgp = paper_like_dgp();
        dgp.sample_size = 50;
        auto a = simulate(dgp);
        auto b = simulate(dgp);
        CHECK(a.data.values() == b.data.values());
        CHECK(a.shocks == b.shocks);
        dgp.master_seed += 1;
        auto c = simulate(dgp);
        CHECK(a.data.values() != c.data.values());
    }
    SUBCASE("dates start at the configured quarter and are contiguous") {
        auto dgp = white_noise_dgp(2, 6, 1);
        dgp.start = QuarterIndex{2010, 3};
        auto res = simulate(dgp);
        CHECK(res.data.dates().front() == QuarterIndex{2010, 3});
        CHECK(res.data.dates().back() == QuarterIndex{2011, 4});
    }
    SUBCASE("explosive DGP rejected") {
        SvarDgp dgp = white_noise_dgp(2, 10, 1);
        dgp.lag_matrices[0] = 1.05 * Eigen::MatrixXd::Identity(2, 2);
        CHECK(dgp.spectral_radius() > 1.0);
        CHECK_THROWS(simulate(dgp));
    }
    SUBCASE("singular impact rejected") {
        SvarDgp dgp = white_noise_dgp(2, 10, 1);
        dgp.impact.col(1).setZero();
        CHECK_THROWS(simulate(dgp));
    }
    SUBCASE("shock matrix has unit-variance, uncorrelated columns") {
        auto dgp = white_noise_dgp(4, 40000, 9);
        auto res = simulate(dgp);
        Eigen::MatrixXd w = res.shocks;
        Eigen::MatrixXd cov = w.transpose() * w / w.rows();
        CHECK((cov - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.05);
    }
}

TEST_CASE("paper-like DGP satisfies the identification grid with margin") {
    auto dgp = paper_like_dgp();
    CHECK(dgp.n() == 5);
    CHECK(dgp.p() == 2);
    CHECK(dgp.spectral_radius() < 0.95);

    auto restr = paper_restrictions();
    CHECK(restr.satisfied_by(dgp.impact));
    // zero pattern holds exactly, signed entries clear 0.2
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            switch (restr.get(i, j)) {
                case Sign::Zero: CHECK(dgp.impact(i, j) == 0.0); break;
                case Sign::Positive: CHECK(dgp.impact(i, j) > 0.2); break;
                case Sign::Negative: CHECK(dgp.impact(i, j) < -0.2); break;
                case Sign::Unrestricted: break;
            }
        }
}

TEST_CASE("oracle IRF") {
    SUBCASE("horizon 0 is the impact matrix") {
        auto dgp = paper_like_dgp();
        auto irfs = oracle_irf(dgp, 4);
        REQUIRE(irfs.size() == 5);
        CHECK(irfs[0] == dgp.impact);
    }
    SUBCASE("diagonal VAR(1) has closed-form responses a^h") {
        SvarDgp dgp = white_noise_dgp(2, 10, 1);
        Eigen::MatrixXd a(2, 2);
        a << 0.5, 0.0, 0.0, -0.3;
        dgp.lag_matrices[0] = a;
        auto irfs = oracle_irf(dgp, 6);
        for (int h = 0; h <= 6; ++h) {
            CHECK(irfs[h](0, 0) == doctest::Approx(std::pow(0.5, h)).epsilon(1e-12));
            CHECK(irfs[h](1, 1) == doctest::Approx(std::pow(-0.3, h)).epsilon(1e-12));
            CHECK(irfs[h](0, 1) == 0.0);
        }
    }
}

TEST_CASE("least squares on simulated data recovers the DGP coefficients") {
    auto dgp = paper_like_dgp();
    dgp.sample_size = 4000;
    dgp.master_seed = 123;
    auto res = simulate(dgp);
    const Eigen::MatrixXd& y = res.data.values();
    const int T = dgp.sample_size, n = 5, p = 2;
    Eigen::MatrixXd Y(T - p, n), X(T - p, n * p + 1);
    for (int t = p; t < T; ++t) {
        Y.row(t - p) = y.row(t);
        X.block(t - p, 0, 1, n) = y.row(t - 1);
        X.block(t - p, n, 1, n) = y.row(t - 2);
        X(t - p, 2 * n) = 1.0;
    }
    Eigen::MatrixXd beta = (X.transpose() * X).ldlt().solve(X.transpose() * Y);
    Eigen::MatrixXd resid = Y - X * beta;
    Eigen::MatrixXd sig = resid.transpose() * resid / (Y.rows() - X.cols());
    Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
    for (int j = 0; j < n; ++j) {
        Eigen::MatrixXd truth(n * p + 1, 1);
        truth.block(0, 0, n, 1) = dgp.lag_matrices[0].row(j).transpose();
        truth.block(n, 0, n, 1) = dgp.lag_matrices[1].row(j).transpose();
        truth(2 * n, 0) = dgp.intercept(j);
        for (int i = 0; i < n * p + 1; ++i) {
            const double se = std::sqrt(sig(j, j) * xtx_inv(i, i));
            CHECK(std::abs(beta(i, j) - truth(i, 0)) < 4.0 * se + 1e-10);
        }
    }
}
