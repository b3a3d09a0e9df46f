#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svar/timeseries.hpp"

namespace svar {

// Quarter-specific residual scale profile absorbing pandemic-era outliers.
// s_t = 1 before onset; s1, s2, s3 over the first three affected quarters;
// 1 + (s3 - 1) * rho^(t - onset - 2) afterwards.
struct CovidProfile {
    QuarterIndex onset{2020, 2};
    double s1 = 1.0, s2 = 1.0, s3 = 1.0;
    double rho = 0.5;
};

Eigen::VectorXd covid_scales(const CovidProfile& profile, const std::vector<QuarterIndex>& dates);

struct BvarSpec {
    int lags = 4;
    bool intercept = true;
    double delta = 1.0;          // prior mean of own first lag, per variable
    double lambda = 0.2;         // overall tightness
    double intercept_variance = 1e6;
    std::optional<CovidProfile> covid;

    void validate() const;
};

// Normal-inverse-Wishart prior in matrix-variate form:
// vec(B) | Sigma ~ N(vec(B0), Sigma (x) Omega), Sigma ~ IW(S0, nu0).
struct NiwPrior {
    Eigen::MatrixXd coef_mean;      // k x n
    Eigen::VectorXd omega_diag;     // k (row covariance, diagonal)
    Eigen::MatrixXd scale;          // n x n, inverse-Wishart scale S0
    double dof = 0.0;               // nu0
};

struct BvarDraw {
    Eigen::MatrixXd coefs;   // (n*p + intercept) x n, row blocks [A_1'; ...; A_p'; c']
    Eigen::MatrixXd sigma;   // n x n innovation covariance
};

struct BvarPosterior {
    std::vector<BvarDraw> draws;
    BvarSpec spec;
    std::vector<std::string> names;
    std::vector<QuarterIndex> dates;  // estimation sample dates
    std::uint64_t master_seed = 0;
    double lambda_used = 0.0;
};

// Lag matrix A_j (n x n) from a stacked coefficient matrix.
Eigen::MatrixXd lag_matrix(const Eigen::MatrixXd& coefs, int n, int j);
// Intercept column (zero when the spec has none).
Eigen::VectorXd intercept_of(const Eigen::MatrixXd& coefs, int n, int p, bool has_intercept);

// Y rows are y_t', X rows are [y_{t-1}', ..., y_{t-p}', 1].
std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
build_regressors(const MacroDataset& data, const BvarSpec& spec);

// Minnesota layout: prior mean delta on own first lag; variance of the
// lag-l coefficient of variable j in equation i is (lambda^2/l^2)(s_i^2/s_j^2),
// with s^2 from univariate AR(p) residual variances.
NiwPrior minnesota_prior(const MacroDataset& data, const BvarSpec& spec);

// Closed-form log p(Y | lambda, spec) under the conjugate NIW prior,
// including the Jacobian of the volatility rescaling when a profile is set.
double log_marginal_likelihood(const MacroDataset& data, const BvarSpec& spec);

// Golden-section search for the tightness maximizing the marginal likelihood.
double optimize_hyperparameters(const MacroDataset& data, const BvarSpec& spec,
                                double lambda_lo, double lambda_hi, double tol = 1e-4);

// Marginal-likelihood estimate of (s1, s2, s3, rho); spec.covid must carry
// the onset quarter.
CovidProfile estimate_covid_profile(const MacroDataset& data, const BvarSpec& spec);

BvarPosterior posterior_sample(const MacroDataset& data, const BvarSpec& spec,
                               int n_draws, std::uint64_t master_seed);

// Posterior bundle: <prefix>_meta.txt + <prefix>_draws.csv.
void save_posterior(const BvarPosterior& post, const std::string& prefix);
BvarPosterior load_posterior(const std::string& prefix);

}  // namespace svar
