#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "svar/timeseries.hpp"

namespace svar {

struct LpSpec {
    int horizons = 12;
    int y_lags = 2;
    int shock_lags = 2;
    std::optional<int> nw_bandwidth;   // empty: h + 1 at horizon h
    bool use_hac = true;
    double dummy_decay = 0.5;          // rho_D
    bool tight_labor_interaction = true;

    void validate() const;
};

struct LpHorizon {
    double beta_high = 0.0, se_high = 0.0;
    double beta_low = 0.0, se_low = 0.0;
    Eigen::Index t_eff = 0;
    double r_squared = 0.0;
};

struct LpResult {
    std::vector<LpHorizon> horizons;  // 0..H
};

// 0 before 2020Q2; 1 at 2020Q2; rho^k at 2020Q2 + k.
Eigen::VectorXd covid_dummy(const std::vector<QuarterIndex>& dates, double rho);

// HAC covariance of OLS coefficients with Bartlett kernel weights
// 1 - l/(bandwidth+1). Bandwidth 0 degenerates to the kernel-free
// heteroskedasticity-robust covariance.
Eigen::MatrixXd newey_west(const Eigen::MatrixXd& regressors, const Eigen::VectorXd& residuals,
                           int bandwidth);

// Per-horizon regressions of x_{t+h} on shock and controls interacted with
// Z_{t-1} and (1 - Z_{t-1}), plus the decaying pandemic dummy. S enters as a
// shock interaction control inside both state blocks.
LpResult lp_state_dependent(const Eigen::VectorXd& x, const Eigen::VectorXd& shock,
                            const Eigen::VectorXd& z, const Eigen::VectorXd& s,
                            const std::vector<QuarterIndex>& dates, const LpSpec& spec);

void save_lp(const LpResult& r, const std::string& path);

}  // namespace svar
