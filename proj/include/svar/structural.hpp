#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "svar/identification.hpp"

namespace svar {

// responses[h](variable, shock); horizon 0 is the impact matrix.
using IrfArray = std::vector<Eigen::MatrixXd>;

struct IrfResult {
    IrfArray median;
    IrfArray lower;
    IrfArray upper;
    double coverage = 0.68;
    std::vector<std::string> variable_names;
    std::vector<std::string> shock_names;
};

// Theta_0 = L; Theta_h = sum_{j=1..min(h,p)} A_j Theta_{h-j}.
// Units: one-standard-deviation structural shock.
IrfArray irf(const Eigen::MatrixXd& coefs, const Eigen::MatrixXd& impact,
             int n, int p, int horizon);

// Pointwise quantile bands across accepted draws.
IrfResult irf_bands(const StructuralDrawSet& drawset, int horizon, double coverage = 0.68);

struct HistoricalDecomposition {
    std::vector<QuarterIndex> dates;               // t0..T-1 (after p initial conditions)
    std::vector<std::string> variable_names;
    std::vector<std::string> shock_names;
    // contributions[v](t, j) = cumulated effect of shock j on variable v;
    // last column slot is held separately as the deterministic part.
    std::vector<Eigen::MatrixXd> contributions;    // per variable: T_eff x n
    Eigen::MatrixXd deterministic;                 // T_eff x n_vars
    Eigen::MatrixXd observed;                      // T_eff x n_vars
};

// Shock contributions plus a deterministic component with parameters frozen
// at (coefs, impact); additivity holds on the entire span, including rows
// past the fit window.
HistoricalDecomposition historical_decomposition(const Eigen::MatrixXd& coefs,
                                                 const Eigen::MatrixXd& impact,
                                                 int p, bool intercept,
                                                 const MacroDataset& data,
                                                 const std::vector<std::string>& shock_names);

// Convenience: elementwise-median (coefs, impact) across accepted draws.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> median_draw(const StructuralDrawSet& drawset);

// Cholesky-identified responses to a one-standard-deviation innovation in
// the first variable, with pointwise bands across posterior draws.
IrfResult girf_recursive(const BvarPosterior& posterior, int horizon, double coverage = 0.68);

void save_irf(const IrfResult& r, const std::string& path);
void save_hd(const HistoricalDecomposition& hd, const std::string& path);

}  // namespace svar
