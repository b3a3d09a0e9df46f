#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "svar/structural.hpp"

namespace svar {

// Ground-truth SVAR data generator: y_t = c + sum A_j y_{t-j} + L0 w_t,
// w_t i.i.d. standard normal.
struct SvarDgp {
    std::vector<Eigen::MatrixXd> lag_matrices;  // A_1..A_p, each n x n
    Eigen::MatrixXd impact;                     // L0, nonsingular
    Eigen::VectorXd intercept;
    int sample_size = 300;
    int burn_in = 200;
    std::uint64_t master_seed = 1;
    QuarterIndex start{1999, 4};

    int n() const { return static_cast<int>(impact.rows()); }
    int p() const { return static_cast<int>(lag_matrices.size()); }
    Eigen::MatrixXd companion() const;
    double spectral_radius() const;
    void validate() const;
};

struct SimulationResult {
    MacroDataset data;
    Eigen::MatrixXd shocks;  // T x n, aligned with data rows
};

SimulationResult simulate(const SvarDgp& dgp);

// 5-variable, 2-lag DGP whose impact matrix satisfies every sign and zero
// constraint of paper_restrictions() with wide margins.
SvarDgp paper_like_dgp();

// Theta_h via companion-matrix powers times L0; the exact IRF reference.
IrfArray oracle_irf(const SvarDgp& dgp, int horizon);

}  // namespace svar
