#include "svar/simulate.hpp"

#include <stdexcept>

#include "svar/rng.hpp"

namespace svar {

Eigen::MatrixXd SvarDgp::companion() const {
    const int nn = n(), pp = p();
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(nn * pp, nn * pp);
    for (int j = 0; j < pp; ++j) F.block(0, j * nn, nn, nn) = lag_matrices[static_cast<std::size_t>(j)];
    if (pp > 1)
        F.block(nn, 0, nn * (pp - 1), nn * (pp - 1)) =
            Eigen::MatrixXd::Identity(nn * (pp - 1), nn * (pp - 1));
    return F;
}

double SvarDgp::spectral_radius() const {
    return companion().eigenvalues().cwiseAbs().maxCoeff();
}

void SvarDgp::validate() const {
    if (lag_matrices.empty()) throw std::invalid_argument("DGP needs at least one lag matrix");
    const int nn = n();
    for (const auto& A : lag_matrices)
        if (A.rows() != nn || A.cols() != nn)
            throw std::invalid_argument("lag matrix dimension mismatch");
    if (impact.rows() != nn || impact.cols() != nn)
        throw std::invalid_argument("impact matrix dimension mismatch");
    if (intercept.size() != nn) throw std::invalid_argument("intercept dimension mismatch");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(impact);
    if (!lu.isInvertible()) throw std::invalid_argument("impact matrix singular");
    if (spectral_radius() >= 1.0)
        throw std::invalid_argument("explosive companion matrix (spectral radius >= 1)");
    if (sample_size < 1 || burn_in < 0) throw std::invalid_argument("bad sample/burn-in sizes");
}

SimulationResult simulate(const SvarDgp& dgp) {
    dgp.validate();
    const int n = dgp.n(), p = dgp.p();
    const int total = dgp.burn_in + dgp.sample_size;

    auto rng = substream(dgp.master_seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(total + p, n);
    Eigen::MatrixXd w(total, n);
    for (int t = 0; t < total; ++t) {
        Eigen::VectorXd wt(n);
        for (int i = 0; i < n; ++i) wt(i) = gauss(rng);
        w.row(t) = wt.transpose();
        Eigen::VectorXd next = dgp.intercept + dgp.impact * wt;
        for (int j = 1; j <= p; ++j)
            next += dgp.lag_matrices[static_cast<std::size_t>(j - 1)] * y.row(t + p - j).transpose();
        y.row(t + p) = next.transpose();
    }

    const int T = dgp.sample_size;
    std::vector<QuarterIndex> dates;
    QuarterIndex q = dgp.start;
    for (int t = 0; t < T; ++t) {
        dates.push_back(q);
        q = q.next();
    }
    std::vector<std::string> names;
    for (int j = 0; j < n; ++j) names.push_back("y" + std::to_string(j + 1));
    Eigen::MatrixXd values = y.bottomRows(T);
    std::vector<std::vector<bool>> present(static_cast<std::size_t>(T),
                                           std::vector<bool>(static_cast<std::size_t>(n), true));
    return {MacroDataset(std::move(dates), std::move(names), std::move(values), std::move(present)),
            w.bottomRows(T)};
}

SvarDgp paper_like_dgp() {
    SvarDgp dgp;
    const int n = 5;
    Eigen::MatrixXd A1(n, n);
    A1 << 0.50, 0.05, 0.00, 0.00, 0.00,
          0.05, 0.45, 0.05, 0.00, 0.00,
          0.00, 0.05, 0.50, 0.00, 0.05,
          0.00, 0.00, 0.00, 0.55, 0.00,
          0.05, 0.00, 0.00, 0.05, 0.40;
    Eigen::MatrixXd A2 = 0.10 * Eigen::MatrixXd::Identity(n, n);

    // impact pattern: columns (gas, AS, expectation, AD, sentiment) over
    // variables (rgas, core, expectations, unemployment, confidence)
    Eigen::MatrixXd L0(n, n);
    L0 <<  1.0, -0.5,  0.0,  0.5,  0.0,
           0.5,  1.0,  0.0,  0.5,  0.0,
           0.5,  0.5,  1.0,  0.5,  0.5,
           0.5,  0.5,  0.0, -1.0,  0.5,
           0.0, -0.5,  0.3,  0.5,  1.0;

    dgp.lag_matrices = {A1, A2};
    dgp.impact = L0;
    dgp.intercept = Eigen::VectorXd::Constant(n, 0.1);
    dgp.sample_size = 300;
    dgp.burn_in = 200;
    dgp.master_seed = 1;
    return dgp;
}

IrfArray oracle_irf(const SvarDgp& dgp, int horizon) {
    dgp.validate();
    const int n = dgp.n(), p = dgp.p();
    const Eigen::MatrixXd F = dgp.companion();
    IrfArray theta(static_cast<std::size_t>(horizon) + 1);
    Eigen::MatrixXd Fh = Eigen::MatrixXd::Identity(n * p, n * p);
    for (int h = 0; h <= horizon; ++h) {
        theta[static_cast<std::size_t>(h)] = Fh.topLeftCorner(n, n) * dgp.impact;
        Fh = F * Fh;
    }
    return theta;
}

}  // namespace svar
