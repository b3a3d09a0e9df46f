#include "svar/localproj.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace svar {

void LpSpec::validate() const {
    if (horizons < 0) throw std::invalid_argument("horizons must be >= 0");
    if (y_lags < 1) throw std::invalid_argument("lag augmentation needs >= 1 lag of the dependent variable");
    if (shock_lags < 0) throw std::invalid_argument("shock lags must be >= 0");
    if (dummy_decay <= 0.0 || dummy_decay >= 1.0)
        throw std::invalid_argument("dummy decay must be in (0,1)");
    if (nw_bandwidth && *nw_bandwidth < 0) throw std::invalid_argument("bandwidth must be >= 0");
}

Eigen::VectorXd covid_dummy(const std::vector<QuarterIndex>& dates, double rho) {
    if (rho <= 0.0 || rho >= 1.0) throw std::invalid_argument("dummy decay must be in (0,1)");
    const QuarterIndex start{2020, 2};
    Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dates.size()));
    for (std::size_t t = 0; t < dates.size(); ++t) {
        const int k = dates[t].minus(start);
        if (k >= 0) d(static_cast<Eigen::Index>(t)) = std::pow(rho, k);
    }
    return d;
}

Eigen::MatrixXd newey_west(const Eigen::MatrixXd& X, const Eigen::VectorXd& u, int bandwidth) {
    const auto T = X.rows();
    const auto k = X.cols();
    if (T <= k) throw std::invalid_argument("newey_west: T must exceed k");
    if (u.size() != T) throw std::invalid_argument("newey_west: residual length mismatch");
    if (bandwidth < 0) throw std::invalid_argument("newey_west: bandwidth must be >= 0");

    Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
    if (!lu.isInvertible()) throw std::runtime_error("newey_west: singular X'X");
    Eigen::MatrixXd xtx_inv = lu.inverse();

    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index t = 0; t < T; ++t)
        S += u(t) * u(t) * X.row(t).transpose() * X.row(t);
    for (int l = 1; l <= bandwidth; ++l) {
        const double w = 1.0 - static_cast<double>(l) / (bandwidth + 1.0);
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index t = l; t < T; ++t)
            G += u(t) * u(t - l) * X.row(t).transpose() * X.row(t - l);
        S += w * (G + G.transpose());
    }
    Eigen::MatrixXd V = xtx_inv * S * xtx_inv;
    return 0.5 * (V + V.transpose());
}

LpResult lp_state_dependent(const Eigen::VectorXd& x, const Eigen::VectorXd& shock,
                            const Eigen::VectorXd& z, const Eigen::VectorXd& s,
                            const std::vector<QuarterIndex>& dates, const LpSpec& spec) {
    spec.validate();
    const auto T = x.size();
    if (shock.size() != T || z.size() != T || s.size() != T ||
        static_cast<Eigen::Index>(dates.size()) != T)
        throw std::invalid_argument("lp: series lengths misaligned");
    for (Eigen::Index t = 0; t < T; ++t)
        if (!std::isfinite(x(t)) || !std::isfinite(shock(t)) || !std::isfinite(z(t)) || !std::isfinite(s(t)))
            throw std::invalid_argument("lp: missing value in the regression window");

    const Eigen::VectorXd dummy = covid_dummy(dates, spec.dummy_decay);
    const int t0 = std::max({1, spec.y_lags, spec.shock_lags});

    // per-state block: [1, shock_t, shock lags, x lags, shock_t * S_t]
    const int block = 2 + spec.shock_lags + spec.y_lags + (spec.tight_labor_interaction ? 1 : 0);
    const int shock_pos = 1;  // within a block

    LpResult result;
    for (int h = 0; h <= spec.horizons; ++h) {
        const Eigen::Index rows = T - h - t0;
        if (rows <= 2 * block + 1)
            throw std::invalid_argument("lp: window too short at horizon " + std::to_string(h));

        Eigen::MatrixXd X(rows, 2 * block + 1);
        Eigen::VectorXd y(rows);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const Eigen::Index t = t0 + i;
            y(i) = x(t + h);
            Eigen::VectorXd base(block);
            int c = 0;
            base(c++) = 1.0;
            base(c++) = shock(t);
            for (int l = 1; l <= spec.shock_lags; ++l) base(c++) = shock(t - l);
            for (int l = 1; l <= spec.y_lags; ++l) base(c++) = x(t - l);
            if (spec.tight_labor_interaction) base(c++) = shock(t) * s(t);
            const double zh = z(t - 1);
            X.row(i).segment(0, block) = (base * zh).transpose();
            X.row(i).segment(block, block) = (base * (1.0 - zh)).transpose();
            X(i, 2 * block) = dummy(t);
        }

        // exactly-zero columns (degenerate states, pre-2020 samples) are
        // dropped rather than left to break the factorization
        std::vector<Eigen::Index> keep;
        for (Eigen::Index c = 0; c < X.cols(); ++c)
            if (X.col(c).cwiseAbs().maxCoeff() > 0.0) keep.push_back(c);
        Eigen::MatrixXd Xk(rows, static_cast<Eigen::Index>(keep.size()));
        for (std::size_t c = 0; c < keep.size(); ++c) Xk.col(static_cast<Eigen::Index>(c)) = X.col(keep[c]);

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xk);
        qr.setThreshold(1e-10);
        if (qr.rank() < Xk.cols())
            throw std::runtime_error("lp: collinear design at horizon " + std::to_string(h) +
                                     " (state blocks not separately identified)");
        Eigen::VectorXd beta = qr.solve(y);
        Eigen::VectorXd resid = y - Xk * beta;

        const int bw = spec.nw_bandwidth ? *spec.nw_bandwidth : h + 1;
        Eigen::MatrixXd V = newey_west(Xk, resid, spec.use_hac ? bw : 0);

        auto coef_at = [&](Eigen::Index orig) -> std::pair<double, double> {
            for (std::size_t c = 0; c < keep.size(); ++c)
                if (keep[c] == orig) {
                    const auto ci = static_cast<Eigen::Index>(c);
                    return {beta(ci), std::sqrt(std::max(V(ci, ci), 0.0))};
                }
            return {0.0, 0.0};  // state block dropped entirely
        };

        LpHorizon lh;
        std::tie(lh.beta_high, lh.se_high) = coef_at(shock_pos);
        std::tie(lh.beta_low, lh.se_low) = coef_at(block + shock_pos);
        lh.t_eff = rows;
        const double sst = (y.array() - y.mean()).square().sum();
        lh.r_squared = sst > 0.0 ? 1.0 - resid.squaredNorm() / sst : 0.0;
        result.horizons.push_back(lh);
    }
    return result;
}

void save_lp(const LpResult& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "horizon,beta_high,se_high,beta_low,se_low,t_eff,r2\n";
    char buf[160];
    for (std::size_t h = 0; h < r.horizons.size(); ++h) {
        const auto& lh = r.horizons[h];
        std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g,%.12g,%.12g,%ld,%.12g\n", h,
                      lh.beta_high, lh.se_high, lh.beta_low, lh.se_low,
                      static_cast<long>(lh.t_eff), lh.r_squared);
        out << buf;
    }
}

}  // namespace svar
