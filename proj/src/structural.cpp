#include "svar/structural.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace svar {

IrfArray irf(const Eigen::MatrixXd& coefs, const Eigen::MatrixXd& impact,
             int n, int p, int horizon) {
    if (impact.rows() != n || impact.cols() != n)
        throw std::invalid_argument("impact matrix has wrong dimensions");
    if (coefs.rows() < n * p || coefs.cols() != n)
        throw std::invalid_argument("coefficient matrix has wrong dimensions");
    IrfArray theta(static_cast<std::size_t>(horizon) + 1);
    theta[0] = impact;
    for (int h = 1; h <= horizon; ++h) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
        for (int j = 1; j <= std::min(h, p); ++j)
            acc += lag_matrix(coefs, n, j) * theta[static_cast<std::size_t>(h - j)];
        theta[static_cast<std::size_t>(h)] = acc;
    }
    return theta;
}

namespace {

// Linear-interpolation quantile on a copy.
double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

IrfResult bands_from(const std::vector<IrfArray>& per_draw, int n, int horizon, double coverage,
                     std::vector<std::string> var_names, std::vector<std::string> shock_names) {
    if (per_draw.empty()) throw std::invalid_argument("need >= 1 draw for bands");
    if (coverage < 0.0 || coverage >= 1.0) throw std::invalid_argument("coverage must be in [0,1)");
    const double qlo = 0.5 - coverage / 2.0;
    const double qhi = 0.5 + coverage / 2.0;
    IrfResult out;
    out.coverage = coverage;
    out.variable_names = std::move(var_names);
    out.shock_names = std::move(shock_names);
    out.median.resize(static_cast<std::size_t>(horizon) + 1);
    out.lower.resize(static_cast<std::size_t>(horizon) + 1);
    out.upper.resize(static_cast<std::size_t>(horizon) + 1);
    std::vector<double> buf(per_draw.size());
    for (int h = 0; h <= horizon; ++h) {
        auto& med = out.median[static_cast<std::size_t>(h)];
        auto& lo = out.lower[static_cast<std::size_t>(h)];
        auto& hi = out.upper[static_cast<std::size_t>(h)];
        med.resize(n, n); lo.resize(n, n); hi.resize(n, n);
        for (int v = 0; v < n; ++v)
            for (int j = 0; j < n; ++j) {
                for (std::size_t d = 0; d < per_draw.size(); ++d)
                    buf[d] = per_draw[d][static_cast<std::size_t>(h)](v, j);
                med(v, j) = quantile(buf, 0.5);
                lo(v, j) = quantile(buf, qlo);
                hi(v, j) = quantile(buf, qhi);
            }
    }
    return out;
}

}  // namespace

IrfResult irf_bands(const StructuralDrawSet& drawset, int horizon, double coverage) {
    if (drawset.draws.empty()) throw std::invalid_argument("empty draw set");
    const int n = static_cast<int>(drawset.names.size());
    std::vector<IrfArray> per_draw;
    per_draw.reserve(drawset.draws.size());
    for (const auto& sd : drawset.draws)
        per_draw.push_back(irf(sd.coefs, sd.impact, n, drawset.lags, horizon));
    std::vector<std::string> shocks = drawset.shock_names;
    if (shocks.size() != static_cast<std::size_t>(n)) {
        shocks.clear();
        for (int j = 0; j < n; ++j) shocks.push_back("shock" + std::to_string(j + 1));
    }
    return bands_from(per_draw, n, horizon, coverage, drawset.names, std::move(shocks));
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> median_draw(const StructuralDrawSet& drawset) {
    if (drawset.draws.empty()) throw std::invalid_argument("empty draw set");
    auto med_of = [&](auto accessor) {
        Eigen::MatrixXd first = accessor(drawset.draws.front());
        Eigen::MatrixXd out(first.rows(), first.cols());
        std::vector<double> buf(drawset.draws.size());
        for (Eigen::Index i = 0; i < first.rows(); ++i)
            for (Eigen::Index j = 0; j < first.cols(); ++j) {
                for (std::size_t d = 0; d < drawset.draws.size(); ++d)
                    buf[d] = accessor(drawset.draws[d])(i, j);
                std::vector<double> copy = buf;
                std::sort(copy.begin(), copy.end());
                const auto m = copy.size();
                out(i, j) = m % 2 == 1 ? copy[m / 2] : 0.5 * (copy[m / 2 - 1] + copy[m / 2]);
            }
        return out;
    };
    return {med_of([](const StructuralDraw& d) -> const Eigen::MatrixXd& { return d.coefs; }),
            med_of([](const StructuralDraw& d) -> const Eigen::MatrixXd& { return d.impact; })};
}

HistoricalDecomposition historical_decomposition(const Eigen::MatrixXd& coefs,
                                                 const Eigen::MatrixXd& impact,
                                                 int p, bool intercept,
                                                 const MacroDataset& data,
                                                 const std::vector<std::string>& shock_names) {
    const int n = static_cast<int>(data.cols());
    const auto T = data.rows();
    if (T <= p) throw std::invalid_argument("data shorter than lag order");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(impact);
    if (!lu.isInvertible()) throw std::runtime_error("singular impact matrix");

    const auto rows = T - p;
    const Eigen::VectorXd c = intercept_of(coefs, n, p, intercept);

    // structural shocks from frozen parameters over the full span
    Eigen::MatrixXd w(rows, n);
    for (Eigen::Index t = 0; t < rows; ++t) {
        Eigen::VectorXd pred = c;
        for (int j = 1; j <= p; ++j)
            pred += lag_matrix(coefs, n, j) * data.values().row(t + p - j).transpose();
        w.row(t) = lu.solve(data.values().row(t + p).transpose() - pred).transpose();
    }

    const IrfArray theta = irf(coefs, impact, n, p, static_cast<int>(rows) - 1);

    HistoricalDecomposition hd;
    hd.dates.assign(data.dates().begin() + p, data.dates().end());
    hd.variable_names = data.names();
    hd.shock_names = shock_names;
    hd.observed = data.values().bottomRows(rows);
    hd.contributions.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(rows, n));
    for (Eigen::Index t = 0; t < rows; ++t)
        for (Eigen::Index s = 0; s <= t; ++s) {
            const auto& th = theta[static_cast<std::size_t>(s)];
            for (int v = 0; v < n; ++v)
                for (int j = 0; j < n; ++j)
                    hd.contributions[static_cast<std::size_t>(v)](t, j) += th(v, j) * w(t - s, j);
        }

    // deterministic part: dynamic forecast from the p initial conditions with
    // zero shocks (the intercept's cumulated effect included)
    Eigen::MatrixXd path(T, n);
    path.topRows(p) = data.values().topRows(p);
    for (Eigen::Index t = p; t < T; ++t) {
        Eigen::VectorXd pred = c;
        for (int j = 1; j <= p; ++j)
            pred += lag_matrix(coefs, n, j) * path.row(t - j).transpose();
        path.row(t) = pred.transpose();
    }
    hd.deterministic = path.bottomRows(rows);
    return hd;
}

IrfResult girf_recursive(const BvarPosterior& posterior, int horizon, double coverage) {
    if (posterior.draws.empty()) throw std::invalid_argument("empty posterior");
    const int n = static_cast<int>(posterior.names.size());
    std::vector<IrfArray> per_draw;
    per_draw.reserve(posterior.draws.size());
    for (const auto& dr : posterior.draws) {
        Eigen::LLT<Eigen::MatrixXd> llt(dr.sigma);
        if (llt.info() != Eigen::Success) throw std::runtime_error("Cholesky failure on a Sigma draw");
        per_draw.push_back(irf(dr.coefs, llt.matrixL(), n, posterior.spec.lags, horizon));
    }
    std::vector<std::string> shocks;
    for (const auto& nm : posterior.names) shocks.push_back("chol_" + nm);
    return bands_from(per_draw, n, horizon, coverage, posterior.names, shocks);
}

void save_irf(const IrfResult& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "variable,shock,horizon,median,lo,hi\n";
    char buf[128];
    const int n = static_cast<int>(r.variable_names.size());
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < n; ++j)
            for (std::size_t h = 0; h < r.median.size(); ++h) {
                std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%.12g,%.12g,%.12g\n",
                              r.variable_names[static_cast<std::size_t>(v)].c_str(),
                              r.shock_names[static_cast<std::size_t>(j)].c_str(), h,
                              r.median[h](v, j), r.lower[h](v, j), r.upper[h](v, j));
                out << buf;
            }
}

void save_hd(const HistoricalDecomposition& hd, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "variable,date,component,contribution\n";
    char buf[128];
    const auto rows = hd.deterministic.rows();
    const int n = static_cast<int>(hd.variable_names.size());
    for (int v = 0; v < n; ++v)
        for (Eigen::Index t = 0; t < rows; ++t) {
            for (int j = 0; j < n; ++j) {
                std::snprintf(buf, sizeof(buf), "%s,%s,%s,%.12g\n",
                              hd.variable_names[static_cast<std::size_t>(v)].c_str(),
                              hd.dates[static_cast<std::size_t>(t)].str().c_str(),
                              hd.shock_names[static_cast<std::size_t>(j)].c_str(),
                              hd.contributions[static_cast<std::size_t>(v)](t, j));
                out << buf;
            }
            std::snprintf(buf, sizeof(buf), "%s,%s,deterministic,%.12g\n",
                          hd.variable_names[static_cast<std::size_t>(v)].c_str(),
                          hd.dates[static_cast<std::size_t>(t)].str().c_str(),
                          hd.deterministic(t, v));
            out << buf;
        }
}

}  // namespace svar
