#include "svar/bvar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "svar/rng.hpp"

namespace svar {

void BvarSpec::validate() const {
    if (lags < 1) throw std::invalid_argument("lag order must be >= 1");
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be > 0");
    if (covid && (covid->rho <= 0.0 || covid->rho >= 1.0))
        throw std::invalid_argument("covid decay rho must be in (0,1)");
    if (covid && (covid->s1 < 1.0 || covid->s2 < 1.0 || covid->s3 < 1.0))
        throw std::invalid_argument("covid scales must be >= 1");
}

Eigen::VectorXd covid_scales(const CovidProfile& profile, const std::vector<QuarterIndex>& dates) {
    if (profile.rho <= 0.0 || profile.rho >= 1.0)
        throw std::invalid_argument("covid decay rho must be in (0,1)");
    Eigen::VectorXd s = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dates.size()));
    for (std::size_t t = 0; t < dates.size(); ++t) {
        const int k = dates[t].minus(profile.onset);
        if (k < 0) continue;
        if (k == 0) s(static_cast<Eigen::Index>(t)) = profile.s1;
        else if (k == 1) s(static_cast<Eigen::Index>(t)) = profile.s2;
        else if (k == 2) s(static_cast<Eigen::Index>(t)) = profile.s3;
        else s(static_cast<Eigen::Index>(t)) = 1.0 + (profile.s3 - 1.0) * std::pow(profile.rho, k - 2);
    }
    return s;
}

Eigen::MatrixXd lag_matrix(const Eigen::MatrixXd& coefs, int n, int j) {
    return coefs.block((j - 1) * n, 0, n, n).transpose();
}

Eigen::VectorXd intercept_of(const Eigen::MatrixXd& coefs, int n, int p, bool has_intercept) {
    if (!has_intercept) return Eigen::VectorXd::Zero(n);
    return coefs.row(n * p).transpose();
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
build_regressors(const MacroDataset& data, const BvarSpec& spec) {
    spec.validate();
    const auto T = data.rows();
    const auto n = data.cols();
    const int p = spec.lags;
    const Eigen::Index k = n * p + (spec.intercept ? 1 : 0);
    if (T <= k) throw std::invalid_argument("insufficient observations: T <= n*p + intercept");
    if (!data.all_present())
        throw std::invalid_argument("missing values inside the estimation window");

    const Eigen::Index rows = T - p;
    Eigen::MatrixXd Y(rows, n), X(rows, k);
    for (Eigen::Index t = 0; t < rows; ++t) {
        Y.row(t) = data.values().row(t + p);
        for (int j = 1; j <= p; ++j)
            X.block(t, (j - 1) * n, 1, n) = data.values().row(t + p - j);
        if (spec.intercept) X(t, n * p) = 1.0;
    }
    return {Y, X};
}

namespace {

// Univariate AR(p) residual variance, used to scale the prior.
Eigen::VectorXd ar_residual_variances(const MacroDataset& data, int p) {
    const auto T = data.rows();
    const auto n = data.cols();
    Eigen::VectorXd out(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index rows = T - p;
        Eigen::MatrixXd X(rows, p + 1);
        Eigen::VectorXd y(rows);
        for (Eigen::Index t = 0; t < rows; ++t) {
            y(t) = data.values()(t + p, j);
            for (int l = 1; l <= p; ++l) X(t, l - 1) = data.values()(t + p - l, j);
            X(t, p) = 1.0;
        }
        Eigen::VectorXd beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
        Eigen::VectorXd resid = y - X * beta;
        const auto dof = std::max<Eigen::Index>(rows - (p + 1), 1);
        out(j) = resid.squaredNorm() / static_cast<double>(dof);
        if (out(j) <= 0.0 || !std::isfinite(out(j)))
            throw std::invalid_argument("degenerate AR residual variance for variable " +
                                        data.names()[static_cast<std::size_t>(j)]);
    }
    return out;
}

double log_mv_gamma(int n, double a) {
    double v = 0.25 * n * (n - 1) * std::log(std::numbers::pi);
    for (int i = 1; i <= n; ++i) v += std::lgamma(a + 0.5 * (1 - i));
    return v;
}

struct PosteriorMoments {
    Eigen::MatrixXd coef_mean;      // k x n
    Eigen::MatrixXd omega_bar;      // k x k
    Eigen::MatrixXd scale;          // n x n
    double dof = 0.0;
    Eigen::Index t_eff = 0;
};

// Conjugate NIW update on (possibly volatility-rescaled) data.
PosteriorMoments niw_update(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& X,
                            const NiwPrior& prior) {
    const auto k = X.cols();
    Eigen::MatrixXd omega_inv = prior.omega_diag.cwiseInverse().asDiagonal();
    Eigen::MatrixXd K = omega_inv + X.transpose() * X;
    Eigen::LDLT<Eigen::MatrixXd> Kldlt(K);
    if (Kldlt.info() != Eigen::Success)
        throw std::runtime_error("degenerate X'X + Omega^-1");
    Eigen::MatrixXd rhs = omega_inv * prior.coef_mean + X.transpose() * Y;
    PosteriorMoments post;
    post.coef_mean = Kldlt.solve(rhs);
    post.omega_bar = Kldlt.solve(Eigen::MatrixXd::Identity(k, k));
    // algebraically S0 + Y'Y + B0' Om^-1 B0 - Bbar' K Bbar, written as a sum
    // of PSD terms so tight priors cannot cancel catastrophically
    const Eigen::MatrixXd resid = Y - X * post.coef_mean;
    const Eigen::MatrixXd shift = post.coef_mean - prior.coef_mean;
    post.scale = prior.scale + resid.transpose() * resid +
                 shift.transpose() * omega_inv * shift;
    post.scale = 0.5 * (post.scale + post.scale.transpose());
    post.dof = prior.dof + static_cast<double>(Y.rows());
    post.t_eff = Y.rows();
    return post;
}

double log_det_pd(const Eigen::MatrixXd& m, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error(std::string(what) + " is not positive definite");
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Eigen::VectorXd scales_for_sample(const MacroDataset& data, const BvarSpec& spec) {
    std::vector<QuarterIndex> ydates(data.dates().begin() + spec.lags, data.dates().end());
    if (spec.covid) return covid_scales(*spec.covid, ydates);
    return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(ydates.size()));
}

}  // namespace

NiwPrior minnesota_prior(const MacroDataset& data, const BvarSpec& spec) {
    spec.validate();
    const auto n = data.cols();
    const int p = spec.lags;
    const Eigen::Index k = n * p + (spec.intercept ? 1 : 0);
    const Eigen::VectorXd sig2 = ar_residual_variances(data, p);

    NiwPrior prior;
    prior.coef_mean = Eigen::MatrixXd::Zero(k, n);
    for (Eigen::Index i = 0; i < n; ++i) prior.coef_mean(i, i) = spec.delta;

    prior.omega_diag.resize(k);
    for (int l = 1; l <= p; ++l)
        for (Eigen::Index j = 0; j < n; ++j)
            prior.omega_diag((l - 1) * n + j) =
                spec.lambda * spec.lambda / (static_cast<double>(l) * l * sig2(j));
    if (spec.intercept) prior.omega_diag(n * p) = spec.intercept_variance;

    prior.scale = sig2.asDiagonal();  // dof = n + 2 puts the prior mean of Sigma at diag(sig2)
    prior.dof = static_cast<double>(n) + 2.0;
    return prior;
}

double log_marginal_likelihood(const MacroDataset& data, const BvarSpec& spec) {
    const auto n = data.cols();
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b)
            if (data.values().col(a) == data.values().col(b))
                throw std::invalid_argument("duplicate variable columns: " +
                                            data.names()[static_cast<std::size_t>(a)] + " and " +
                                            data.names()[static_cast<std::size_t>(b)]);

    auto [Y, X] = build_regressors(data, spec);
    const Eigen::VectorXd s = scales_for_sample(data, spec);
    for (Eigen::Index t = 0; t < Y.rows(); ++t) {
        Y.row(t) /= s(t);
        X.row(t) /= s(t);
    }
    const NiwPrior prior = minnesota_prior(data, spec);
    const PosteriorMoments post = niw_update(Y, X, prior);

    const double T = static_cast<double>(post.t_eff);
    const double nn = static_cast<double>(n);
    double lml = -0.5 * T * nn * std::log(std::numbers::pi);
    lml += log_mv_gamma(static_cast<int>(n), 0.5 * post.dof);
    lml -= log_mv_gamma(static_cast<int>(n), 0.5 * prior.dof);
    lml += 0.5 * prior.dof * log_det_pd(prior.scale, "prior scale");
    lml -= 0.5 * post.dof * log_det_pd(post.scale, "posterior scale");
    lml += 0.5 * nn * log_det_pd(post.omega_bar, "posterior Omega");
    lml -= 0.5 * nn * prior.omega_diag.array().log().sum();
    lml -= nn * s.array().log().sum();  // Jacobian of the row rescaling
    return lml;
}

double optimize_hyperparameters(const MacroDataset& data, const BvarSpec& spec,
                                double lambda_lo, double lambda_hi, double tol) {
    if (!(lambda_lo > 0.0) || !(lambda_hi > lambda_lo) || !std::isfinite(lambda_hi))
        throw std::invalid_argument("lambda bounds must be positive, finite, ordered");
    auto objective = [&](double lam) {
        BvarSpec s = spec;
        s.lambda = lam;
        return log_marginal_likelihood(data, s);
    };

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lambda_lo, b = lambda_hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = objective(c), fd = objective(d);
    if (!std::isfinite(fc) && !std::isfinite(fd))
        throw std::runtime_error("marginal likelihood non-finite across the interval");
    while (b - a > tol) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }
    double best = 0.5 * (a + b);
    double fbest = objective(best);
    // guard against non-unimodal objectives: never return worse than an endpoint
    const double flo = objective(lambda_lo), fhi = objective(lambda_hi);
    if (flo > fbest) { best = lambda_lo; fbest = flo; }
    if (fhi > fbest) { best = lambda_hi; }
    return best;
}

namespace {

// Derivative-free Nelder-Mead, adequate for the 4-parameter profile search.
Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& start, double step, int max_iter) {
    const auto n = start.size();
    std::vector<std::pair<double, Eigen::VectorXd>> simplex;
    simplex.emplace_back(f(start), start);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd x = start;
        x(i) += step;
        simplex.emplace_back(f(x), x);
    }
    auto by_value = [](const auto& a, const auto& b) { return a.first < b.first; };
    for (int it = 0; it < max_iter; ++it) {
        std::sort(simplex.begin(), simplex.end(), by_value);
        if (std::abs(simplex.front().first - simplex.back().first) < 1e-10) break;
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) centroid += simplex[static_cast<std::size_t>(i)].second;
        centroid /= static_cast<double>(n);
        auto& worst = simplex.back();
        Eigen::VectorXd refl = centroid + (centroid - worst.second);
        double frefl = f(refl);
        if (frefl < simplex.front().first) {
            Eigen::VectorXd exp_pt = centroid + 2.0 * (centroid - worst.second);
            double fexp = f(exp_pt);
            worst = fexp < frefl ? std::make_pair(fexp, exp_pt) : std::make_pair(frefl, refl);
        } else if (frefl < simplex[simplex.size() - 2].first) {
            worst = {frefl, refl};
        } else {
            Eigen::VectorXd contr = centroid + 0.5 * (worst.second - centroid);
            double fcontr = f(contr);
            if (fcontr < worst.first) {
                worst = {fcontr, contr};
            } else {
                for (std::size_t i = 1; i < simplex.size(); ++i) {
                    simplex[i].second = simplex[0].second + 0.5 * (simplex[i].second - simplex[0].second);
                    simplex[i].first = f(simplex[i].second);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), by_value);
    return simplex.front().second;
}

}  // namespace

CovidProfile estimate_covid_profile(const MacroDataset& data, const BvarSpec& spec) {
    QuarterIndex onset = spec.covid ? spec.covid->onset : QuarterIndex{2020, 2};
    if (onset < data.dates().front() || data.dates().back() < onset)
        throw std::invalid_argument("covid onset outside the sample");

    // s = 1 + exp(theta) keeps scales above 1; rho mapped through a logistic.
    auto profile_of = [&](const Eigen::VectorXd& th) {
        CovidProfile pr;
        pr.onset = onset;
        pr.s1 = 1.0 + std::exp(th(0));
        pr.s2 = 1.0 + std::exp(th(1));
        pr.s3 = 1.0 + std::exp(th(2));
        pr.rho = 1.0 / (1.0 + std::exp(-th(3)));
        return pr;
    };
    auto objective = [&](const Eigen::VectorXd& th) {
        BvarSpec s = spec;
        s.covid = profile_of(th);
        double lml = log_marginal_likelihood(data, s);
        if (!std::isfinite(lml)) return 1e100;
        return -lml;
    };
    Eigen::VectorXd start(4);
    start << 0.0, 0.0, 0.0, 0.0;  // s = 2, rho = 0.5
    Eigen::VectorXd best = nelder_mead(objective, start, 1.0, 400);
    if (objective(best) >= 1e100) throw std::runtime_error("covid profile optimizer failed");
    return profile_of(best);
}

BvarPosterior posterior_sample(const MacroDataset& data, const BvarSpec& spec,
                               int n_draws, std::uint64_t master_seed) {
    spec.validate();
    if (n_draws < 0) throw std::invalid_argument("n_draws must be >= 0");
    auto [Y, X] = build_regressors(data, spec);
    const Eigen::VectorXd s = scales_for_sample(data, spec);
    for (Eigen::Index t = 0; t < Y.rows(); ++t) {
        Y.row(t) /= s(t);
        X.row(t) /= s(t);
    }
    const NiwPrior prior = minnesota_prior(data, spec);
    const PosteriorMoments post = niw_update(Y, X, prior);

    const auto n = data.cols();
    const auto k = X.cols();
    Eigen::LLT<Eigen::MatrixXd> llt_scale(post.scale);
    Eigen::LLT<Eigen::MatrixXd> llt_omega(post.omega_bar);
    if (llt_scale.info() != Eigen::Success || llt_omega.info() != Eigen::Success)
        throw std::runtime_error("posterior scale not positive definite");
    const Eigen::MatrixXd Ls = llt_scale.matrixL();
    const Eigen::MatrixXd Lw = llt_omega.matrixL();

    BvarPosterior result;
    result.spec = spec;
    result.names = data.names();
    result.dates = data.dates();
    result.master_seed = master_seed;
    result.lambda_used = spec.lambda;
    result.draws.reserve(static_cast<std::size_t>(n_draws));

    for (int d = 0; d < n_draws; ++d) {
        auto rng = substream(master_seed, static_cast<std::uint64_t>(d));
        std::normal_distribution<double> gauss(0.0, 1.0);

        // Sigma ~ IW(S, nu) via Bartlett: Sigma = (Ls A^-T)(Ls A^-T)'.
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            std::chi_squared_distribution<double> chi2(post.dof - static_cast<double>(i));
            A(i, i) = std::sqrt(chi2(rng));
            for (Eigen::Index j = 0; j < i; ++j) A(i, j) = gauss(rng);
        }
        Eigen::MatrixXd N = A.triangularView<Eigen::Lower>()
                                .transpose()
                                .solve<Eigen::OnTheRight>(Ls);
        BvarDraw draw;
        draw.sigma = N * N.transpose();
        draw.sigma = 0.5 * (draw.sigma + draw.sigma.transpose());

        Eigen::MatrixXd Z(k, n);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < n; ++j) Z(i, j) = gauss(rng);
        Eigen::LLT<Eigen::MatrixXd> llt_sig(draw.sigma);
        if (llt_sig.info() != Eigen::Success)
            throw std::runtime_error("sampled Sigma not positive definite");
        draw.coefs = post.coef_mean + Lw * Z * Eigen::MatrixXd(llt_sig.matrixL()).transpose();
        result.draws.push_back(std::move(draw));
    }
    return result;
}

void save_posterior(const BvarPosterior& post, const std::string& prefix) {
    {
        std::ofstream meta(prefix + "_meta.txt");
        if (!meta) throw std::runtime_error("cannot write " + prefix + "_meta.txt");
        const auto n = static_cast<Eigen::Index>(post.names.size());
        meta << "n=" << n << "\n";
        meta << "lags=" << post.spec.lags << "\n";
        meta << "intercept=" << (post.spec.intercept ? 1 : 0) << "\n";
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%.17g", post.spec.delta);
        meta << "delta=" << buf << "\n";
        std::snprintf(buf, sizeof(buf), "%.17g", post.lambda_used);
        meta << "lambda=" << buf << "\n";
        meta << "seed=" << post.master_seed << "\n";
        meta << "draws=" << post.draws.size() << "\n";
        meta << "names=";
        for (std::size_t i = 0; i < post.names.size(); ++i)
            meta << (i ? "," : "") << post.names[i];
        meta << "\n";
        meta << "sample=" << post.dates.front().str() << ":" << post.dates.back().str() << "\n";
        if (post.spec.covid) {
            const auto& c = *post.spec.covid;
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g", c.s1, c.s2, c.s3, c.rho);
            meta << "covid=" << c.onset.str() << "," << buf << "\n";
        }
    }
    std::ofstream out(prefix + "_draws.csv");
    if (!out) throw std::runtime_error("cannot write " + prefix + "_draws.csv");
    out << "draw,values\n";
    char buf[40];
    for (std::size_t d = 0; d < post.draws.size(); ++d) {
        out << d;
        const auto& dr = post.draws[d];
        auto emit = [&](const Eigen::MatrixXd& m) {
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i) {
                    std::snprintf(buf, sizeof(buf), ",%.17g", m(i, j));
                    out << buf;
                }
        };
        emit(dr.coefs);
        emit(dr.sigma);
        out << "\n";
    }
}

BvarPosterior load_posterior(const std::string& prefix) {
    std::ifstream meta(prefix + "_meta.txt");
    if (!meta) throw std::runtime_error("cannot open " + prefix + "_meta.txt");
    BvarPosterior post;
    Eigen::Index n = 0;
    std::size_t n_draws = 0;
    std::string line;
    while (std::getline(meta, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "n") n = std::stol(val);
        else if (key == "lags") post.spec.lags = std::stoi(val);
        else if (key == "intercept") post.spec.intercept = val == "1";
        else if (key == "delta") post.spec.delta = std::stod(val);
        else if (key == "lambda") { post.spec.lambda = std::stod(val); post.lambda_used = post.spec.lambda; }
        else if (key == "seed") post.master_seed = std::stoull(val);
        else if (key == "draws") n_draws = std::stoul(val);
        else if (key == "names") {
            std::stringstream ss(val);
            std::string nm;
            while (std::getline(ss, nm, ',')) post.names.push_back(nm);
        } else if (key == "sample") {
            auto colon = val.find(':');
            auto from = QuarterIndex::parse(val.substr(0, colon));
            auto to = QuarterIndex::parse(val.substr(colon + 1));
            for (auto q = from; !(to < q); q = q.next()) post.dates.push_back(q);
        } else if (key == "covid") {
            std::stringstream ss(val);
            std::string part;
            CovidProfile c;
            std::getline(ss, part, ',');
            c.onset = QuarterIndex::parse(part);
            std::getline(ss, part, ','); c.s1 = std::stod(part);
            std::getline(ss, part, ','); c.s2 = std::stod(part);
            std::getline(ss, part, ','); c.s3 = std::stod(part);
            std::getline(ss, part, ','); c.rho = std::stod(part);
            post.spec.covid = c;
        }
    }
    if (n == 0) throw std::runtime_error("posterior meta missing n");
    const Eigen::Index k = n * post.spec.lags + (post.spec.intercept ? 1 : 0);

    std::ifstream in(prefix + "_draws.csv");
    if (!in) throw std::runtime_error("cannot open " + prefix + "_draws.csv");
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');  // draw index
        BvarDraw dr;
        dr.coefs.resize(k, n);
        dr.sigma.resize(n, n);
        auto read = [&](Eigen::MatrixXd& m) {
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i) {
                    if (!std::getline(ss, cell, ','))
                        throw std::runtime_error("truncated posterior draw row");
                    m(i, j) = std::stod(cell);
                }
        };
        read(dr.coefs);
        read(dr.sigma);
        post.draws.push_back(std::move(dr));
    }
    if (post.draws.size() != n_draws)
        throw std::runtime_error("posterior draw count mismatch with metadata");
    return post;
}

}  // namespace svar
