#include "svar/identification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "svar/rng.hpp"

namespace svar {

RestrictionSet::RestrictionSet(int n, std::vector<std::string> shock_names)
    : n_(n), shock_names_(std::move(shock_names)),
      grid_(static_cast<std::size_t>(n) * n, Sign::Unrestricted) {
    if (n < 1) throw std::invalid_argument("system size must be >= 1");
    if (shock_names_.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("need one shock name per column");
}

void RestrictionSet::set(int variable, int shock, Sign s) {
    if (variable < 0 || variable >= n_ || shock < 0 || shock >= n_)
        throw std::out_of_range("restriction index out of range");
    Sign& cell = grid_[idx(variable, shock)];
    if (cell != Sign::Unrestricted && cell != s)
        throw std::invalid_argument("contradictory restriction on (variable " +
                                    std::to_string(variable) + ", shock " +
                                    std::to_string(shock) + ")");
    cell = s;
}

int RestrictionSet::zero_count(int shock) const {
    int c = 0;
    for (int v = 0; v < n_; ++v)
        if (get(v, shock) == Sign::Zero) ++c;
    return c;
}

std::vector<int> RestrictionSet::processing_order() const {
    std::vector<int> order(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) order[static_cast<std::size_t>(j)] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return zero_count(a) > zero_count(b); });
    return order;
}

void RestrictionSet::validate() const {
    const auto order = processing_order();
    for (int j = 0; j < n_; ++j) {
        // j-th processed shock has j prior orthogonality constraints
        if (zero_count(order[static_cast<std::size_t>(j)]) > n_ - 1 - j)
            throw std::invalid_argument("infeasible zero-restriction count on shock '" +
                                        shock_names_[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] + "'");
    }
}

bool RestrictionSet::satisfied_by(const Eigen::MatrixXd& impact, double zero_tol) const {
    if (impact.rows() != n_ || impact.cols() != n_) return false;
    for (int v = 0; v < n_; ++v)
        for (int j = 0; j < n_; ++j) {
            const double x = impact(v, j);
            switch (get(v, j)) {
                case Sign::Positive: if (!(x > 0.0)) return false; break;
                case Sign::Negative: if (!(x < 0.0)) return false; break;
                case Sign::Zero: if (std::abs(x) > zero_tol) return false; break;
                case Sign::Unrestricted: break;
            }
        }
    return true;
}

RestrictionSet paper_restrictions() {
    RestrictionSet r(5, {"gas", "as", "expectation", "ad", "sentiment"});
    auto P = Sign::Positive, M = Sign::Negative, Z = Sign::Zero, U = Sign::Unrestricted;
    const Sign grid[5][5] = {
        // gas  AS  exp  AD  sentiment      variable
        {P, M, Z, P, Z},  // real gas price
        {P, P, Z, P, Z},  // core inflation
        {P, P, P, P, P},  // inflation expectations
        {P, P, Z, M, P},  // unemployment
        {Z, M, U, P, P},  // industrial confidence
    };
    for (int v = 0; v < 5; ++v)
        for (int j = 0; j < 5; ++j) r.set(v, j, grid[v][j]);
    return r;
}

namespace {

char sign_char(Sign s) {
    switch (s) {
        case Sign::Positive: return '+';
        case Sign::Negative: return '-';
        case Sign::Zero: return '0';
        case Sign::Unrestricted: return '*';
    }
    return '*';
}

Sign sign_of(char c) {
    switch (c) {
        case '+': return Sign::Positive;
        case '-': return Sign::Negative;
        case '0': return Sign::Zero;
        case '*': return Sign::Unrestricted;
        default: throw std::runtime_error(std::string("unknown restriction symbol '") + c + "'");
    }
}

}  // namespace

RestrictionSet load_restrictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open restrictions file: " + path);
    std::string line;
    std::vector<std::string> names;
    std::vector<std::vector<char>> rows;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> toks;
        while (ss >> tok) toks.push_back(tok);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (names.empty()) {
            names = toks;
        } else {
            std::vector<char> row;
            for (const auto& t : toks) {
                if (t.size() != 1) throw std::runtime_error("bad restriction token '" + t + "'");
                row.push_back(t[0]);
            }
            rows.push_back(row);
        }
    }
    const int n = static_cast<int>(names.size());
    if (static_cast<int>(rows.size()) != n)
        throw std::runtime_error("restrictions grid must be square (one row per variable)");
    RestrictionSet r(n, names);
    for (int v = 0; v < n; ++v) {
        if (static_cast<int>(rows[static_cast<std::size_t>(v)].size()) != n)
            throw std::runtime_error("restrictions row has wrong width");
        for (int j = 0; j < n; ++j) r.set(v, j, sign_of(rows[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)]));
    }
    return r;
}

void save_restrictions(const RestrictionSet& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write restrictions file: " + path);
    for (int j = 0; j < r.size(); ++j) out << (j ? " " : "") << r.shock_names()[static_cast<std::size_t>(j)];
    out << "\n";
    for (int v = 0; v < r.size(); ++v) {
        for (int j = 0; j < r.size(); ++j) out << (j ? " " : "") << sign_char(r.get(v, j));
        out << "\n";
    }
}

std::optional<Eigen::MatrixXd> draw_rotation(const Eigen::MatrixXd& sigma,
                                             const RestrictionSet& restrictions,
                                             std::mt19937_64& rng) {
    const int n = restrictions.size();
    if (sigma.rows() != n || sigma.cols() != n)
        throw std::invalid_argument("sigma has wrong dimensions");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("sigma not positive definite");
    const Eigen::MatrixXd P = llt.matrixL();

    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto order = restrictions.processing_order();
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);

    for (std::size_t step = 0; step < order.size(); ++step) {
        const int j = order[step];
        // stack: zero-restriction rows of the impact matrix plus the
        // already-drawn orthonormal columns
        std::vector<Eigen::RowVectorXd> stack;
        for (int v = 0; v < n; ++v)
            if (restrictions.get(v, j) == Sign::Zero) stack.push_back(P.row(v));
        for (std::size_t prev = 0; prev < step; ++prev)
            stack.push_back(Q.col(order[prev]).transpose());
        if (static_cast<int>(stack.size()) >= n)
            throw std::invalid_argument("null space empty: too many restrictions on shock column");

        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = gauss(rng);

        if (!stack.empty()) {
            Eigen::MatrixXd M(static_cast<Eigen::Index>(stack.size()), n);
            for (std::size_t i = 0; i < stack.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = stack[i];
            // orthonormal basis of the row space, then project x onto its complement
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(M.transpose());
            Eigen::MatrixXd basis = qr.householderQ() *
                Eigen::MatrixXd::Identity(n, static_cast<Eigen::Index>(stack.size()));
            x -= basis * (basis.transpose() * x);
        }
        const double norm = x.norm();
        if (norm < 1e-12) return std::nullopt;  // pathological draw, treat as rejection
        x /= norm;

        // one sign-flip attempt per column
        auto column_ok = [&](const Eigen::VectorXd& q) {
            for (int v = 0; v < n; ++v) {
                const double val = P.row(v).dot(q);
                if (restrictions.get(v, j) == Sign::Positive && !(val > 0.0)) return false;
                if (restrictions.get(v, j) == Sign::Negative && !(val < 0.0)) return false;
            }
            return true;
        };
        if (!column_ok(x)) {
            x = -x;
            if (!column_ok(x)) return std::nullopt;
        }
        Q.col(j) = x;
    }
    return Q;
}

StructuralDrawSet identify(const BvarPosterior& posterior, const RestrictionSet& restrictions,
                           std::size_t target_accepted, std::size_t max_tries_per_draw,
                           std::uint64_t master_seed) {
    restrictions.validate();

    StructuralDrawSet out;
    out.names = posterior.names;
    out.shock_names = restrictions.shock_names();
    out.lags = posterior.spec.lags;
    out.intercept = posterior.spec.intercept;
    out.master_seed = master_seed;
    if (target_accepted == 0) return out;
    if (posterior.draws.empty()) throw std::invalid_argument("empty posterior");

    for (std::size_t d = 0; d < posterior.draws.size() && out.accepted < target_accepted; ++d) {
        const auto& rf = posterior.draws[d];
        Eigen::LLT<Eigen::MatrixXd> llt(rf.sigma);
        if (llt.info() != Eigen::Success) continue;
        const Eigen::MatrixXd P = llt.matrixL();
        for (std::size_t attempt = 0; attempt < max_tries_per_draw; ++attempt) {
            ++out.tried;
            auto rng = substream(master_seed, d, attempt);
            auto Q = draw_rotation(rf.sigma, restrictions, rng);
            if (!Q) continue;
            StructuralDraw sd;
            sd.source_draw = d;
            sd.rotation = *Q;
            sd.impact = P * (*Q);
            sd.coefs = rf.coefs;
            out.draws.push_back(std::move(sd));
            ++out.accepted;
            break;  // at most one rotation per reduced-form draw
        }
    }
    if (out.accepted == 0)
        throw std::runtime_error("no rotation accepted after " + std::to_string(out.tried) +
                                 " tries across " + std::to_string(posterior.draws.size()) +
                                 " reduced-form draws");
    return out;
}

namespace {

// Residuals of one draw's reduced-form VAR over the full data span.
Eigen::MatrixXd residuals_of(const Eigen::MatrixXd& coefs, int n, int p, bool intercept,
                             const Eigen::MatrixXd& values) {
    const auto T = values.rows();
    Eigen::MatrixXd eps(T - p, n);
    const Eigen::VectorXd c = intercept_of(coefs, n, p, intercept);
    for (Eigen::Index t = p; t < T; ++t) {
        Eigen::VectorXd pred = c;
        for (int j = 1; j <= p; ++j)
            pred += lag_matrix(coefs, n, j) * values.row(t - j).transpose();
        eps.row(t - p) = values.row(t).transpose() - pred;
    }
    return eps;
}

}  // namespace

Eigen::MatrixXd extract_shocks(const StructuralDrawSet& drawset, const MacroDataset& data) {
    if (drawset.draws.empty()) throw std::invalid_argument("empty draw set");
    const int n = static_cast<int>(data.cols());
    const int p = drawset.lags;
    const auto rows = data.rows() - p;

    std::vector<Eigen::MatrixXd> all;
    all.reserve(drawset.draws.size());
    for (const auto& sd : drawset.draws) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sd.impact);
        if (!lu.isInvertible()) throw std::runtime_error("singular impact matrix");
        Eigen::MatrixXd eps = residuals_of(sd.coefs, n, p, drawset.intercept, data.values());
        all.push_back(lu.solve(eps.transpose()).transpose());  // w_t = L^-1 eps_t
    }

    Eigen::MatrixXd med(rows, n);
    std::vector<double> buf(all.size());
    for (Eigen::Index t = 0; t < rows; ++t)
        for (int j = 0; j < n; ++j) {
            for (std::size_t d = 0; d < all.size(); ++d) buf[d] = all[d](t, j);
            std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2), buf.end());
            double m = buf[buf.size() / 2];
            if (buf.size() % 2 == 0) {
                auto lower = *std::max_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2));
                m = 0.5 * (m + lower);
            }
            med(t, j) = m;
        }
    return med;
}

void save_drawset(const StructuralDrawSet& ds, const std::string& prefix) {
    {
        std::ofstream meta(prefix + "_meta.txt");
        if (!meta) throw std::runtime_error("cannot write " + prefix + "_meta.txt");
        meta << "n=" << ds.names.size() << "\n";
        meta << "lags=" << ds.lags << "\n";
        meta << "intercept=" << (ds.intercept ? 1 : 0) << "\n";
        meta << "seed=" << ds.master_seed << "\n";
        meta << "tried=" << ds.tried << "\n";
        meta << "accepted=" << ds.accepted << "\n";
        meta << "names=";
        for (std::size_t i = 0; i < ds.names.size(); ++i) meta << (i ? "," : "") << ds.names[i];
        meta << "\n";
        meta << "shocks=";
        for (std::size_t i = 0; i < ds.shock_names.size(); ++i) meta << (i ? "," : "") << ds.shock_names[i];
        meta << "\n";
    }
    std::ofstream out(prefix + "_draws.csv");
    if (!out) throw std::runtime_error("cannot write " + prefix + "_draws.csv");
    out << "source,values\n";
    char buf[40];
    for (const auto& sd : ds.draws) {
        out << sd.source_draw;
        auto emit = [&](const Eigen::MatrixXd& m) {
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i) {
                    std::snprintf(buf, sizeof(buf), ",%.17g", m(i, j));
                    out << buf;
                }
        };
        emit(sd.rotation);
        emit(sd.impact);
        emit(sd.coefs);
        out << "\n";
    }
}

StructuralDrawSet load_drawset(const std::string& prefix) {
    std::ifstream meta(prefix + "_meta.txt");
    if (!meta) throw std::runtime_error("cannot open " + prefix + "_meta.txt");
    StructuralDrawSet ds;
    Eigen::Index n = 0;
    std::string line;
    while (std::getline(meta, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "n") n = std::stol(val);
        else if (key == "lags") ds.lags = std::stoi(val);
        else if (key == "intercept") ds.intercept = val == "1";
        else if (key == "seed") ds.master_seed = std::stoull(val);
        else if (key == "tried") ds.tried = std::stoul(val);
        else if (key == "accepted") ds.accepted = std::stoul(val);
        else if (key == "names") {
            std::stringstream ss(val);
            std::string nm;
            while (std::getline(ss, nm, ',')) ds.names.push_back(nm);
        }
        else if (key == "shocks") {
            std::stringstream ss(val);
            std::string nm;
            while (std::getline(ss, nm, ',')) ds.shock_names.push_back(nm);
        }
    }
    if (n == 0) throw std::runtime_error("drawset meta missing n");
    const Eigen::Index k = n * ds.lags + (ds.intercept ? 1 : 0);

    std::ifstream in(prefix + "_draws.csv");
    if (!in) throw std::runtime_error("cannot open " + prefix + "_draws.csv");
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        StructuralDraw sd;
        sd.source_draw = std::stoul(cell);
        sd.rotation.resize(n, n);
        sd.impact.resize(n, n);
        sd.coefs.resize(k, n);
        auto read = [&](Eigen::MatrixXd& m) {
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i) {
                    if (!std::getline(ss, cell, ','))
                        throw std::runtime_error("truncated drawset row");
                    m(i, j) = std::stod(cell);
                }
        };
        read(sd.rotation);
        read(sd.impact);
        read(sd.coefs);
        ds.draws.push_back(std::move(sd));
    }
    return ds;
}

}  // namespace svar
