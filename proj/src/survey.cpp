#include "svar/survey.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

namespace svar {

bool RoundnessRule::is_round(double forecast) const {
    if (base <= 0.0) throw std::invalid_argument("roundness base must be > 0");
    const double r = forecast / base;
    return std::abs(r - std::round(r)) <= tolerance / base;
}

double median_of(Eigen::VectorXd v) {
    if (v.size() == 0) throw std::invalid_argument("median of empty vector");
    std::sort(v.data(), v.data() + v.size());
    const auto n = v.size();
    return n % 2 == 1 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

double sample_sd(const Eigen::VectorXd& v) {
    const auto n = v.size();
    if (n < 2) throw std::invalid_argument("sample sd needs >= 2 observations");
    const double m = v.mean();
    return std::sqrt((v.array() - m).square().sum() / static_cast<double>(n - 1));
}

namespace {

// Collect per-wave values from the panel; quantities absent in a record are
// skipped. Throws on a wave with no usable responses.
std::map<QuarterIndex, std::vector<double>>
by_wave(const FirmPanel& panel, const std::function<std::optional<double>(const FirmRecord&)>& pick) {
    std::map<QuarterIndex, std::vector<double>> groups;
    for (const auto& w : panel.waves()) groups[w];
    for (const auto& r : panel.records()) {
        auto v = pick(r);
        if (v) groups[r.wave].push_back(*v);
    }
    for (const auto& [w, vals] : groups)
        if (vals.empty()) throw std::invalid_argument("empty wave " + w.str());
    return groups;
}

IndexSeries assemble(const std::map<QuarterIndex, std::vector<double>>& groups,
                     const std::function<void(const std::vector<double>&,
                                              double&, double&, double&)>& stat) {
    IndexSeries s;
    const auto W = static_cast<Eigen::Index>(groups.size());
    s.value.resize(W);
    s.lower.resize(W);
    s.upper.resize(W);
    Eigen::Index i = 0;
    for (const auto& [wave, vals] : groups) {
        s.dates.push_back(wave);
        s.sample_size.push_back(static_cast<int>(vals.size()));
        double v = 0.0, lo = 0.0, hi = 0.0;
        stat(vals, v, lo, hi);
        s.value(i) = v;
        s.lower(i) = vals.size() >= 2 ? lo : v;
        s.upper(i) = vals.size() >= 2 ? hi : v;
        ++i;
    }
    return s;
}

}  // namespace

IndexSeries diffusion_index(const FirmPanel& panel, const std::string& factor) {
    if (!panel.has_factor(factor)) throw std::invalid_argument("unknown factor: " + factor);
    auto groups = by_wave(panel, [&](const FirmRecord& r) -> std::optional<double> {
        auto it = r.intensities.find(factor);
        if (it == r.intensities.end()) return std::nullopt;
        return static_cast<double>(it->second);
    });
    return assemble(groups, [](const std::vector<double>& vals, double& v, double& lo, double& hi) {
        Eigen::Map<const Eigen::VectorXd> x(vals.data(), static_cast<Eigen::Index>(vals.size()));
        v = x.mean();
        const double half = vals.size() >= 2
            ? 1.96 * sample_sd(x) / std::sqrt(static_cast<double>(vals.size())) : 0.0;
        lo = v - half;
        hi = v + half;
    });
}

IndexSeries uncertainty_index(const FirmPanel& panel, const RoundnessRule& rule) {
    if (rule.p0 < 0.0 || rule.p0 >= 1.0) throw std::invalid_argument("p0 must be in [0,1)");
    auto groups = by_wave(panel, [&](const FirmRecord& r) -> std::optional<double> {
        if (!r.point_forecast) return std::nullopt;
        return rule.is_round(*r.point_forecast) ? 1.0 : 0.0;
    });
    auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
    return assemble(groups, [&](const std::vector<double>& vals, double& v, double& lo, double& hi) {
        const auto N = static_cast<double>(vals.size());
        double f = 0.0;
        for (double x : vals) f += x;
        f /= N;
        const double raw = (f - rule.p0) / (1.0 - rule.p0);
        const double se_f = std::sqrt(std::max(f * (1.0 - f), 0.0) / N);
        const double half = 1.96 * se_f / (1.0 - rule.p0);
        v = clamp01(raw);
        lo = clamp01(raw - half);
        hi = clamp01(raw + half);
    });
}

MaskedSeries state_variable(const IndexSeries& uncertainty,
                            const Eigen::VectorXd& mean_expectations,
                            const std::array<double, 4>& weights, bool divide) {
    const auto T = uncertainty.value.size();
    if (mean_expectations.size() != T)
        throw std::invalid_argument("state_variable: misaligned series lengths");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("state_variable: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw std::invalid_argument("state_variable: weights must sum to 1");

    Eigen::VectorXd scaled(T);
    for (Eigen::Index t = 0; t < T; ++t) {
        if (divide && mean_expectations(t) <= 0.0)
            throw std::invalid_argument("state_variable: nonpositive expectation with divide scaling");
        scaled(t) = divide ? uncertainty.value(t) / mean_expectations(t)
                           : uncertainty.value(t) * mean_expectations(t);
    }

    MaskedSeries out;
    out.values = Eigen::VectorXd::Zero(T);
    out.present.assign(T, false);
    for (Eigen::Index t = 3; t < T; ++t) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) acc += weights[static_cast<std::size_t>(k)] * scaled(t - k);
        out.values(t) = acc;
        out.present[t] = true;
    }
    return out;
}

Eigen::VectorXd transition_prob(const Eigen::VectorXd& state, double eta) {
    if (eta <= 0.0) throw std::invalid_argument("eta must be > 0");
    if (state.size() < 2) throw std::invalid_argument("transition_prob needs >= 2 observations");
    const double mu = median_of(state);
    const double sd = sample_sd(state);
    if (sd <= 0.0) throw std::invalid_argument("transition_prob: zero dispersion in state variable");
    Eigen::VectorXd z(state.size());
    for (Eigen::Index t = 0; t < state.size(); ++t)
        z(t) = 1.0 / (1.0 + std::exp(-eta * (state(t) - mu) / sd));
    return z;
}

void save_index_series(const IndexSeries& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "date,value,lo,hi,n\n";
    char buf[128];
    for (Eigen::Index i = 0; i < s.value.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s,%.12g,%.12g,%.12g,%d\n",
                      s.dates[static_cast<std::size_t>(i)].str().c_str(),
                      s.value(i), s.lower(i), s.upper(i),
                      s.sample_size[static_cast<std::size_t>(i)]);
        out << buf;
    }
}

}  // namespace svar
