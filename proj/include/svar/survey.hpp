#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "svar/timeseries.hpp"

namespace svar {

// Per-wave aggregate with 95% normal-approximation bands. Bands are present
// only where the wave has at least two responses.
struct IndexSeries {
    std::vector<QuarterIndex> dates;
    Eigen::VectorXd value;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    std::vector<int> sample_size;
};

// A forecast is "round" when it is an integer multiple of `base` within
// `tolerance`. p0 is the share of round forecasts expected from certain
// respondents.
struct RoundnessRule {
    double base = 0.5;
    double tolerance = 1e-9;
    double p0 = 0.0;

    bool is_round(double forecast) const;
};

// Mean signed intensity per wave, -3..+3 scale.
IndexSeries diffusion_index(const FirmPanel& panel, const std::string& factor);

// Share of likely-uncertain firms per wave: clamp((f - p0)/(1 - p0), 0, 1)
// where f is the round-forecast share.
IndexSeries uncertainty_index(const FirmPanel& panel, const RoundnessRule& rule);

// scaled[t] = index[t] * mean_expectations[t], then a 4-quarter backward
// weighted moving average (weights most-recent first). First 3 entries absent.
MaskedSeries state_variable(const IndexSeries& uncertainty,
                            const Eigen::VectorXd& mean_expectations,
                            const std::array<double, 4>& weights,
                            bool divide = false);

// Logistic transition probability of the high state:
// Z[t] = 1 / (1 + exp(-eta * (x[t] - median) / sd)).
Eigen::VectorXd transition_prob(const Eigen::VectorXd& state, double eta);

double median_of(Eigen::VectorXd v);
double sample_sd(const Eigen::VectorXd& v);

void save_index_series(const IndexSeries& s, const std::string& path);

}  // namespace svar
