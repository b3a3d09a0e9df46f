#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svar/quarter.hpp"

namespace svar {

// A real vector with an explicit presence mask. Missing entries carry no
// meaningful value; consumers must check present[t] first.
struct MaskedSeries {
    Eigen::VectorXd values;
    std::vector<bool> present;

    Eigen::Index size() const { return values.size(); }
};

// Aligned quarterly multivariate dataset. Dates are contiguous, names
// unique, and value(t, j) is finite wherever present(t, j) is true.
// Immutable after construction.
class MacroDataset {
public:
    MacroDataset(std::vector<QuarterIndex> dates, std::vector<std::string> names,
                 Eigen::MatrixXd values, std::vector<std::vector<bool>> present);

    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }
    const std::vector<QuarterIndex>& dates() const { return dates_; }
    const std::vector<std::string>& names() const { return names_; }
    const Eigen::MatrixXd& values() const { return values_; }
    bool is_present(Eigen::Index t, Eigen::Index j) const { return present_[t][j]; }
    bool all_present() const;

    Eigen::Index column_of(const std::string& name) const;
    MaskedSeries column_series(const std::string& name) const;

    // Rows with date in [from, to], inclusive.
    MacroDataset slice(const QuarterIndex& from, const QuarterIndex& to) const;

private:
    std::vector<QuarterIndex> dates_;
    std::vector<std::string> names_;
    Eigen::MatrixXd values_;
    std::vector<std::vector<bool>> present_;
};

MacroDataset load_macro(const std::string& path);
void save_macro(const MacroDataset& data, const std::string& path);

// Per-wave firm-level survey responses.
struct FirmRecord {
    QuarterIndex wave;
    std::string firm_id;
    std::map<std::string, int> intensities;  // factor -> signed intensity in -3..+3
    std::optional<double> point_forecast;    // percent
    bool informed = true;
};

class FirmPanel {
public:
    explicit FirmPanel(std::vector<FirmRecord> records);

    const std::vector<FirmRecord>& records() const { return records_; }
    const std::vector<QuarterIndex>& waves() const { return waves_; }
    bool has_factor(const std::string& factor) const;

private:
    std::vector<FirmRecord> records_;
    std::vector<QuarterIndex> waves_;  // sorted unique
};

// Categorical label -> intensity map. Defaults cover
// {strong,medium,modest} x {increase,decrease} plus "no change".
using IntensitySchema = std::map<std::string, int>;
IntensitySchema default_intensity_schema();
IntensitySchema load_intensity_schema(const std::string& path);

FirmPanel load_firm_panel(const std::string& path, const IntensitySchema& schema);

// output[t] = 100 * (x[t] / x[t-4] - 1); first 4 entries absent.
MaskedSeries yoy_change(const Eigen::VectorXd& series);

// Keeps the final month of each quarter (March, June, September, December).
// Errors when a covered quarter lacks its final-month observation.
std::pair<std::vector<QuarterIndex>, Eigen::VectorXd>
align_last_month(const std::vector<MonthIndex>& dates, const Eigen::VectorXd& values);

// Already-quarterly input passes through unchanged.
inline std::pair<std::vector<QuarterIndex>, Eigen::VectorXd>
align_last_month(const std::vector<QuarterIndex>& dates, const Eigen::VectorXd& values) {
    return {dates, values};
}

}  // namespace svar
