#include "svar/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace svar {

QuarterIndex QuarterIndex::parse(const std::string& s) {
    auto pos = s.find('Q');
    if (pos == std::string::npos) pos = s.find('q');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= s.size())
        throw std::invalid_argument("malformed quarterly date '" + s + "' (want YYYYQn)");
    int y, q;
    try {
        y = std::stoi(s.substr(0, pos));
        q = std::stoi(s.substr(pos + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed quarterly date '" + s + "'");
    }
    if (q < 1 || q > 4) throw std::invalid_argument("malformed quarterly date '" + s + "'");
    return QuarterIndex{y, q};
}

std::string MonthIndex::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

MonthIndex MonthIndex::parse(const std::string& s) {
    auto pos = s.find('-');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= s.size())
        throw std::invalid_argument("malformed monthly date '" + s + "' (want YYYY-MM)");
    int y, m;
    try {
        y = std::stoi(s.substr(0, pos));
        m = std::stoi(s.substr(pos + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed monthly date '" + s + "'");
    }
    if (m < 1 || m > 12) throw std::invalid_argument("malformed monthly date '" + s + "'");
    return MonthIndex{y, m};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "na" || cell == "NaN";
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

MacroDataset::MacroDataset(std::vector<QuarterIndex> dates, std::vector<std::string> names,
                           Eigen::MatrixXd values, std::vector<std::vector<bool>> present)
    : dates_(std::move(dates)), names_(std::move(names)),
      values_(std::move(values)), present_(std::move(present)) {
    const auto T = static_cast<Eigen::Index>(dates_.size());
    const auto n = static_cast<Eigen::Index>(names_.size());
    if (values_.rows() != T || values_.cols() != n)
        throw std::invalid_argument("MacroDataset: value matrix shape mismatch");
    if (present_.size() != static_cast<std::size_t>(T))
        throw std::invalid_argument("MacroDataset: mask shape mismatch");
    for (Eigen::Index t = 0; t + 1 < T; ++t) {
        if (!(dates_[t] < dates_[t + 1]))
            throw std::invalid_argument("duplicate date " + dates_[t + 1].str());
        if (dates_[t].next() != dates_[t + 1])
            throw std::invalid_argument("non-contiguous dates: gap after " + dates_[t].str());
    }
    std::set<std::string> uniq(names_.begin(), names_.end());
    if (uniq.size() != names_.size())
        throw std::invalid_argument("variable names not unique");
    for (Eigen::Index t = 0; t < T; ++t) {
        if (present_[t].size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("MacroDataset: mask shape mismatch");
        for (Eigen::Index j = 0; j < n; ++j)
            if (present_[t][j] && !std::isfinite(values_(t, j)))
                throw std::invalid_argument("non-finite value marked present");
    }
}

bool MacroDataset::all_present() const {
    for (const auto& row : present_)
        for (bool p : row)
            if (!p) return false;
    return true;
}

Eigen::Index MacroDataset::column_of(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw std::invalid_argument("unknown variable: " + name);
    return static_cast<Eigen::Index>(it - names_.begin());
}

MaskedSeries MacroDataset::column_series(const std::string& name) const {
    const auto j = column_of(name);
    MaskedSeries s;
    s.values = values_.col(j);
    s.present.resize(rows());
    for (Eigen::Index t = 0; t < rows(); ++t) s.present[t] = present_[t][j];
    return s;
}

MacroDataset MacroDataset::slice(const QuarterIndex& from, const QuarterIndex& to) const {
    std::vector<QuarterIndex> d;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index t = 0; t < rows(); ++t)
        if (!(dates_[t] < from) && !(to < dates_[t])) {
            d.push_back(dates_[t]);
            keep.push_back(t);
        }
    if (keep.empty()) throw std::invalid_argument("empty slice");
    Eigen::MatrixXd v(static_cast<Eigen::Index>(keep.size()), cols());
    std::vector<std::vector<bool>> m(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        v.row(static_cast<Eigen::Index>(i)) = values_.row(keep[i]);
        m[i] = present_[keep[i]];
    }
    return MacroDataset(std::move(d), names_, std::move(v), std::move(m));
}

MacroDataset load_macro(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.size() < 2) throw std::runtime_error("macro CSV needs a header and data rows: " + path);
    auto header = split_csv_line(lines[0]);
    if (header.size() < 2 || trim(header[0]) != "date")
        throw std::runtime_error("macro CSV header must start with 'date'");
    std::vector<std::string> names(header.begin() + 1, header.end());
    for (auto& nm : names) nm = trim(nm);

    const auto n = static_cast<Eigen::Index>(names.size());
    std::vector<std::pair<QuarterIndex, std::size_t>> order;
    std::vector<std::vector<std::string>> cells;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto row = split_csv_line(lines[i]);
        if (row.size() != header.size())
            throw std::runtime_error("row " + std::to_string(i + 1) + ": wrong column count");
        order.emplace_back(QuarterIndex::parse(trim(row[0])), cells.size());
        cells.emplace_back(row.begin() + 1, row.end());
    }
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const auto T = static_cast<Eigen::Index>(order.size());
    std::vector<QuarterIndex> dates(T);
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(T, n);
    std::vector<std::vector<bool>> present(T, std::vector<bool>(n, true));
    for (Eigen::Index t = 0; t < T; ++t) {
        dates[t] = order[t].first;
        const auto& row = cells[order[t].second];
        for (Eigen::Index j = 0; j < n; ++j) {
            auto cell = trim(row[j]);
            if (is_missing(cell)) {
                present[t][j] = false;
                continue;
            }
            try {
                std::size_t used = 0;
                values(t, j) = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::runtime_error("non-numeric cell '" + cell + "' at " +
                                         dates[t].str() + "," + names[j]);
            }
        }
    }
    return MacroDataset(std::move(dates), std::move(names), std::move(values), std::move(present));
}

void save_macro(const MacroDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "date";
    for (const auto& nm : data.names()) out << "," << nm;
    out << "\n";
    char buf[40];
    for (Eigen::Index t = 0; t < data.rows(); ++t) {
        out << data.dates()[t].str();
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            out << ",";
            if (data.is_present(t, j)) {
                std::snprintf(buf, sizeof(buf), "%.17g", data.values()(t, j));
                out << buf;
            } else {
                out << "NA";
            }
        }
        out << "\n";
    }
}

FirmPanel::FirmPanel(std::vector<FirmRecord> records) : records_(std::move(records)) {
    std::set<std::pair<std::string, QuarterIndex>> seen;
    std::set<QuarterIndex> waves;
    for (const auto& r : records_) {
        if (!seen.insert({r.firm_id, r.wave}).second)
            throw std::invalid_argument("duplicate (firm, wave): " + r.firm_id + " " + r.wave.str());
        for (const auto& [factor, v] : r.intensities)
            if (v < -3 || v > 3)
                throw std::invalid_argument("intensity outside -3..+3 for factor " + factor);
        waves.insert(r.wave);
    }
    waves_.assign(waves.begin(), waves.end());
}

bool FirmPanel::has_factor(const std::string& factor) const {
    for (const auto& r : records_)
        if (r.intensities.count(factor)) return true;
    return false;
}

IntensitySchema default_intensity_schema() {
    return {
        {"strong increase", 3},  {"medium increase", 2}, {"modest increase", 1},
        {"no change", 0},
        {"modest decrease", -1}, {"medium decrease", -2}, {"strong decrease", -3},
    };
}

IntensitySchema load_intensity_schema(const std::string& path) {
    IntensitySchema schema;
    for (const auto& line : read_lines(path)) {
        if (line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("schema line missing '=': " + line);
        schema[trim(line.substr(0, eq))] = std::stoi(trim(line.substr(eq + 1)));
    }
    return schema;
}

FirmPanel load_firm_panel(const std::string& path, const IntensitySchema& schema) {
    auto lines = read_lines(path);
    if (lines.empty()) throw std::runtime_error("empty firm panel file: " + path);
    auto header = split_csv_line(lines[0]);
    for (auto& h : header) h = trim(h);

    auto find_col = [&](const std::string& nm) -> std::ptrdiff_t {
        auto it = std::find(header.begin(), header.end(), nm);
        return it == header.end() ? -1 : it - header.begin();
    };
    const auto c_wave = find_col("wave");
    const auto c_firm = find_col("firm");
    if (c_wave < 0 || c_firm < 0)
        throw std::runtime_error("firm panel needs 'wave' and 'firm' columns");
    const auto c_forecast = find_col("forecast");
    const auto c_informed = find_col("informed");

    std::vector<std::size_t> factor_cols;
    for (std::size_t j = 0; j < header.size(); ++j) {
        auto sj = static_cast<std::ptrdiff_t>(j);
        if (sj != c_wave && sj != c_firm && sj != c_forecast && sj != c_informed)
            factor_cols.push_back(j);
    }

    std::vector<FirmRecord> records;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto row = split_csv_line(lines[i]);
        if (row.size() != header.size())
            throw std::runtime_error("firm panel row " + std::to_string(i + 1) + ": wrong column count");
        FirmRecord rec;
        rec.wave = QuarterIndex::parse(trim(row[c_wave]));
        rec.firm_id = trim(row[c_firm]);
        if (c_forecast >= 0 && !is_missing(trim(row[c_forecast])))
            rec.point_forecast = std::stod(trim(row[c_forecast]));
        if (c_informed >= 0 && !is_missing(trim(row[c_informed])))
            rec.informed = trim(row[c_informed]) == "1" || trim(row[c_informed]) == "true";
        for (auto j : factor_cols) {
            auto cell = trim(row[j]);
            if (is_missing(cell)) continue;
            auto it = schema.find(cell);
            if (it == schema.end()) {
                // allow pre-coded numeric intensities too
                try {
                    std::size_t used = 0;
                    int v = std::stoi(cell, &used);
                    if (used != cell.size()) throw std::invalid_argument(cell);
                    rec.intensities[header[j]] = v;
                    continue;
                } catch (const std::invalid_argument&) {
                    throw std::runtime_error("unknown intensity code '" + cell + "' in column " + header[j]);
                }
            }
            rec.intensities[header[j]] = it->second;
        }
        records.push_back(std::move(rec));
    }
    return FirmPanel(std::move(records));
}

MaskedSeries yoy_change(const Eigen::VectorXd& series) {
    const auto T = series.size();
    if (T < 5) throw std::invalid_argument("yoy_change needs length >= 5");
    MaskedSeries out;
    out.values = Eigen::VectorXd::Zero(T);
    out.present.assign(T, false);
    for (Eigen::Index t = 4; t < T; ++t) {
        if (series(t - 4) <= 0.0)
            throw std::invalid_argument("nonpositive level in yoy_change at t=" + std::to_string(t - 4));
        out.values(t) = 100.0 * (series(t) / series(t - 4) - 1.0);
        out.present[t] = true;
    }
    return out;
}

std::pair<std::vector<QuarterIndex>, Eigen::VectorXd>
align_last_month(const std::vector<MonthIndex>& dates, const Eigen::VectorXd& values) {
    if (static_cast<Eigen::Index>(dates.size()) != values.size())
        throw std::invalid_argument("align_last_month: length mismatch");
    std::vector<QuarterIndex> qdates;
    std::vector<double> vals;
    std::set<QuarterIndex> covered, found;
    for (std::size_t i = 0; i < dates.size(); ++i) {
        covered.insert(dates[i].quarter_of());
        if (dates[i].is_quarter_end()) {
            qdates.push_back(dates[i].quarter_of());
            vals.push_back(values(static_cast<Eigen::Index>(i)));
            found.insert(dates[i].quarter_of());
        }
    }
    for (const auto& q : covered)
        if (!found.count(q))
            throw std::runtime_error("missing final-month observation for " + q.str());
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    return {qdates, v};
}

}  // namespace svar
