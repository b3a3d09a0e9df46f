#include "svar/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "svar/bvar.hpp"
#include "svar/identification.hpp"
#include "svar/localproj.hpp"
#include "svar/simulate.hpp"
#include "svar/structural.hpp"
#include "svar/survey.hpp"
#include "svar/timeseries.hpp"

namespace svar {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string get(const StageParams& p, const std::string& key, const std::string& dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}

std::string require(const StageParams& p, const std::string& key, const std::string& kind) {
    auto it = p.find(key);
    if (it == p.end())
        throw std::runtime_error("stage '" + kind + "': missing parameter '" + key + "'");
    return it->second;
}

std::string resolve(const std::string& path, const std::string& out_dir) {
    if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(out_dir) / path).string();
}

void require_input(const std::string& path, const std::string& kind) {
    if (!std::filesystem::exists(path))
        throw std::runtime_error("stage '" + kind + "': input file not found: " + path);
}

BvarSpec spec_from(const StageParams& p) {
    BvarSpec spec;
    spec.lags = std::stoi(get(p, "lags", "2"));
    spec.delta = std::stod(get(p, "delta", "0"));
    spec.lambda = std::stod(get(p, "lambda", "0.2"));
    return spec;
}

// Writes an LP-ready companion file: one dependent variable, the true gas
// shock, and logistic state probabilities derived from two of the series.
void write_lp_input(const SimulationResult& sim, const std::string& path) {
    const auto& d = sim.data;
    const Eigen::VectorXd z = transition_prob(d.values().col(2), 5.0);
    const Eigen::VectorXd s = transition_prob(d.values().col(3), 5.0);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "date,y,shock,z,s\n";
    char buf[160];
    for (Eigen::Index t = 0; t < d.rows(); ++t) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g\n",
                      d.dates()[static_cast<std::size_t>(t)].str().c_str(),
                      d.values()(t, 1), sim.shocks(t, 0), z(t), s(t));
        out << buf;
    }
}

void save_shock_matrix(const Eigen::MatrixXd& shocks, const std::vector<QuarterIndex>& dates,
                       const std::vector<std::string>& names, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "date";
    for (const auto& nm : names) out << "," << nm;
    out << "\n";
    char buf[40];
    for (Eigen::Index t = 0; t < shocks.rows(); ++t) {
        out << dates[static_cast<std::size_t>(t)].str();
        for (Eigen::Index j = 0; j < shocks.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), ",%.17g", shocks(t, j));
            out << buf;
        }
        out << "\n";
    }
}

}  // namespace

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    PipelineConfig cfg;
    std::string line, section;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            if (section != "global") cfg.stages.emplace_back(section, StageParams{});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line missing '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty() || section == "global") {
            if (key == "seed") cfg.master_seed = std::stoull(val);
            else if (key == "out_dir") cfg.out_dir = val;
            else throw std::runtime_error("unknown global key: " + key);
        } else {
            cfg.stages.back().second[key] = val;
        }
    }
    return cfg;
}

std::vector<std::string> run_stage(const std::string& kind, const StageParams& params,
                                   const std::string& out_dir, std::uint64_t master_seed) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    auto out_path = [&](const std::string& key, const std::string& dflt) {
        std::string p = resolve(get(params, key, dflt), out_dir);
        written.push_back(p);
        return p;
    };
    const std::uint64_t seed = params.count("seed")
        ? std::stoull(params.at("seed")) : master_seed;

    if (kind == "simulate") {
        SvarDgp dgp;
        const std::string preset = get(params, "preset", "paper-like");
        if (preset == "paper-like") dgp = paper_like_dgp();
        else throw std::runtime_error("unknown simulate preset: " + preset);
        dgp.sample_size = std::stoi(get(params, "t", "300"));
        dgp.master_seed = seed;
        auto sim = simulate(dgp);
        save_macro(sim.data, out_path("out", "data.csv"));
        save_shock_matrix(sim.shocks, sim.data.dates(),
                          {"gas", "as", "expectation", "ad", "sentiment"},
                          out_path("shocks-out", "shocks.csv"));
        if (params.count("lp-out")) write_lp_input(sim, out_path("lp-out", "lp_input.csv"));
    } else if (kind == "indexes") {
        const std::string panel_path = resolve(require(params, "panel", kind), out_dir);
        require_input(panel_path, kind);
        IntensitySchema schema = params.count("schema")
            ? load_intensity_schema(resolve(params.at("schema"), out_dir))
            : default_intensity_schema();
        FirmPanel panel = load_firm_panel(panel_path, schema);
        IndexSeries series;
        if (get(params, "uncertainty", "0") == "1") {
            RoundnessRule rule;
            rule.base = std::stod(get(params, "base", "0.5"));
            rule.p0 = std::stod(get(params, "p0", "0"));
            series = uncertainty_index(panel, rule);
        } else {
            series = diffusion_index(panel, require(params, "factor", kind));
        }
        save_index_series(series, out_path("out", "index.csv"));
    } else if (kind == "estimate") {
        const std::string data_path = resolve(require(params, "data", kind), out_dir);
        require_input(data_path, kind);
        MacroDataset data = load_macro(data_path);
        BvarSpec spec = spec_from(params);
        if (get(params, "covid-correction", "0") == "1") {
            CovidProfile seed_profile;
            if (params.count("covid-onset"))
                seed_profile.onset = QuarterIndex::parse(params.at("covid-onset"));
            BvarSpec probe = spec;
            probe.covid = seed_profile;
            spec.covid = estimate_covid_profile(data, probe);
        }
        if (get(params, "optimize-lambda", "0") == "1")
            spec.lambda = optimize_hyperparameters(data, spec,
                                                   std::stod(get(params, "lambda-lo", "0.01")),
                                                   std::stod(get(params, "lambda-hi", "5")));
        const int draws = std::stoi(get(params, "draws", "1000"));
        BvarPosterior post = posterior_sample(data, spec, draws, seed);
        const std::string prefix = resolve(get(params, "out", "posterior"), out_dir);
        save_posterior(post, prefix);
        written.push_back(prefix + "_meta.txt");
        written.push_back(prefix + "_draws.csv");
    } else if (kind == "identify") {
        const std::string prefix = resolve(require(params, "posterior", kind), out_dir);
        require_input(prefix + "_meta.txt", kind);
        BvarPosterior post = load_posterior(prefix);
        const std::string rspec = get(params, "restrictions", "builtin:paper");
        RestrictionSet restrictions = rspec == "builtin:paper"
            ? paper_restrictions()
            : load_restrictions(resolve(rspec, out_dir));
        StructuralDrawSet ds = identify(post, restrictions,
                                        std::stoul(get(params, "accepted", "500")),
                                        std::stoul(get(params, "max-tries", "1000")), seed);
        const std::string out_prefix = resolve(get(params, "out", "drawset"), out_dir);
        save_drawset(ds, out_prefix);
        written.push_back(out_prefix + "_meta.txt");
        written.push_back(out_prefix + "_draws.csv");
        if (params.count("data") && params.count("shocks-out")) {
            const std::string data_path = resolve(params.at("data"), out_dir);
            require_input(data_path, kind);
            MacroDataset data = load_macro(data_path);
            Eigen::MatrixXd shocks = extract_shocks(ds, data);
            std::vector<QuarterIndex> sdates(data.dates().begin() + ds.lags, data.dates().end());
            save_shock_matrix(shocks, sdates, restrictions.shock_names(),
                              out_path("shocks-out", "structural_shocks.csv"));
        }
    } else if (kind == "irf") {
        const std::string prefix = resolve(require(params, "drawset", kind), out_dir);
        require_input(prefix + "_meta.txt", kind);
        StructuralDrawSet ds = load_drawset(prefix);
        IrfResult r = irf_bands(ds, std::stoi(get(params, "horizon", "20")),
                                std::stod(get(params, "coverage", "0.68")));
        save_irf(r, out_path("out", "irf.csv"));
    } else if (kind == "hd") {
        const std::string prefix = resolve(require(params, "drawset", kind), out_dir);
        const std::string data_path = resolve(require(params, "data", kind), out_dir);
        require_input(prefix + "_meta.txt", kind);
        require_input(data_path, kind);
        StructuralDrawSet ds = load_drawset(prefix);
        MacroDataset data = load_macro(data_path);
        auto [coefs, impact] = median_draw(ds);
        HistoricalDecomposition hd = historical_decomposition(coefs, impact, ds.lags,
                                                              ds.intercept, data, ds.shock_names);
        save_hd(hd, out_path("out", "hd.csv"));
    } else if (kind == "girf") {
        const std::string data_path = resolve(require(params, "data", kind), out_dir);
        require_input(data_path, kind);
        MacroDataset data = load_macro(data_path);
        BvarSpec spec = spec_from(params);
        if (get(params, "optimize-lambda", "0") == "1")
            spec.lambda = optimize_hyperparameters(data, spec,
                                                   std::stod(get(params, "lambda-lo", "0.01")),
                                                   std::stod(get(params, "lambda-hi", "5")));
        BvarPosterior post = posterior_sample(data, spec, std::stoi(get(params, "draws", "1000")), seed);
        IrfResult r = girf_recursive(post, std::stoi(get(params, "horizon", "20")),
                                     std::stod(get(params, "coverage", "0.68")));
        save_irf(r, out_path("out", "girf.csv"));
    } else if (kind == "lp") {
        const std::string data_path = resolve(require(params, "data", kind), out_dir);
        require_input(data_path, kind);
        MacroDataset data = load_macro(data_path);
        LpSpec spec;
        spec.horizons = std::stoi(get(params, "horizons", "12"));
        spec.y_lags = std::stoi(get(params, "lags", "2"));
        spec.shock_lags = std::stoi(get(params, "shock-lags", "2"));
        spec.dummy_decay = std::stod(get(params, "rho-d", "0.5"));
        const std::string nw = get(params, "nw", "auto");
        if (nw != "auto") spec.nw_bandwidth = std::stoi(nw);
        spec.tight_labor_interaction = params.count("s") > 0;
        auto col = [&](const std::string& key) {
            return data.values().col(data.column_of(require(params, key, kind)));
        };
        Eigen::VectorXd s = spec.tight_labor_interaction
            ? Eigen::VectorXd(col("s")) : Eigen::VectorXd::Zero(data.rows());
        LpResult r = lp_state_dependent(col("y"), col("shock"), col("z"), s,
                                        data.dates(), spec);
        save_lp(r, out_path("out", "lp.csv"));
    } else {
        throw std::runtime_error("unknown stage kind: " + kind);
    }
    return written;
}

void run_pipeline(const PipelineConfig& config) {
    std::filesystem::create_directories(config.out_dir);
    std::vector<std::string> all_written;
    for (const auto& [kind, params] : config.stages) {
        try {
            auto written = run_stage(kind, params, config.out_dir, config.master_seed);
            all_written.insert(all_written.end(), written.begin(), written.end());
        } catch (const std::exception& e) {
            std::ofstream fail((std::filesystem::path(config.out_dir) / "FAILED.txt").string());
            fail << "stage=" << kind << "\n" << "cause=" << e.what() << "\n";
            throw std::runtime_error("stage '" + kind + "' failed: " + e.what());
        }
    }
    std::sort(all_written.begin(), all_written.end());
    all_written.erase(std::unique(all_written.begin(), all_written.end()), all_written.end());

    std::ofstream manifest((std::filesystem::path(config.out_dir) / "manifest.txt").string());
    if (!manifest) throw std::runtime_error("cannot write manifest");
    manifest << "seed=" << config.master_seed << "\n";
    for (const auto& path : all_written) {
        const auto rel = std::filesystem::relative(path, config.out_dir).string();
        manifest << sha256_file(path) << "  " << rel << "\n";
    }
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot hash missing file: " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

}  // namespace svar
