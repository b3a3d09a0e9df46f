#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "svar/bvar.hpp"

namespace svar {

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1, Unrestricted = 2 };

// Sign/zero constraints on the impact matrix, one column per shock.
// constraint(variable, shock) uses the symbols {+, -, 0, *}.
class RestrictionSet {
public:
    RestrictionSet(int n, std::vector<std::string> shock_names);

    void set(int variable, int shock, Sign s);
    Sign get(int variable, int shock) const { return grid_[idx(variable, shock)]; }
    int size() const { return n_; }
    const std::vector<std::string>& shock_names() const { return shock_names_; }

    int zero_count(int shock) const;
    // Shocks ordered by decreasing zero count, ties broken by column order.
    std::vector<int> processing_order() const;
    // Throws when constraints are contradictory or more zeros are imposed
    // than the rotation sampler can satisfy.
    void validate() const;

    bool satisfied_by(const Eigen::MatrixXd& impact, double zero_tol = 1e-10) const;

private:
    std::size_t idx(int v, int s) const { return static_cast<std::size_t>(v * n_ + s); }
    int n_;
    std::vector<std::string> shock_names_;
    std::vector<Sign> grid_;
};

// The five-shock restriction grid used throughout: columns
// (gas, AS+, expectation, AD+, sentiment) over variables
// (rgas, core, expectations, unemployment, confidence).
RestrictionSet paper_restrictions();

// Text grid with symbols {+,-,0,*}: one header row of shock names, then one
// row per variable.
RestrictionSet load_restrictions(const std::string& path);
void save_restrictions(const RestrictionSet& r, const std::string& path);

struct StructuralDraw {
    std::size_t source_draw = 0;     // index into the reduced-form posterior
    Eigen::MatrixXd rotation;        // orthogonal Q
    Eigen::MatrixXd impact;          // L = chol(Sigma) * Q
    Eigen::MatrixXd coefs;           // reduced-form coefficients of the source draw
};

struct StructuralDrawSet {
    std::vector<StructuralDraw> draws;
    std::vector<std::string> names;
    std::vector<std::string> shock_names;
    int lags = 1;
    bool intercept = true;
    std::uint64_t master_seed = 0;
    std::size_t tried = 0;
    std::size_t accepted = 0;
};

// One candidate rotation: Gaussian vectors projected on the null space of
// the zero-restriction rows and the previously accepted columns, with one
// sign-flip attempt per column. Empty when a sign constraint still fails.
std::optional<Eigen::MatrixXd> draw_rotation(const Eigen::MatrixXd& sigma,
                                             const RestrictionSet& restrictions,
                                             std::mt19937_64& rng);

StructuralDrawSet identify(const BvarPosterior& posterior, const RestrictionSet& restrictions,
                           std::size_t target_accepted, std::size_t max_tries_per_draw,
                           std::uint64_t master_seed);

// Elementwise posterior-median structural shock series over the full data
// span (which may extend past the fit sample). Column order = shock order.
Eigen::MatrixXd extract_shocks(const StructuralDrawSet& drawset, const MacroDataset& data);

void save_drawset(const StructuralDrawSet& ds, const std::string& prefix);
StructuralDrawSet load_drawset(const std::string& prefix);

}  // namespace svar
