#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttvp/core.hpp"
#include "ttvp/shooting.hpp"

namespace ttvp {

// ---------------------------------------------------------------------------
// Built-in problems
// ---------------------------------------------------------------------------

enum class Example { One = 1, Two = 2, Three = 3, Four = 4 };

/// Accepts "1".."4" and "example1".."example4".
Example parse_example(std::string_view name);
std::string example_name(Example ex);

/// Examples 1-3: a = 0.5, horizon = 1, exact solution attached.
/// Example 4: a = 0.5, horizon = a, y(a) = 1 (weighted ya = e^{lambda a}), no exact solution.
TvpSpec registry_build(Example ex, double alpha, double lambda);
TvpSpec registry_build(std::string_view name, double alpha, double lambda);

/// Coefficient of sin(y) in Example 4: Gamma(alpha+1) / (3 e^{lambda a} a^alpha).
double example4_coefficient(double alpha, double lambda, double a = 0.5);

// ---------------------------------------------------------------------------
// Convergence studies
// ---------------------------------------------------------------------------

/// p_N = log2(e_N / e_{2N}) for consecutive entries; undefined when either error is 0.
std::vector<std::optional<double>> eoc(const std::vector<double>& max_errors);

struct StudyRow {
    double alpha;
    int n;          // steps over [0, horizon]
    double h;       // horizon / n
    double y0;
    double err_a;   // |y(a) - y^h(a)|
    double err_b;   // |y(b) - y^h(b)|
    double max_err; // max over all grid nodes on [0, horizon]
    std::optional<double> eoc;
    int bisections;
    std::optional<std::string> failure;
};

struct StudyTable {
    std::vector<StudyRow> rows;
};

struct ConvergenceRequest {
    Example example;
    std::vector<double> alphas;
    double lambda = 2.0;
    MethodChoice method = PredictorCorrector{};
    /// Steps over the problem horizon; consecutive entries should double.
    std::vector<int> n_list;
    ShootingConfig shooting;  // ivp_n is overwritten per cell
    std::optional<double> horizon;
    int jobs = 1;
};

/// Runs shooting for every (alpha, n) cell. A failed cell is recorded in its
/// row instead of aborting the study. Rows are ordered by (alpha, n).
StudyTable convergence_study(const ConvergenceRequest& request);

// ---------------------------------------------------------------------------
// Perturbation studies (Example 4, Method 2)
// ---------------------------------------------------------------------------

enum class PerturbKind { TerminalValue, RhsShift, Lambda, Alpha };

PerturbKind parse_perturb_kind(std::string_view name);
std::string perturb_kind_name(PerturbKind kind);

/// Perturbed copy of an Example 4 problem.
///   TerminalValue: y(a) = 1 + eps.
///   RhsShift: eps added to the plain-Caputo right-hand side, i.e. f + eps e^{-lambda t}.
///   Lambda: lambda + eps throughout the problem data, terminal weight e^{-lambda a} kept.
///   Alpha: alpha + eps, same f and terminal value.
TvpSpec perturbed_problem(PerturbKind kind, double eps, double alpha = 0.5, double lambda = 2.0);

struct PerturbRow {
    double eps;
    int n;
    double h;
    double dev;  // max_i |y_i - z_i|
    std::optional<std::string> failure;
};

struct PerturbTable {
    PerturbKind kind;
    std::vector<PerturbRow> rows;
};

struct PerturbRequest {
    PerturbKind kind;
    std::vector<double> eps_list;
    std::vector<int> n_list;  // steps on [0, a]
    double alpha = 0.5;
    double lambda = 2.0;
    ShootingConfig shooting;  // method forced to PredictorCorrector
    int jobs = 1;
};

/// Rows ordered by (n, eps). Kind Alpha is rejected here; use alpha_perturbation_trajectories.
PerturbTable perturbation_study(const PerturbRequest& request);

/// Base and alpha-perturbed solutions on a common grid (for plotting).
struct TrajectoryPair {
    std::vector<double> t;
    std::vector<double> y;
    std::vector<double> z;
};

TrajectoryPair alpha_perturbation_trajectories(double eps, int n, const ShootingConfig& shooting,
                                               double alpha = 0.5, double lambda = 2.0);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Round-trip decimal form, scientific notation with 17 significant digits.
std::string format_real(double v);

void emit_csv(const StudyTable& table, std::ostream& out);
void emit_csv(const PerturbTable& table, std::ostream& out);
void emit_csv(const TrajectoryPair& pair, std::ostream& out);

/// Writes via a temporary file in the same directory and renames it into place.
/// Nothing is left behind if writing fails.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace ttvp
