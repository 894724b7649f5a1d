#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "ttvp/core.hpp"
#include "ttvp/transform.hpp"

namespace ttvp {

/// Method 1: implicit L1 backward-difference scheme.
struct BackwardDifference {};

/// Method 2: fractional Adams-Bashforth-Moulton, one PECE sweep.
struct PredictorCorrector {};

/// Method 3: piecewise collocation in powers of t^{1/2}.
///
/// On panel [t_k, t_{k+1}] the Caputo derivative z = D^alpha u is sought in
/// V_m = span{1, t^{1/2}, ..., t^{(2m-1)/2}} (global powers, i.e. polynomials of
/// degree 2m-1 in sqrt(t)), and u = u0 + I^alpha z. The collocation equations
/// z(tau) = g(tau, u(tau)) are imposed at tau = t_k + c_i h.
struct NonpolyCollocation {
    int order_m = 1;
    std::vector<double> points{1.0 / 3.0, 1.0};

    /// Default point sets: (1/3, 1) for m = 1 and (1/4, 1/2, 3/4, 1) for m = 2.
    static NonpolyCollocation with_defaults(int order_m);
    int basis_size() const noexcept { return 2 * order_m; }
    void validate() const;
};

using MethodChoice = std::variant<BackwardDifference, PredictorCorrector, NonpolyCollocation>;

struct NewtonConfig {
    double tol = 1e-12;
    int max_iter = 50;

    void validate() const;
};

/// Predictor weight b_{j,n+1} = (h^a / a) ((n+1-j)^a - (n-j)^a), 0 <= j <= n.
double abm_predictor_weight(double alpha, int n, int j, double h);

/// Corrector (product trapezoid) weight a_{j,n+1}, 0 <= j <= n+1.
double abm_corrector_weight(double alpha, int n, int j, double h);

// Plain-Caputo solvers. n counts steps over spec.horizon.
Trajectory solve_caputo_abm(const CaputoIvpSpec& spec, int n);
Trajectory solve_caputo_bdq(const CaputoIvpSpec& spec, int n, const NewtonConfig& newton = {});
Trajectory solve_caputo_collocation(const CaputoIvpSpec& spec, int n, const NonpolyCollocation& method,
                                    const NewtonConfig& newton = {});
Trajectory solve_caputo(const CaputoIvpSpec& spec, int n, const MethodChoice& method,
                        const NewtonConfig& newton = {});

// Tempered solvers: transform, solve the Caputo problem, transform back.
Trajectory solve_ivp_abm(const IvpSpec& spec, int n);
Trajectory solve_ivp_bdq(const IvpSpec& spec, int n, const NewtonConfig& newton = {});
Trajectory solve_ivp_collocation(const IvpSpec& spec, int n, const NonpolyCollocation& method,
                                 const NewtonConfig& newton = {});
Trajectory solve_ivp(const IvpSpec& spec, int n, const MethodChoice& method, const NewtonConfig& newton = {});

/// Collocation solver with the solution-independent kernel moments precomputed
/// for one (alpha, grid, point set). Reusing one instance across repeated solves
/// on the same grid (as the shooting loop does) avoids recomputing them.
class CollocationSolver {
public:
    CollocationSolver(double alpha, UniformGrid grid, NonpolyCollocation method);
    ~CollocationSolver();
    CollocationSolver(CollocationSolver&&) noexcept;
    CollocationSolver& operator=(CollocationSolver&&) noexcept;

    const UniformGrid& grid() const noexcept;
    double alpha() const noexcept;

    /// Solves on the first `steps` panels (defaults to the whole grid).
    Trajectory solve(const ScalarField& g, double u0, const NewtonConfig& newton = {}, int steps = -1) const;

private:
    struct Plan;
    std::unique_ptr<Plan> plan_;
};

/// Kernel moment int_lo^hi (tau - s)^{alpha-1} psi_p(s) ds of basis function p
/// of panel `panel` on `grid`, with hi = min(t_{panel+1}, tau). Exposed for tests.
double collocation_moment(double alpha, const UniformGrid& grid, int panel, int p, double tau);

/// Basis function p of panel `panel`: ((sqrt(s) - sqrt(t_k)) / (sqrt(t_{k+1}) - sqrt(t_k)))^p.
double collocation_basis(const UniformGrid& grid, int panel, int p, double s);

}  // namespace ttvp
