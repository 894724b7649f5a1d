#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "ttvp/errors.hpp"
#include "ttvp/quadrature.hpp"
#include "ttvp/solvers.hpp"
#include "ttvp/special.hpp"

namespace ttvp {

namespace {

constexpr int kSingularNodes = 32;
constexpr int kRegularNodes = 16;

// Normalised sqrt-coordinate of s on panel k, in [0, 1].
double sqrt_coordinate(const UniformGrid& grid, int panel, double s) {
    const double lo = std::sqrt(grid.node(panel));
    const double hi = std::sqrt(grid.node(panel + 1));
    return (std::sqrt(s) - lo) / (hi - lo);
}

double int_pow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

}  // namespace

double collocation_basis(const UniformGrid& grid, int panel, int p, double s) {
    return int_pow(sqrt_coordinate(grid, panel, s), p);
}

namespace {

/// Breakpoints t_lo = b_0 < ... < b_m = t_hi, graded toward t_hi so every piece lies at
/// least half its length away from tau. Keeps Gauss-Legendre accurate when tau is close.
std::vector<double> graded_breaks(double t_lo, double t_hi, double tau) {
    std::vector<double> right{t_hi};
    double r = t_hi;
    while (r - t_lo > 2.0 * (tau - r)) {
        r -= tau - r;
        right.push_back(r);
    }
    right.push_back(t_lo);
    return {right.rbegin(), right.rend()};
}

}  // namespace

double collocation_moment(double alpha, const UniformGrid& grid, int panel, int p, double tau) {
    const double t_lo = grid.node(panel);
    const double t_hi = grid.node(panel + 1);
    const double h = grid.step();
    if (!(tau > t_lo)) throw InvalidArgument("collocation_moment: target must lie beyond the panel start");
    const bool singular_end = tau <= t_hi;

    if (panel == 0 && singular_end) {
        // int_0^tau (tau-s)^{alpha-1} (s/h)^{p/2} ds = (tau/h)^{p/2} tau^alpha B(alpha, p/2+1)
        const double half_p = 0.5 * p;
        return std::pow(tau / h, half_p) * std::pow(tau, alpha) * beta_fn(alpha, half_p + 1.0);
    }

    if (singular_end) {
        // s = t_lo + (tau - t_lo)(1+x)/2, (tau - s)^{alpha-1} = ((tau-t_lo)/2)^{alpha-1} (1-x)^{alpha-1}
        const GaussRule& rule = gauss_jacobi(kSingularNodes, alpha - 1.0, 0.0);
        const double half = 0.5 * (tau - t_lo);
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double s = t_lo + half * (1.0 + rule.nodes[q]);
            sum += rule.weights[q] * collocation_basis(grid, panel, p, s);
        }
        return std::pow(half, alpha) * sum;
    }

    const std::vector<double> breaks = graded_breaks(t_lo, t_hi, tau);
    double total = 0.0;
    std::size_t first = 0;
    if (panel == 0) {
        // Leftmost piece carries the (s/h)^{p/2} endpoint behaviour: s = b (1+x)/2.
        const double half_p = 0.5 * p;
        const double b = breaks[1];
        const GaussRule& rule = gauss_jacobi(kSingularNodes, 0.0, half_p);
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double s = 0.5 * b * (1.0 + rule.nodes[q]);
            sum += rule.weights[q] * std::pow(tau - s, alpha - 1.0);
        }
        total += 0.5 * b * std::pow(0.5 * b / h, half_p) * sum;
        first = 1;
    }
    const GaussRule& rule = gauss_legendre(kRegularNodes);
    for (std::size_t piece = first; piece + 1 < breaks.size(); ++piece) {
        const double lo = breaks[piece];
        const double half = 0.5 * (breaks[piece + 1] - lo);
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double s = lo + half * (1.0 + rule.nodes[q]);
            sum += rule.weights[q] * std::pow(tau - s, alpha - 1.0) * collocation_basis(grid, panel, p, s);
        }
        total += half * sum;
    }
    return total;
}

// Moments are stored per target time: for target tau on panel k (collocation
// point) or at node t_{k+1}, entries [j * P + p] for panels j = 0..k, already
// divided by Gamma(alpha).
struct CollocationSolver::Plan {
    double alpha;
    UniformGrid grid;
    NonpolyCollocation method;
    int basis;
    // colloc[k][i]: moments for tau = t_k + c_i h
    std::vector<std::vector<std::vector<double>>> colloc;
    // node[k]: moments for tau = t_{k+1}
    std::vector<std::vector<double>> node;
    // basis values at the collocation points of panel k: psi[k][i * P + p]
    std::vector<std::vector<double>> psi;

    Plan(double a, UniformGrid g, NonpolyCollocation m) : alpha(a), grid(g), method(std::move(m)), basis(0) {
        method.validate();
        basis = method.basis_size();
        const int n = grid.count();
        const double inv_gamma = 1.0 / gamma_fn(alpha);
        auto moments_for = [&](double tau, int last_panel) {
            std::vector<double> out(static_cast<std::size_t>((last_panel + 1) * basis));
            for (int j = 0; j <= last_panel; ++j) {
                for (int p = 0; p < basis; ++p) {
                    out[static_cast<std::size_t>(j * basis + p)] =
                        inv_gamma * collocation_moment(alpha, grid, j, p, tau);
                }
            }
            return out;
        };
        colloc.resize(static_cast<std::size_t>(n));
        node.resize(static_cast<std::size_t>(n));
        psi.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            auto& ck = colloc[static_cast<std::size_t>(k)];
            auto& pk = psi[static_cast<std::size_t>(k)];
            pk.resize(static_cast<std::size_t>(basis * basis));
            for (std::size_t i = 0; i < method.points.size(); ++i) {
                const double c = method.points[i];
                const double tau = c == 1.0 ? grid.node(k + 1) : grid.node(k) + c * grid.step();
                ck.push_back(moments_for(tau, k));
                for (int p = 0; p < basis; ++p) {
                    pk[i * static_cast<std::size_t>(basis) + static_cast<std::size_t>(p)] =
                        collocation_basis(grid, k, p, tau);
                }
            }
            if (method.points.back() == 1.0) {
                node[static_cast<std::size_t>(k)] = ck.back();
            } else {
                node[static_cast<std::size_t>(k)] = moments_for(grid.node(k + 1), k);
            }
        }
    }
};

CollocationSolver::CollocationSolver(double alpha, UniformGrid grid, NonpolyCollocation method)
    : plan_(std::make_unique<Plan>(alpha, grid, std::move(method))) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

CollocationSolver::~CollocationSolver() = default;
CollocationSolver::CollocationSolver(CollocationSolver&&) noexcept = default;
CollocationSolver& CollocationSolver::operator=(CollocationSolver&&) noexcept = default;

const UniformGrid& CollocationSolver::grid() const noexcept { return plan_->grid; }
double CollocationSolver::alpha() const noexcept { return plan_->alpha; }

Trajectory CollocationSolver::solve(const ScalarField& g, double u0, const NewtonConfig& newton, int steps) const {
    newton.validate();
    const Plan& plan = *plan_;
    const int total = plan.grid.count();
    const int n = steps < 0 ? total : steps;
    if (n < 1 || n > total) throw InvalidArgument("collocation solve: step count out of range");
    const int P = plan.basis;
    const auto sP = static_cast<std::size_t>(P);
    const int npts = static_cast<int>(plan.method.points.size());

    std::vector<double> coeffs;  // coeffs[j * P + p]
    coeffs.reserve(static_cast<std::size_t>(n) * sP);
    std::vector<double> u(static_cast<std::size_t>(n) + 1);
    u[0] = u0;

    Eigen::VectorXd c = Eigen::VectorXd::Zero(P);
    c(0) = g(0.0, u0);
    if (!std::isfinite(c(0))) throw DivergenceError(0, u0);

    Eigen::VectorXd hist(npts);
    Eigen::VectorXd F(npts);
    Eigen::MatrixXd J(npts, P);
    Eigen::VectorXd uval(npts);

    for (int k = 0; k < n; ++k) {
        const auto sk = static_cast<std::size_t>(k);
        const auto& ck = plan.colloc[sk];
        const auto& pk = plan.psi[sk];
        std::vector<double> taus(static_cast<std::size_t>(npts));
        for (int i = 0; i < npts; ++i) {
            const double cpt = plan.method.points[static_cast<std::size_t>(i)];
            taus[static_cast<std::size_t>(i)] =
                cpt == 1.0 ? plan.grid.node(k + 1) : plan.grid.node(k) + cpt * plan.grid.step();
            const auto& mom = ck[static_cast<std::size_t>(i)];
            double acc = u0;
            for (std::size_t q = 0; q < sk * sP; ++q) acc += mom[q] * coeffs[q];
            hist(i) = acc;
        }
        auto evaluate = [&](const Eigen::VectorXd& cc) {
            for (int i = 0; i < npts; ++i) {
                const auto& mom = ck[static_cast<std::size_t>(i)];
                double z = 0.0;
                double uu = hist(i);
                for (int p = 0; p < P; ++p) {
                    z += pk[static_cast<std::size_t>(i) * sP + static_cast<std::size_t>(p)] * cc(p);
                    uu += mom[sk * sP + static_cast<std::size_t>(p)] * cc(p);
                }
                uval(i) = uu;
                F(i) = z - g(taus[static_cast<std::size_t>(i)], uu);
            }
        };

        evaluate(c);
        bool converged = false;
        for (int it = 0; it < newton.max_iter; ++it) {
            for (int i = 0; i < npts; ++i) {
                const double tau = taus[static_cast<std::size_t>(i)];
                const double uu = uval(i);
                const double du = 1e-7 * std::max(1.0, std::abs(uu));
                const double gu = (g(tau, uu + du) - g(tau, uu - du)) / (2.0 * du);
                const auto& mom = ck[static_cast<std::size_t>(i)];
                for (int p = 0; p < P; ++p) {
                    J(i, p) = pk[static_cast<std::size_t>(i) * sP + static_cast<std::size_t>(p)] -
                              gu * mom[sk * sP + static_cast<std::size_t>(p)];
                }
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
            if (!lu.isInvertible()) throw SingularSystemError(k);
            const Eigen::VectorXd delta = lu.solve(F);
            c -= delta;
            evaluate(c);
            if (!c.allFinite() || !F.allFinite()) throw DivergenceError(k + 1, u[sk]);
            if (delta.lpNorm<Eigen::Infinity>() <= newton.tol * std::max(1.0, c.lpNorm<Eigen::Infinity>())) {
                converged = true;
                break;
            }
        }
        if (!converged) throw ImplicitStepError(k + 1, F.lpNorm<Eigen::Infinity>(), u[sk]);
        for (int p = 0; p < P; ++p) coeffs.push_back(c(p));

        const auto& nm = plan.node[sk];
        double acc = u0;
        for (std::size_t q = 0; q < (sk + 1) * sP; ++q) acc += nm[q] * coeffs[q];
        if (!std::isfinite(acc)) throw DivergenceError(k + 1, u[sk]);
        u[sk + 1] = acc;

        // Next panel starts from the value of z at the end of this one.
        if (k + 1 < n) {
            double z_end = 0.0;
            for (int p = 0; p < P; ++p) z_end += c(p);  // psi_p(t_{k+1}) = 1 for all p
            c.setZero();
            c(0) = z_end;
        }
    }
    return Trajectory(UniformGrid(plan.grid.node(n), n), std::move(u));
}

}  // namespace ttvp
