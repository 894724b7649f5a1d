#include "ttvp/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "ttvp/errors.hpp"
#include "ttvp/special.hpp"

namespace ttvp {

namespace {

GaussRule build_gauss_jacobi(int n, double a, double b) {
    // Three-term recurrence of the monic Jacobi polynomials.
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
    const double ab = a + b;
    diag(0) = (b - a) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = (b * b - a * a) / (s * (s + 2.0));
        const double num = 4.0 * k * (k + a) * (k + b) * (k + ab);
        const double den = s * s * (s + 1.0) * (s - 1.0);
        sub(k - 1) = std::sqrt(num / den);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    if (n > 1) {
        eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    } else {
        Eigen::MatrixXd m(1, 1);
        m(0, 0) = diag(0);
        eig.compute(m);
    }
    const double mu0 = std::pow(2.0, ab + 1.0) * beta_fn(a + 1.0, b + 1.0);
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double v = eig.eigenvectors()(0, k);
        rule.nodes[static_cast<std::size_t>(k)] = eig.eigenvalues()(k);
        rule.weights[static_cast<std::size_t>(k)] = mu0 * v * v;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_jacobi(int n, double a, double b) {
    if (n < 1) throw InvalidArgument("gauss_jacobi: need at least one node");
    if (!(a > -1.0) || !(b > -1.0)) throw InvalidArgument("gauss_jacobi: exponents must exceed -1");
    static std::mutex mutex;
    static std::map<std::tuple<int, double, double>, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{n, a, b}];
    if (!slot) slot = std::make_unique<GaussRule>(build_gauss_jacobi(n, a, b));
    return *slot;
}

}  // namespace ttvp
