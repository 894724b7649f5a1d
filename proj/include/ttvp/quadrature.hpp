#pragma once

#include <vector>

namespace ttvp {

/// Nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Jacobi rule for the weight (1 - x)^a (1 + x)^b on [-1, 1],
/// a, b > -1, computed by Golub-Welsch. Rules are cached; the returned
/// reference stays valid for the life of the program and is safe to share
/// across threads.
const GaussRule& gauss_jacobi(int n, double a, double b);

inline const GaussRule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

}  // namespace ttvp
