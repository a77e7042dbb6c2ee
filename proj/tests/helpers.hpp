#pragma once

// Shared fixtures for the unit tests: Haar-random orthonormal bases and
// subspace pairs with prescribed principal angles.

#include "priormc/core.hpp"
#include "priormc/matgeom.hpp"

namespace priormc::testing {

inline SubspaceBasis haar(Rng& rng, int n, int d) {
    Mat G = rng.gaussian_matrix(n, d);
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = qr.householderQ() * Mat::Identity(n, d);
    return SubspaceBasis(std::move(Q));
}

/// Pair of r-dimensional subspaces of R^n (n >= 2r) whose principal angles are
/// exactly the given values, embedded at a random orientation.
struct AnglePair {
    SubspaceBasis U, U_tilde;
};

inline AnglePair prescribed_angles(Rng& rng, int n, const Vec& angles) {
    const int r = static_cast<int>(angles.size());
    const SubspaceBasis frame = haar(rng, n, 2 * r);
    Mat U(n, r), Ut(n, r);
    for (int i = 0; i < r; ++i) {
        U.col(i) = frame.basis.col(i);
        Ut.col(i) = std::cos(angles(i)) * frame.basis.col(i) +
                    std::sin(angles(i)) * frame.basis.col(r + i);
    }
    return {SubspaceBasis(std::move(U)), SubspaceBasis(std::move(Ut))};
}

inline double spectral_norm(const Mat& A) {
    return Eigen::JacobiSVD<Mat>(A).singularValues()(0);
}

inline double nuclear_norm(const Mat& A) {
    return Eigen::JacobiSVD<Mat>(A).singularValues().sum();
}

}  // namespace priormc::testing
