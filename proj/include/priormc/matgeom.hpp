#pragma once

// Dense linear algebra and subspace geometry primitives: SVD with a
// deterministic sign convention, rank truncation, principal angles,
// support-subspace projections and orthonormal completions.

#include "priormc/core.hpp"

namespace priormc {

/// Matrix with orthonormal columns spanning a subspace of R^n.
struct SubspaceBasis {
    Mat basis;         ///< n x d, orthonormal columns
    int ambient_dim;   ///< n
    int subspace_dim;  ///< d

    SubspaceBasis() : ambient_dim(0), subspace_dim(0) {}
    explicit SubspaceBasis(Mat b)
        : basis(std::move(b)),
          ambient_dim(static_cast<int>(basis.rows())),
          subspace_dim(static_cast<int>(basis.cols())) {}
};

struct SvdFactors {
    SubspaceBasis U;
    Vec sigma;  ///< nonincreasing, nonnegative
    SubspaceBasis V;
};

/// Support of a rank-r matrix: the pair of its column/row subspaces.
struct SupportProjector {
    SubspaceBasis left;   ///< U_r
    SubspaceBasis right;  ///< V_r
};

/// Thin SVD A = U diag(sigma) V^T with singular values sorted nonincreasing and
/// each left singular vector's first nonzero entry made positive (a fixed sign
/// convention keeps downstream tests reproducible).
SvdFactors svd(const Mat& A);

/// Splits A into its best rank-r approximation and the residual, A = M_r + M_rplus.
std::pair<Mat, Mat> truncate_rank(const Mat& A, int r);

/// Principal angles between two subspaces, in [0, pi/2], sorted nonincreasing.
Vec principal_angles(const SubspaceBasis& A, const SubspaceBasis& B);

/// Orthogonal projection onto the support subspace
/// T = { P_U Z + Z P_V - P_U Z P_V }.
Mat project_T(const Mat& Z, const SupportProjector& T);

/// Projection onto the orthogonal complement of T: P_{U perp} Z P_{V perp}.
Mat project_T_perp(const Mat& Z, const SupportProjector& T);

/// Orthonormal basis of the orthogonal complement, so [A | result] spans R^n.
SubspaceBasis complete_orthobasis(const SubspaceBasis& A);

/// Validates the orthonormality invariant of a basis (Gram deviation in Frobenius norm).
double gram_deviation(const Mat& basis);

}  // namespace priormc
