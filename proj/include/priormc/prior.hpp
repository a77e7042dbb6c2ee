#pragma once

// Prior-subspace machinery: weight operators Q = w P_U + P_{U perp}, the
// canonical joint decomposition of (subspace, prior subspace, weight) into an
// orthonormal frame with a triangular factor, leverage scores, coherence, and
// the reweighted sup-norms used by the sampling analysis.

#include "priormc/core.hpp"
#include "priormc/matgeom.hpp"

namespace priormc {

/// Q = w P_U + P_{U perp}: shrinks the prior subspace directions by w in (0,1].
struct WeightOperator {
    SubspaceBasis subspace;
    double weight = 1.0;

    /// Materialized n x n symmetric matrix with eigenvalues {w, 1}.
    Mat Q() const;
    /// Inverse: (1/w) P_U + P_{U perp}.
    Mat Qinv() const;
};

/// One-sided canonical frame aligning a subspace with its prior estimate.
/// B = [U_r U'_r U''] and B_tilde are orthonormal bases of R^n whose product
/// B^T B_tilde is the block rotation [[cos u, sin u, 0], [-sin u, cos u, 0], [0, 0, I]],
/// and the weight operator factors as Q = B O L B^T with L upper triangular,
/// L11 = Delta, L12 = (1 - w^2) sin(u) cos(u) / Delta, L22 = w / Delta,
/// Delta = sqrt(w^2 cos^2 u + sin^2 u), and ||L|| = 1.
struct CanonicalFrame {
    Mat B;        ///< n x n orthonormal
    Mat B_tilde;  ///< n x n orthonormal
    Mat O;        ///< n x n orthonormal
    Vec angles;   ///< principal angles u, nonincreasing, length r
    Vec Delta;    ///< diagonal of the r x r block Delta
    Mat L11, L12, L22;  ///< r x r diagonal blocks of L
    double weight = 1.0;
    int r = 0;

    /// Assembles the full n x n upper-triangular factor.
    Mat L_full() const;
};

/// Per-row / per-column leverage scores of a rank-r support (mean 1 each).
struct LeverageProfile {
    Vec mu;  ///< row scores, length n
    Vec nu;  ///< column scores, length n
    int rank = 0;
};

WeightOperator make_weight(const SubspaceBasis& subspace, double w);

CanonicalFrame canonical_decomposition(const SubspaceBasis& U,
                                       const SubspaceBasis& U_tilde, double w);

LeverageProfile leverage_scores(const SubspaceBasis& left, const SubspaceBasis& right);

/// Coherence: max leverage score across rows and columns; in [1, n/r].
double coherence(const SubspaceBasis& left, const SubspaceBasis& right);

/// Orthonormal bases for span(U u U_tilde) and span(V u V_tilde), dim <= 2r.
std::pair<SubspaceBasis, SubspaceBasis> breve_bases(const SubspaceBasis& U,
                                                    const SubspaceBasis& U_tilde,
                                                    const SubspaceBasis& V,
                                                    const SubspaceBasis& V_tilde);

/// max_ij sqrt(n / (mu_i r)) |Z_ij| sqrt(n / (nu_j r)).
double weighted_inf_norm(const Mat& Z, const LeverageProfile& lev);

/// Largest l2 norm over reweighted rows and reweighted columns of Z.
double weighted_inf2_norm(const Mat& Z, const LeverageProfile& lev);

}  // namespace priormc
