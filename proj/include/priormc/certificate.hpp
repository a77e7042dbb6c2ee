#pragma once

// Dual-certificate laboratory: the sign matrix of a weighted instance, the
// associated on-support target S', and the golfing construction that builds a
// certificate from independent sampling batches while halving the residual.

#include "priormc/core.hpp"
#include "priormc/matgeom.hpp"
#include "priormc/prior.hpp"
#include "priormc/sampling.hpp"

#include <vector>

namespace priormc {

/// Sampling split into K independent batches whose union matches a target
/// observation probability: (1 - q_ij)^K = 1 - p_ij.
struct GolfingPlan {
    int K = 0;
    Mat q_probs;
    std::vector<SamplingMask> batches;
    Mat target_p;

    /// Mask whose indicators are the union of all batch observations.
    SamplingMask union_mask() const;
};

struct CertificateReport {
    double residual_frob = 0.0;     ///< || S' - P_T(Lambda) ||_F
    double offsupport_spec = 0.0;   ///< || P_{T perp}(Lambda) ||
    double support_violation = 0.0; ///< || Lambda - P_p(Lambda) ||_F
    std::vector<double> decay_trace;  ///< per-iteration || W^k ||_F
    bool pass_residual = false;
    bool pass_spectral = false;
    bool pass_support = false;
};

/// Sign matrix in rotated coordinates: blockdiag(Ubar Vbar^T, 0) from the SVD
/// of L11 Mbar11 R11, where Mbar is the rotated rank-r matrix. Rank r,
/// unit spectral norm, Frobenius norm sqrt(r).
Mat sign_matrix(const CanonicalFrame& left, const CanonicalFrame& right, const Mat& M_r);

/// On-support target: the rotated image of the sign matrix under the
/// triangular factors, supported on the first block row/column.
Mat build_S_prime(const CanonicalFrame& left, const CanonicalFrame& right, const Mat& Sbar);

GolfingPlan make_golfing_plan(const Mat& target_p, int K, std::uint64_t seed);

/// Runs the golfing recursion W^0 = S', W^k = (P_T - P_T R_q P_T)(W^{k-1}),
/// Lambda = sum_k R_q(W^{k-1}), in rotated coordinates.
std::pair<Mat, CertificateReport> construct_certificate(const Mat& S_prime_bar,
                                                        const GolfingPlan& plan,
                                                        const CanonicalFrame& left,
                                                        const CanonicalFrame& right);

/// Evaluates the three certificate conditions with thresholds
/// l / (4 sqrt(2)), 1/2, and 1e-10 (exact sampling support).
CertificateReport verify_certificate(const Mat& Lambda_bar, const Mat& S_prime_bar,
                                     const GolfingPlan& plan, const CanonicalFrame& left,
                                     const CanonicalFrame& right, double l);

/// Projection onto the rotated support: zero the lower-right (n-r) x (n-r) block.
Mat project_Tbar(const Mat& Zbar, int r);

/// Power-iteration estimate of || P_Tbar - P_Tbar R_p_bar P_Tbar ||. By
/// unitary invariance this equals the unrotated deviation on the support
/// spanned by the frames' leading columns.
double isometry_on_Tbar(const CanonicalFrame& left, const CanonicalFrame& right,
                        const SamplingMask& mask);

/// Number of golfing batches: ceil(max(log(c4 n), 1)).
int default_batch_count(double c4, int n);

}  // namespace priormc
