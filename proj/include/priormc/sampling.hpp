#pragma once

// Measurement machinery: Bernoulli entry-sampling operators (uniform and
// leverage-weighted), their rotated counterparts, Gaussian measurement
// ensembles and an empirical restricted-isometry probe.

#include "priormc/core.hpp"
#include "priormc/matgeom.hpp"
#include "priormc/prior.hpp"

#include <string>

namespace priormc {

/// Bernoulli observation pattern with per-entry probabilities.
struct SamplingMask {
    int n = 0;
    Mat probs;       ///< p_ij in (0, 1]
    Mat indicators;  ///< realized 0/1 draws
    std::uint64_t seed = 0;

    double l() const { return probs.minCoeff(); }  ///< smallest probability
    double h() const { return probs.maxCoeff(); }  ///< largest probability
};

/// m random sensing matrices of i.i.d. N(0, 1/m) entries.
struct GaussianEnsemble {
    int m = 0;
    int n = 0;
    std::vector<Mat> G;
    std::uint64_t seed = 0;
};

SamplingMask uniform_mask(int n, double p, std::uint64_t seed);

/// p_ij proportional to (mu_i + nu_j) r log(n) / n, scaled by `multiplier`
/// and clamped to [1e-6, 1].
SamplingMask leveraged_mask(const LeverageProfile& lev, int r, int n,
                            double multiplier, std::uint64_t seed);

/// Draws fresh indicators for the same probabilities (derived seed).
SamplingMask redraw(const SamplingMask& mask, std::uint64_t seed);

/// R_p: entry (i,j) becomes eps_ij M_ij / p_ij (unbiased masked estimate).
Mat apply_Rp(const Mat& M, const SamplingMask& mask);

/// P_p: plain projection onto the observed entries.
Mat apply_Pp(const Mat& M, const SamplingMask& mask);

/// Rotated operator: B_L^T R_p(B_L Zbar B_R^T) B_R.
Mat rotated_Rp(const Mat& Zbar, const SamplingMask& mask, const Mat& B_L, const Mat& B_R);

/// Rotated support projection: B_L^T P_p(B_L Zbar B_R^T) B_R.
Mat rotated_Pp(const Mat& Zbar, const SamplingMask& mask, const Mat& B_L, const Mat& B_R);

GaussianEnsemble make_gaussian_ensemble(int m, int n, std::uint64_t seed);

/// y_k = <G_k, M>.
Vec gaussian_measure(const Mat& M, const GaussianEnsemble& ens);

/// Empirical lower bound on the rank-r restricted isometry constant:
/// max over random rank-r unit-Frobenius X of | ||R_m(X)||_2 - 1 |.
double estimate_rip(const GaussianEnsemble& ens, int r, int trials, std::uint64_t seed);

/// Power-iteration estimate of || P_T - P_T R_p P_T || on matrix space.
/// The operator is self-adjoint; the estimate is the dominant |eigenvalue|.
double isometry_deviation_on_T(const SupportProjector& T, const SamplingMask& mask,
                               int max_iters = 500, double tol = 1e-6);

/// Serializes observed entries as CSV rows `i,j,p` after a `n,seed` header pair.
void save_mask_csv(const SamplingMask& mask, const std::string& path);

}  // namespace priormc
