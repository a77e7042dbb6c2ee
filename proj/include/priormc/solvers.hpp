#pragma once

// Convex solvers for (weighted) nuclear-norm completion and recovery, the
// baseline algorithms (diagonal reweighting, weighted least-squares, RNNH) and
// the iterative reweighting loops. The core engine minimizes ||X'||_* subject
// to a linear measurement constraint on W1^{-1} X' W2^{-1}, by alternating a
// singular-value soft-threshold step with projection onto the constraint set.

#include "priormc/core.hpp"
#include "priormc/matgeom.hpp"
#include "priormc/prior.hpp"
#include "priormc/sampling.hpp"

#include <vector>

namespace priormc {

struct SolverConfig {
    int max_iters = 2000;
    double abs_tol = 1e-8;     ///< stop when the primal residual drops below this
    double penalty = 1.0;      ///< multiplier on the auto-scaled splitting penalty
    double noise_level = 0.0;  ///< radius e of the measurement-space constraint ball
};

struct SolveResult {
    Mat X_hat;                   ///< recovered matrix (original variable)
    int iterations = 0;
    double primal_residual = 0.0;
    double relative_error = -1.0;  ///< vs ground truth when provided, else -1
    bool converged = false;
    double objective = 0.0;  ///< nuclear norm of the returned substituted iterate
    Mat dual;                ///< approximate subgradient of the substituted objective
};

/// Singular value soft-thresholding: U max(sigma - tau, 0) V^T.
Mat svt(const Mat& Z, double tau);

/// Distance of `dual` from the subdifferential of ||.||_* at Xprime, combining
/// the on-support mismatch with any spectral excess off support.
double subgradient_gap(const Mat& Xprime, const Mat& dual);

// --- weighted / standard programs -------------------------------------------

SolveResult solve_weighted_completion(const Mat& Y, const SamplingMask& mask,
                                      const WeightOperator& QU, const WeightOperator& QV,
                                      const SolverConfig& cfg, const Mat* truth = nullptr);

SolveResult solve_standard_completion(const Mat& Y, const SamplingMask& mask,
                                      const SolverConfig& cfg, const Mat* truth = nullptr);

SolveResult solve_weighted_recovery(const Vec& y, const GaussianEnsemble& ens,
                                    const WeightOperator& QU, const WeightOperator& QV,
                                    const SolverConfig& cfg, const Mat* truth = nullptr);

SolveResult solve_standard_recovery(const Vec& y, const GaussianEnsemble& ens,
                                    const SolverConfig& cfg, const Mat* truth = nullptr);

/// General symmetric positive definite weighting, used by the baselines and by
/// scaling-invariance checks. W1inv/W2inv must be the exact inverses.
SolveResult solve_completion_general(const Mat& Y, const SamplingMask& mask,
                                     const Mat& W1, const Mat& W1inv, const Mat& W2,
                                     const Mat& W2inv, const SolverConfig& cfg,
                                     const Mat* truth = nullptr);

SolveResult solve_recovery_general(const Vec& y, const GaussianEnsemble& ens,
                                   const Mat& W1, const Mat& W1inv, const Mat& W2,
                                   const Mat& W2inv, const SolverConfig& cfg,
                                   const Mat* truth = nullptr);

// --- baselines ---------------------------------------------------------------

/// With exact subspaces, fit the r x r core by least squares on the observed entries.
SolveResult perfect_prior_least_squares(const Mat& Y, const SamplingMask& mask,
                                        const SubspaceBasis& U, const SubspaceBasis& V,
                                        const Mat* truth = nullptr);

/// Standard completion after diagonal row/column reweighting by leverage scores.
SolveResult baseline_diagonal(const Mat& Y, const SamplingMask& mask,
                              const LeverageProfile& lev, const SolverConfig& cfg,
                              const Mat* truth = nullptr);

/// One reweighted-least-squares pass: minimize ||W_L^{1/2} X W_R^{1/2}||_F^2
/// over the unobserved entries, weights from the prior matrix estimate.
SolveResult baseline_wls(const Mat& Y, const SamplingMask& mask, const Mat& M_prime,
                         double gamma, const SolverConfig& cfg, const Mat* truth = nullptr);

/// Reweighted nuclear-norm heuristic: a single weighted solve with
/// W = (M' M'^T + delta^2 I)^{-1/2} on each side.
SolveResult baseline_rnnh(const Mat& Y, const SamplingMask& mask, const Mat& M_prime,
                          double delta, const SolverConfig& cfg, const Mat* truth = nullptr);

// --- iterative reweighting ----------------------------------------------------

enum class ReweightVariant { IRW, IRNN };

/// Initializes with a standard solve, then repeatedly rebuilds weights from the
/// current iterate (subspace weights for IRW, RNNH weights for IRNN) and re-solves.
/// `objective_trace`, when given, records the weighted nuclear objective of each
/// iterate under that iteration's weights.
SolveResult iterative_reweighted(const Mat& Y, const SamplingMask& mask,
                                 ReweightVariant variant, int iterations, int r,
                                 double w_or_delta, const SolverConfig& cfg,
                                 const Mat* truth = nullptr,
                                 std::vector<double>* objective_trace = nullptr);

}  // namespace priormc
