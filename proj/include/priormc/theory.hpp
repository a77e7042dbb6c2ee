#pragma once

// Closed-form evaluation of the recovery/completion constants, the restricted
// isometry threshold, the sampling-probability bound, the optimal weight
// formula, and a nullspace-style audit of solver errors.

#include "priormc/core.hpp"
#include "priormc/matgeom.hpp"
#include "priormc/prior.hpp"

namespace priormc {

/// Largest principal angles between true and prior subspaces plus the weights.
struct PriorQuality {
    double u = 0.0;      ///< largest left principal angle, radians
    double v = 0.0;      ///< largest right principal angle, radians
    double lambda = 1.0; ///< left weight, in (0, 1]
    double rho = 1.0;    ///< right weight, in (0, 1]
};

struct TheoryConstants {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;
};

struct CompletionBound {
    double probability = 0.0;   ///< sampling-probability requirement, clamped to (0, 1]
    bool c3_condition = false;  ///< whether c3 <= 1/8 holds
};

struct NullspaceSlack {
    double lhs = 0.0;    ///< nuclear norm of the off-support part of H
    double rhs = 0.0;    ///< c1 * on-support + c2 * auxiliary + residual terms
    double slack = 0.0;  ///< rhs - lhs (nonnegative when the inequality holds)
};

TheoryConstants constants(const PriorQuality& q);

/// (0.9 - max(c1, c2)/sqrt(30)) / (0.9 + max(c1, c2)/sqrt(30)); may be
/// negative, which signals an unsatisfiable isometry requirement.
double rip_threshold(const TheoryConstants& c);

/// Sampling-probability requirement
/// constant * max(log(c4 n), 1) * (eta r log n / n) * max(c5 (1 + sqrt(eta_breve/eta)), 1),
/// clamped to (0, 1].
CompletionBound completion_probability_bound(const PriorQuality& q, double eta,
                                             double eta_breve, int r, int n,
                                             double constant = 1.0);

/// lambda = (sqrt(tan^4 t + tan^2 t) - tan^2 t)^{1/2}; approximately
/// sqrt(tan t) for small angles. The same expression optimizes both the
/// recovery and the completion constants.
struct OptimalWeight {
    double lambda = 0.0;
    bool degenerate = false;  ///< theta at (or beyond) the endpoints
};
OptimalWeight optimal_weight(double theta);

/// Checks ||off-support(H)||_* <= c1 ||on-support(H)||_* + c2 ||aux(H)||_* + 2 residual_nuc,
/// where the auxiliary subspace keeps the middle blocks of the rotated error.
NullspaceSlack nullspace_audit(const Mat& H, const CanonicalFrame& left,
                               const CanonicalFrame& right, const TheoryConstants& c,
                               double residual_nuc);

/// Projection onto the auxiliary block subspace in rotated coordinates:
/// keeps blocks (2,2), (2,3) and (3,2) of the 3 x 3 block partition (r, r, n-2r).
Mat project_T_tilde_rotated(const Mat& Zbar, int r);

}  // namespace priormc
