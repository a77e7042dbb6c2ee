#include "priormc/theory.hpp"

#include <algorithm>
#include <cmath>

namespace priormc {

namespace {

void check_quality(const PriorQuality& q) {
    require(q.u >= 0.0 && q.u <= M_PI / 2 && q.v >= 0.0 && q.v <= M_PI / 2,
            "constants: angles must lie in [0, pi/2]");
    require(q.lambda > 0.0 && q.lambda <= 1.0 && q.rho > 0.0 && q.rho <= 1.0,
            "constants: weights must lie in (0, 1]");
}

/// sqrt((w^4 cos^2 a + sin^2 a) / (w^2 cos^2 a + sin^2 a))
double ratio_root(double a, double w) {
    const double c2 = std::cos(a) * std::cos(a);
    const double s2 = std::sin(a) * std::sin(a);
    return std::sqrt((w * w * w * w * c2 + s2) / (w * w * c2 + s2));
}

}  // namespace

TheoryConstants constants(const PriorQuality& q) {
    check_quality(q);
    const double cu = std::cos(q.u), su = std::sin(q.u);
    const double cv = std::cos(q.v), sv = std::sin(q.v);
    const double l = q.lambda, p = q.rho;
    const double A = l * l * cu * cu + su * su;       // left denominator
    const double B = p * p * cv * cv + sv * sv;       // right denominator
    const double topL = l * l * l * l * cu * cu + su * su;
    const double topR = p * p * p * p * cv * cv + sv * sv;

    TheoryConstants c;
    c.c1 = ratio_root(q.u, l) + ratio_root(q.v, p);
    c.c2 = std::sqrt(2.0 * (1.0 - l * l) * su * su / A) +
           std::sqrt(2.0 * (1.0 - p * p) * sv * sv / B);
    c.c3 = 1.5 * (std::sqrt(1.0 - l * l) * su / std::sqrt(A) +
                  std::sqrt(1.0 - p * p) * sv / std::sqrt(B));
    c.c4 = ratio_root(q.u, l) * ratio_root(q.v, p);
    c.c5 = (std::sqrt(A / B) + std::sqrt(B / A)) * (std::sqrt(topL) + std::sqrt(topR));
    return c;
}

double rip_threshold(const TheoryConstants& c) {
    const double m = std::max(c.c1, c.c2) / std::sqrt(30.0);
    return (0.9 - m) / (0.9 + m);
}

CompletionBound completion_probability_bound(const PriorQuality& q, double eta,
                                             double eta_breve, int r, int n,
                                             double constant) {
    require(eta >= 1.0, "completion_probability_bound: coherence must be >= 1");
    require(n >= 2, "completion_probability_bound: n must be >= 2");
    const TheoryConstants c = constants(q);
    const double log_factor = std::max(std::log(c.c4 * n), 1.0);
    const double base = eta * r * std::log(static_cast<double>(n)) / n;
    const double amplify = std::max(c.c5 * (1.0 + std::sqrt(eta_breve / eta)), 1.0);
    CompletionBound out;
    out.probability = std::clamp(constant * log_factor * base * amplify, 1e-300, 1.0);
    out.c3_condition = (c.c3 <= 0.125);
    return out;
}

OptimalWeight optimal_weight(double theta) {
    OptimalWeight out;
    if (theta <= 0.0) {
        out.lambda = 0.0;
        out.degenerate = true;  // zero weight is outside the admissible range
        return out;
    }
    if (theta >= M_PI / 2) {
        out.lambda = 1.0;
        out.degenerate = true;  // tangent diverges; prior carries no information
        return out;
    }
    const double t2 = std::tan(theta) * std::tan(theta);
    const double lam2 = std::sqrt(t2 * t2 + t2) - t2;
    out.lambda = std::sqrt(lam2);
    return out;
}

Mat project_T_tilde_rotated(const Mat& Zbar, int r) {
    const int n = static_cast<int>(Zbar.rows());
    require(Zbar.cols() == n && 2 * r <= n, "project_T_tilde_rotated: bad dimensions");
    Mat out = Mat::Zero(n, n);
    out.block(r, r, r, n - r) = Zbar.block(r, r, r, n - r);          // blocks (2,2), (2,3)
    out.block(2 * r, r, n - 2 * r, r) = Zbar.block(2 * r, r, n - 2 * r, r);  // block (3,2)
    return out;
}

static double nuclear_norm(const Mat& A) {
    return Eigen::JacobiSVD<Mat>(A).singularValues().sum();
}

NullspaceSlack nullspace_audit(const Mat& H, const CanonicalFrame& left,
                               const CanonicalFrame& right, const TheoryConstants& c,
                               double residual_nuc) {
    const int n = static_cast<int>(H.rows());
    require(H.cols() == n && left.B.rows() == n && right.B.rows() == n,
            "nullspace_audit: dimension mismatch");
    const int r = left.r;
    SupportProjector T{SubspaceBasis(left.B.leftCols(r)), SubspaceBasis(right.B.leftCols(r))};
    const Mat Hbar = left.B.transpose() * H * right.B;
    NullspaceSlack out;
    out.lhs = nuclear_norm(project_T_perp(H, T));
    out.rhs = c.c1 * nuclear_norm(project_T(H, T)) +
              c.c2 * nuclear_norm(project_T_tilde_rotated(Hbar, r)) + 2.0 * residual_nuc;
    out.slack = out.rhs - out.lhs;
    return out;
}

}  // namespace priormc
