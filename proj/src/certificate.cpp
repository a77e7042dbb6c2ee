#include "priormc/certificate.hpp"

#include <cmath>

namespace priormc {

Mat project_Tbar(const Mat& Zbar, int r) {
    const int n = static_cast<int>(Zbar.rows());
    Mat out = Zbar;
    out.block(r, r, n - r, n - r).setZero();
    return out;
}

double isometry_on_Tbar(const CanonicalFrame& left, const CanonicalFrame& right,
                        const SamplingMask& mask) {
    const SupportProjector T{SubspaceBasis(left.B.leftCols(left.r)),
                             SubspaceBasis(right.B.leftCols(right.r))};
    return isometry_deviation_on_T(T, mask);
}

int default_batch_count(double c4, int n) {
    return static_cast<int>(std::ceil(std::max(std::log(c4 * n), 1.0)));
}

SamplingMask GolfingPlan::union_mask() const {
    SamplingMask mask;
    mask.n = batches.empty() ? 0 : batches.front().n;
    mask.probs = target_p;
    mask.seed = batches.empty() ? 0 : batches.front().seed;
    mask.indicators = Mat::Zero(mask.n, mask.n);
    for (const SamplingMask& b : batches)
        mask.indicators = mask.indicators.cwiseMax(b.indicators);
    return mask;
}

Mat sign_matrix(const CanonicalFrame& left, const CanonicalFrame& right, const Mat& M_r) {
    const int n = static_cast<int>(M_r.rows());
    const int r = left.r;
    require(right.r == r && left.B.rows() == n && right.B.rows() == n,
            "sign_matrix: dimension mismatch");
    const Mat Mbar11 =
        left.B.leftCols(r).transpose() * M_r * right.B.leftCols(r);
    const Mat core = left.L11 * Mbar11 * right.L11;
    Eigen::JacobiSVD<Mat> dec(core, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (dec.singularValues()(r - 1) <= 1e-12 * std::max(dec.singularValues()(0), 1e-300))
        throw InvalidInput("sign_matrix: rotated core is rank deficient");
    Mat S = Mat::Zero(n, n);
    S.block(0, 0, r, r) = dec.matrixU() * dec.matrixV().transpose();
    return S;
}

Mat build_S_prime(const CanonicalFrame& left, const CanonicalFrame& right, const Mat& Sbar) {
    const int n = static_cast<int>(Sbar.rows());
    const int r = left.r;
    require(right.r == r && Sbar.cols() == n, "build_S_prime: dimension mismatch");
    const Mat S11 = Sbar.block(0, 0, r, r);
    Mat out = Mat::Zero(n, n);
    out.block(0, 0, r, r) = left.L11 * S11 * right.L11;
    out.block(0, r, r, r) = left.L11 * S11 * right.L12;
    out.block(r, 0, r, r) = left.L12.transpose() * S11 * right.L11;
    return out;
}

GolfingPlan make_golfing_plan(const Mat& target_p, int K, std::uint64_t seed) {
    require(K >= 1, "make_golfing_plan: need at least one batch");
    require(target_p.minCoeff() > 0.0 && target_p.maxCoeff() <= 1.0,
            "make_golfing_plan: probabilities must lie in (0, 1]");
    const int n = static_cast<int>(target_p.rows());
    GolfingPlan plan;
    plan.K = K;
    plan.target_p = target_p;
    plan.q_probs = Mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            plan.q_probs(i, j) = 1.0 - std::pow(1.0 - target_p(i, j), 1.0 / K);
    plan.batches.reserve(K);
    SamplingMask proto;
    proto.n = n;
    proto.probs = plan.q_probs;
    for (int k = 0; k < K; ++k)
        plan.batches.push_back(redraw(proto, derive_seed(seed, {0xb47c4u, static_cast<std::uint64_t>(k)})));
    return plan;
}

std::pair<Mat, CertificateReport> construct_certificate(const Mat& S_prime_bar,
                                                        const GolfingPlan& plan,
                                                        const CanonicalFrame& left,
                                                        const CanonicalFrame& right) {
    const int n = static_cast<int>(S_prime_bar.rows());
    const int r = left.r;
    Mat W = S_prime_bar;  // residual, always in the rotated support
    Mat Lambda = Mat::Zero(n, n);
    CertificateReport report;
    report.decay_trace.push_back(W.norm());
    for (const SamplingMask& batch : plan.batches) {
        const Mat RW = rotated_Rp(W, batch, left.B, right.B);
        Lambda += RW;
        W = project_Tbar(W - RW, r);
        report.decay_trace.push_back(W.norm());
    }
    CertificateReport verified =
        verify_certificate(Lambda, S_prime_bar, plan, left, right, plan.target_p.minCoeff());
    verified.decay_trace = report.decay_trace;
    return {Lambda, verified};
}

CertificateReport verify_certificate(const Mat& Lambda_bar, const Mat& S_prime_bar,
                                     const GolfingPlan& plan, const CanonicalFrame& left,
                                     const CanonicalFrame& right, double l) {
    require(l > 0.0 && l <= 1.0, "verify_certificate: l must lie in (0, 1]");
    const int n = static_cast<int>(Lambda_bar.rows());
    const int r = left.r;
    CertificateReport report;
    report.residual_frob = (S_prime_bar - project_Tbar(Lambda_bar, r)).norm();
    const Mat off = Lambda_bar.block(r, r, n - r, n - r);
    report.offsupport_spec = Eigen::JacobiSVD<Mat>(off).singularValues()(0);
    const SamplingMask support = plan.union_mask();
    report.support_violation =
        (Lambda_bar - rotated_Pp(Lambda_bar, support, left.B, right.B)).norm();
    report.pass_residual = report.residual_frob <= l / (4.0 * std::sqrt(2.0));
    report.pass_spectral = report.offsupport_spec <= 0.5;
    report.pass_support = report.support_violation <= 1e-10;
    return report;
}

}  // namespace priormc
