#include "priormc/sampling.hpp"

#include <cmath>
#include <fstream>

namespace priormc {

static SamplingMask draw_mask(int n, Mat probs, std::uint64_t seed) {
    SamplingMask mask;
    mask.n = n;
    mask.probs = std::move(probs);
    mask.indicators = Mat::Zero(n, n);
    mask.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            mask.indicators(i, j) = (rng.uniform01() < mask.probs(i, j)) ? 1.0 : 0.0;
    return mask;
}

SamplingMask uniform_mask(int n, double p, std::uint64_t seed) {
    require(n >= 1, "uniform_mask: n must be positive");
    require(p > 0.0 && p <= 1.0, "uniform_mask: p must lie in (0, 1]");
    return draw_mask(n, Mat::Constant(n, n, p), seed);
}

SamplingMask leveraged_mask(const LeverageProfile& lev, int r, int n,
                            double multiplier, std::uint64_t seed) {
    require(multiplier > 0.0, "leveraged_mask: multiplier must be positive");
    Mat probs(n, n);
    const double scale = multiplier * r * std::log(static_cast<double>(n)) / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            probs(i, j) = std::clamp(scale * (lev.mu(i) + lev.nu(j)), 1e-6, 1.0);
    return draw_mask(n, std::move(probs), seed);
}

SamplingMask redraw(const SamplingMask& mask, std::uint64_t seed) {
    return draw_mask(mask.n, mask.probs, seed);
}

Mat apply_Rp(const Mat& M, const SamplingMask& mask) {
    require(M.rows() == mask.n && M.cols() == mask.n, "apply_Rp: size mismatch");
    return (mask.indicators.array() * M.array() / mask.probs.array()).matrix();
}

Mat apply_Pp(const Mat& M, const SamplingMask& mask) {
    require(M.rows() == mask.n && M.cols() == mask.n, "apply_Pp: size mismatch");
    return (mask.indicators.array() * M.array()).matrix();
}

static void check_frame(const Mat& B, int n) {
    require(B.rows() == n && B.cols() == n &&
                (B.transpose() * B - Mat::Identity(n, n)).norm() <= 1e-8,
            "rotated operator: frame is not orthonormal");
}

Mat rotated_Rp(const Mat& Zbar, const SamplingMask& mask, const Mat& B_L, const Mat& B_R) {
    check_frame(B_L, mask.n);
    check_frame(B_R, mask.n);
    return B_L.transpose() * apply_Rp(B_L * Zbar * B_R.transpose(), mask) * B_R;
}

Mat rotated_Pp(const Mat& Zbar, const SamplingMask& mask, const Mat& B_L, const Mat& B_R) {
    check_frame(B_L, mask.n);
    check_frame(B_R, mask.n);
    return B_L.transpose() * apply_Pp(B_L * Zbar * B_R.transpose(), mask) * B_R;
}

GaussianEnsemble make_gaussian_ensemble(int m, int n, std::uint64_t seed) {
    require(m >= 1 && n >= 1, "make_gaussian_ensemble: sizes must be positive");
    GaussianEnsemble ens;
    ens.m = m;
    ens.n = n;
    ens.seed = seed;
    ens.G.reserve(m);
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int k = 0; k < m; ++k) ens.G.push_back(scale * rng.gaussian_matrix(n, n));
    return ens;
}

Vec gaussian_measure(const Mat& M, const GaussianEnsemble& ens) {
    require(M.rows() == ens.n && M.cols() == ens.n, "gaussian_measure: size mismatch");
    Vec y(ens.m);
    for (int k = 0; k < ens.m; ++k) y(k) = (ens.G[k].array() * M.array()).sum();
    return y;
}

double estimate_rip(const GaussianEnsemble& ens, int r, int trials, std::uint64_t seed) {
    require(trials >= 1, "estimate_rip: need at least one trial");
    Rng rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Mat A = rng.gaussian_matrix(ens.n, r);
        Mat B = rng.gaussian_matrix(ens.n, r);
        Mat X = A * B.transpose();
        X /= X.norm();
        worst = std::max(worst, std::abs(gaussian_measure(X, ens).norm() - 1.0));
    }
    return worst;
}

double isometry_deviation_on_T(const SupportProjector& T, const SamplingMask& mask,
                               int max_iters, double tol) {
    // Self-adjoint operator A(Z) = P_T(Z) - P_T(R_p(P_T(Z))) on matrix space;
    // power iteration with a Rayleigh-quotient stop returns the dominant |eigenvalue|.
    Rng rng(derive_seed(mask.seed, {0x150u}));
    Mat Z = project_T(rng.gaussian_matrix(mask.n, mask.n), T);
    Z /= Z.norm();
    double prev = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Mat PZ = project_T(Z, T);
        Mat AZ = PZ - project_T(apply_Rp(PZ, mask), T);
        const double norm = AZ.norm();
        if (norm <= 1e-14) return 0.0;
        const double rayleigh = std::abs((Z.array() * AZ.array()).sum());
        Z = AZ / norm;
        if (it > 0 && std::abs(rayleigh - prev) <= tol * std::max(1.0, rayleigh))
            return rayleigh;
        prev = rayleigh;
    }
    return prev;
}

void save_mask_csv(const SamplingMask& mask, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "save_mask_csv: cannot open " + path);
    out << "n," << mask.n << "\n";
    out << "seed," << mask.seed << "\n";
    out << "i,j,p\n";
    for (int i = 0; i < mask.n; ++i)
        for (int j = 0; j < mask.n; ++j)
            if (mask.indicators(i, j) > 0.5) out << i << "," << j << "," << mask.probs(i, j) << "\n";
}

}  // namespace priormc
