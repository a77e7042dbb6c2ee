#include "priormc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace priormc {

namespace {

double nuclear_norm(const Mat& A) {
    return Eigen::JacobiSVD<Mat>(A).singularValues().sum();
}

double rel_error(const Mat& X, const Mat* truth) {
    if (truth == nullptr) return -1.0;
    return (X - *truth).norm() / std::max(truth->norm(), 1e-300);
}

/// Linear measurement map acting on the substituted variable X':
///   forward(X') = meas(W1inv X' W2inv),
/// where meas is either R_p restricted to the observed entries (with 1/p
/// scaling) or a Gaussian ensemble. The Gram matrix of forward/adjoint is
/// factored once so that projections onto the constraint set are exact solves.
class ConstraintProjector {
public:
    // Entry-sampling constructor.
    ConstraintProjector(const SamplingMask& mask, const Mat& Y, const Mat& W1inv,
                        const Mat& W2inv, double noise_level)
        : W1inv_(W1inv), W2inv_(W2inv), n_(mask.n), noise_(noise_level), entry_mode_(true) {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (mask.indicators(i, j) > 0.5) {
                    rows_.push_back(i);
                    cols_.push_back(j);
                    pvals_.push_back(mask.probs(i, j));
                }
        m_ = static_cast<int>(rows_.size());
        b_ = Vec(m_);
        for (int k = 0; k < m_; ++k) b_(k) = Y(rows_[k], cols_[k]);
        const Mat A2 = W1inv_ * W1inv_;
        const Mat B2 = W2inv_ * W2inv_;
        Mat gram(m_, m_);
        for (int k = 0; k < m_; ++k)
            for (int l = 0; l <= k; ++l) {
                const double g =
                    A2(rows_[k], rows_[l]) * B2(cols_[k], cols_[l]) / (pvals_[k] * pvals_[l]);
                gram(k, l) = g;
                gram(l, k) = g;
            }
        factor_.compute(gram);
    }

    // Gaussian-ensemble constructor.
    ConstraintProjector(const GaussianEnsemble& ens, const Vec& y, const Mat& W1inv,
                        const Mat& W2inv, double noise_level)
        : W1inv_(W1inv), W2inv_(W2inv), n_(ens.n), noise_(noise_level), entry_mode_(false) {
        m_ = ens.m;
        b_ = y;
        sensing_.resize(m_, n_ * n_);
        for (int k = 0; k < m_; ++k) {
            const Mat conj = W1inv_ * ens.G[k] * W2inv_;
            sensing_.row(k) = Eigen::Map<const Vec>(conj.data(), n_ * n_).transpose();
        }
        Mat gram = sensing_ * sensing_.transpose();
        factor_.compute(gram);
    }

    int measurement_count() const { return m_; }
    const Vec& target() const { return b_; }

    Vec forward(const Mat& Xprime) const {
        if (entry_mode_) {
            const Mat t = W1inv_ * Xprime * W2inv_;
            Vec out(m_);
            for (int k = 0; k < m_; ++k) out(k) = t(rows_[k], cols_[k]) / pvals_[k];
            return out;
        }
        return sensing_ * Eigen::Map<const Vec>(Xprime.data(), n_ * n_);
    }

    Mat adjoint(const Vec& c) const {
        if (entry_mode_) {
            Mat S = Mat::Zero(n_, n_);
            for (int k = 0; k < m_; ++k) S(rows_[k], cols_[k]) = c(k) / pvals_[k];
            return W1inv_ * S * W2inv_;
        }
        Vec flat = sensing_.transpose() * c;
        return Eigen::Map<const Mat>(flat.data(), n_, n_);
    }

    /// Projects onto { X' : forward(X') = b } (noiseless) or moves to the
    /// nearest affine slice of the noise ball's boundary (noisy).
    Mat project(const Mat& Xprime) const {
        Vec resid = forward(Xprime) - b_;
        if (noise_ > 0.0) {
            const double norm = resid.norm();
            if (norm <= noise_) return Xprime;
            resid *= (1.0 - noise_ / norm);
        }
        return Xprime - adjoint(factor_.solve(resid));
    }

private:
    Mat W1inv_, W2inv_;
    int n_ = 0, m_ = 0;
    double noise_ = 0.0;
    bool entry_mode_ = true;
    std::vector<int> rows_, cols_;
    std::vector<double> pvals_;
    Vec b_;
    Mat sensing_;  // Gaussian mode only: m x n^2 rows of vec(W1inv G_k W2inv)
    Eigen::LDLT<Mat> factor_;
};

/// Alternating proximal/projection loop on min ||X'||_* s.t. constraint.
SolveResult run_engine(const ConstraintProjector& proj, const Mat& W1inv, const Mat& W2inv,
                       const SolverConfig& cfg, const Mat* truth) {
    require(cfg.max_iters >= 1 && cfg.abs_tol > 0.0 && cfg.penalty > 0.0,
            "solver: invalid configuration");
    const int n = static_cast<int>(W1inv.rows());

    // Minimum-norm feasible start; also sets the scale for the penalty.
    Mat Z = proj.project(Mat::Zero(n, n));
    const double scale = std::max(Eigen::JacobiSVD<Mat>(Z).singularValues()(0), 1e-12);
    const double rho = cfg.penalty * 20.0 / scale;  // threshold ~ 5% of top singular value
    const double tau = 1.0 / rho;

    // Tolerances track the scale of the substituted variable so that rescaling
    // both weight factors leaves the iteration unchanged.
    const double tol = cfg.abs_tol * std::max(scale, 1e-12);

    Mat U = Mat::Zero(n, n);
    Mat best_Z = Z;
    double best_obj = nuclear_norm(Z);

    SolveResult out;
    double primal = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        const Mat X = svt(Z - U, tau);
        Z = proj.project(X + U);
        U += X - Z;
        primal = (X - Z).norm();
        const double obj = nuclear_norm(Z);
        if (obj < best_obj) {
            best_obj = obj;
            best_Z = Z;
        }
        if (primal <= tol) {
            ++it;
            break;
        }
    }

    out.iterations = it;
    out.primal_residual = primal;
    out.converged = (primal <= tol);
    out.objective = best_obj;
    out.dual = -rho * U;  // approximate subgradient of ||.||_* at the solution
    out.X_hat = W1inv * best_Z * W2inv;
    out.relative_error = rel_error(out.X_hat, truth);
    return out;
}

Mat spd_inverse_sqrt(const Mat& A, bool inverse) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(A);
    Vec vals = eig.eigenvalues();
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        require(vals(i) > 0.0, "weight construction: matrix is not positive definite");
        vals(i) = inverse ? 1.0 / std::sqrt(vals(i)) : std::sqrt(vals(i));
    }
    return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

Mat svt(const Mat& Z, double tau) {
    require(tau >= 0.0, "svt: threshold must be nonnegative");
    Eigen::JacobiSVD<Mat> dec(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vec sigma = dec.singularValues();
    for (Eigen::Index i = 0; i < sigma.size(); ++i) sigma(i) = std::max(sigma(i) - tau, 0.0);
    return dec.matrixU() * sigma.asDiagonal() * dec.matrixV().transpose();
}

double subgradient_gap(const Mat& Xprime, const Mat& dual) {
    Eigen::JacobiSVD<Mat> dec(Xprime, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec sigma = dec.singularValues();
    const double cutoff = 1e-6 * std::max(sigma(0), 1e-300);
    int r = 0;
    while (r < sigma.size() && sigma(r) > cutoff) ++r;
    SupportProjector T{SubspaceBasis(dec.matrixU().leftCols(r)),
                       SubspaceBasis(dec.matrixV().leftCols(r))};
    const Mat sign_part = dec.matrixU().leftCols(r) * dec.matrixV().leftCols(r).transpose();
    const double on_support = (project_T(dual, T) - sign_part).norm();
    const double off_norm =
        Eigen::JacobiSVD<Mat>(project_T_perp(dual, T)).singularValues()(0);
    return on_support + std::max(0.0, off_norm - 1.0);
}

SolveResult solve_completion_general(const Mat& Y, const SamplingMask& mask,
                                     const Mat& W1, const Mat& W1inv, const Mat& W2,
                                     const Mat& W2inv, const SolverConfig& cfg,
                                     const Mat* truth) {
    (void)W1;
    (void)W2;
    ConstraintProjector proj(mask, Y, W1inv, W2inv, cfg.noise_level);
    return run_engine(proj, W1inv, W2inv, cfg, truth);
}

SolveResult solve_recovery_general(const Vec& y, const GaussianEnsemble& ens,
                                   const Mat& W1, const Mat& W1inv, const Mat& W2,
                                   const Mat& W2inv, const SolverConfig& cfg,
                                   const Mat* truth) {
    (void)W1;
    (void)W2;
    require(y.size() == ens.m, "solve_recovery: measurement length mismatch");
    ConstraintProjector proj(ens, y, W1inv, W2inv, cfg.noise_level);
    return run_engine(proj, W1inv, W2inv, cfg, truth);
}

SolveResult solve_weighted_completion(const Mat& Y, const SamplingMask& mask,
                                      const WeightOperator& QU, const WeightOperator& QV,
                                      const SolverConfig& cfg, const Mat* truth) {
    return solve_completion_general(Y, mask, QU.Q(), QU.Qinv(), QV.Q(), QV.Qinv(), cfg, truth);
}

SolveResult solve_standard_completion(const Mat& Y, const SamplingMask& mask,
                                      const SolverConfig& cfg, const Mat* truth) {
    const Mat I = Mat::Identity(mask.n, mask.n);
    return solve_completion_general(Y, mask, I, I, I, I, cfg, truth);
}

SolveResult solve_weighted_recovery(const Vec& y, const GaussianEnsemble& ens,
                                    const WeightOperator& QU, const WeightOperator& QV,
                                    const SolverConfig& cfg, const Mat* truth) {
    return solve_recovery_general(y, ens, QU.Q(), QU.Qinv(), QV.Q(), QV.Qinv(), cfg, truth);
}

SolveResult solve_standard_recovery(const Vec& y, const GaussianEnsemble& ens,
                                    const SolverConfig& cfg, const Mat* truth) {
    const Mat I = Mat::Identity(ens.n, ens.n);
    return solve_recovery_general(y, ens, I, I, I, I, cfg, truth);
}

SolveResult perfect_prior_least_squares(const Mat& Y, const SamplingMask& mask,
                                        const SubspaceBasis& U, const SubspaceBasis& V,
                                        const Mat* truth) {
    const int n = mask.n;
    const int r = U.subspace_dim;
    require(V.subspace_dim == r && U.ambient_dim == n && V.ambient_dim == n,
            "perfect_prior_least_squares: dimension mismatch");
    std::vector<std::pair<int, int>> obs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (mask.indicators(i, j) > 0.5) obs.emplace_back(i, j);
    const int m = static_cast<int>(obs.size());
    Mat A(m, r * r);
    Vec b(m);
    for (int k = 0; k < m; ++k) {
        const auto [i, j] = obs[k];
        for (int a = 0; a < r; ++a)
            for (int c = 0; c < r; ++c) A(k, a * r + c) = U.basis(i, a) * V.basis(j, c);
        b(k) = mask.probs(i, j) * Y(i, j);  // unscaled observed value
    }
    Eigen::ColPivHouseholderQR<Mat> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < r * r)
        throw Underdetermined("perfect_prior_least_squares: too few observations");
    const Vec cvec = qr.solve(b);
    Mat C(r, r);
    for (int a = 0; a < r; ++a)
        for (int c = 0; c < r; ++c) C(a, c) = cvec(a * r + c);
    SolveResult out;
    out.X_hat = U.basis * C * V.basis.transpose();
    out.iterations = 1;
    out.converged = true;
    out.primal_residual = (A * cvec - b).norm();
    out.objective = nuclear_norm(out.X_hat);
    out.relative_error = rel_error(out.X_hat, truth);
    return out;
}

SolveResult baseline_diagonal(const Mat& Y, const SamplingMask& mask,
                              const LeverageProfile& lev, const SolverConfig& cfg,
                              const Mat* truth) {
    if (lev.mu.minCoeff() <= 0.0 || lev.nu.minCoeff() <= 0.0)
        throw DegenerateScore("baseline_diagonal: zero leverage score");
    const int n = mask.n;
    const double rn = static_cast<double>(lev.rank) / n;
    Vec dl(n), dr(n);
    for (int i = 0; i < n; ++i) {
        dl(i) = std::sqrt(lev.mu(i) * rn);
        dr(i) = std::sqrt(lev.nu(i) * rn);
    }
    dl /= dl.maxCoeff();
    dr /= dr.maxCoeff();
    Mat W1 = dl.asDiagonal();
    Mat W2 = dr.asDiagonal();
    Mat W1inv = dl.cwiseInverse().asDiagonal();
    Mat W2inv = dr.cwiseInverse().asDiagonal();
    return solve_completion_general(Y, mask, W1, W1inv, W2, W2inv, cfg, truth);
}

SolveResult baseline_wls(const Mat& Y, const SamplingMask& mask, const Mat& M_prime,
                         double gamma, const SolverConfig& cfg, const Mat* truth) {
    require(gamma > 0.0, "baseline_wls: gamma must be positive");
    const int n = mask.n;
    const Mat WL =
        (M_prime * M_prime.transpose() + gamma * Mat::Identity(n, n)).inverse();
    const Mat WR =
        (M_prime.transpose() * M_prime + gamma * Mat::Identity(n, n)).inverse();

    // Quadratic objective tr(WL X WR X^T)/2 with observed entries pinned;
    // conjugate gradients over the free entries.
    Mat X = Mat::Zero(n, n);
    std::vector<std::pair<int, int>> free_set;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (mask.indicators(i, j) > 0.5)
                X(i, j) = mask.probs(i, j) * Y(i, j);
            else
                free_set.emplace_back(i, j);
        }
    auto restrict_free = [&](const Mat& G) {
        Vec v(free_set.size());
        for (size_t k = 0; k < free_set.size(); ++k)
            v(k) = G(free_set[k].first, free_set[k].second);
        return v;
    };
    auto expand_free = [&](const Vec& v) {
        Mat G = Mat::Zero(n, n);
        for (size_t k = 0; k < free_set.size(); ++k)
            G(free_set[k].first, free_set[k].second) = v(k);
        return G;
    };
    auto apply_op = [&](const Vec& v) { return restrict_free(WL * expand_free(v) * WR); };

    SolveResult out;
    out.iterations = 0;
    if (!free_set.empty()) {
        // Solve A xf = -rhs where rhs couples the fixed entries into the free ones.
        const Vec rhs = restrict_free(WL * X * WR);
        Vec xf = Vec::Zero(free_set.size());
        Vec res = -rhs;
        Vec dir = res;
        double rs = res.squaredNorm();
        const double stop = 1e-24 * std::max(1.0, rhs.squaredNorm());
        const int cap = std::max<int>(2000, static_cast<int>(free_set.size()) + 10);
        int it = 0;
        for (; it < cap && rs > stop; ++it) {
            const Vec ad = apply_op(dir);
            const double alpha = rs / std::max(dir.dot(ad), 1e-300);
            xf += alpha * dir;
            res -= alpha * ad;
            const double rs_new = res.squaredNorm();
            dir = res + (rs_new / rs) * dir;
            rs = rs_new;
        }
        out.iterations = it;
        X += expand_free(xf);
    }
    out.X_hat = X;
    out.converged = true;
    out.primal_residual = 0.0;
    out.objective = nuclear_norm(X);
    out.relative_error = rel_error(X, truth);
    return out;
}

SolveResult baseline_rnnh(const Mat& Y, const SamplingMask& mask, const Mat& M_prime,
                          double delta, const SolverConfig& cfg, const Mat* truth) {
    require(delta > 0.0, "baseline_rnnh: delta must be positive");
    const int n = mask.n;
    const Mat GL = M_prime * M_prime.transpose() + delta * delta * Mat::Identity(n, n);
    const Mat GR = M_prime.transpose() * M_prime + delta * delta * Mat::Identity(n, n);
    const Mat W1 = spd_inverse_sqrt(GL, true);
    const Mat W2 = spd_inverse_sqrt(GR, true);
    const Mat W1inv = spd_inverse_sqrt(GL, false);
    const Mat W2inv = spd_inverse_sqrt(GR, false);
    return solve_completion_general(Y, mask, W1, W1inv, W2, W2inv, cfg, truth);
}

SolveResult iterative_reweighted(const Mat& Y, const SamplingMask& mask,
                                 ReweightVariant variant, int iterations, int r,
                                 double w_or_delta, const SolverConfig& cfg,
                                 const Mat* truth, std::vector<double>* objective_trace) {
    require(iterations >= 1, "iterative_reweighted: need at least one iteration");
    SolveResult current = solve_standard_completion(Y, mask, cfg, truth);
    for (int k = 0; k < iterations; ++k) {
        if (variant == ReweightVariant::IRW) {
            const SvdFactors f = svd(current.X_hat);
            const SubspaceBasis Ut(f.U.basis.leftCols(r));
            const SubspaceBasis Vt(f.V.basis.leftCols(r));
            const WeightOperator QU = make_weight(Ut, w_or_delta);
            const WeightOperator QV = make_weight(Vt, w_or_delta);
            current = solve_weighted_completion(Y, mask, QU, QV, cfg, truth);
            if (objective_trace) {
                objective_trace->push_back(nuclear_norm(QU.Q() * current.X_hat * QV.Q()));
            }
        } else {
            const Mat M_est = current.X_hat;
            const int n = mask.n;
            const Mat W1 = spd_inverse_sqrt(
                M_est * M_est.transpose() + w_or_delta * w_or_delta * Mat::Identity(n, n),
                true);
            const Mat W2 = spd_inverse_sqrt(
                M_est.transpose() * M_est + w_or_delta * w_or_delta * Mat::Identity(n, n),
                true);
            current = baseline_rnnh(Y, mask, M_est, w_or_delta, cfg, truth);
            if (objective_trace) {
                // Majorization check data: objective of the old and new iterates
                // under the same (k-th) weights, appended as a before/after pair.
                objective_trace->push_back(nuclear_norm(W1 * M_est * W2));
                objective_trace->push_back(nuclear_norm(W1 * current.X_hat * W2));
            }
        }
    }
    return current;
}

}  // namespace priormc
