#include "priormc/prior.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace priormc {

Mat WeightOperator::Q() const {
    const int n = subspace.ambient_dim;
    const Mat& B = subspace.basis;
    return Mat::Identity(n, n) - (1.0 - weight) * (B * B.transpose());
}

Mat WeightOperator::Qinv() const {
    const int n = subspace.ambient_dim;
    const Mat& B = subspace.basis;
    return Mat::Identity(n, n) + (1.0 / weight - 1.0) * (B * B.transpose());
}

WeightOperator make_weight(const SubspaceBasis& subspace, double w) {
    require(w > 0.0 && w <= 1.0, "make_weight: weight must lie in (0, 1]");
    require(gram_deviation(subspace.basis) <= 1e-8,
            "make_weight: basis is not orthonormal");
    return WeightOperator{subspace, w};
}

Mat CanonicalFrame::L_full() const {
    const int n = static_cast<int>(B.rows());
    Mat L = Mat::Identity(n, n);
    L.block(0, 0, r, r) = L11;
    L.block(0, r, r, r) = L12;
    L.block(r, r, r, r) = L22;
    return L;
}

CanonicalFrame canonical_decomposition(const SubspaceBasis& U,
                                       const SubspaceBasis& U_tilde, double w) {
    const int n = U.ambient_dim;
    const int r = U.subspace_dim;
    require(U_tilde.ambient_dim == n && U_tilde.subspace_dim == r,
            "canonical_decomposition: dimension mismatch");
    require(2 * r <= n, "canonical_decomposition: need 2r <= n");
    require(w > 0.0 && w <= 1.0, "canonical_decomposition: weight must lie in (0, 1]");

    // Align the two bases so that U1^T Ut1 = diag(cos u) with angles nonincreasing.
    Eigen::JacobiSVD<Mat> dec(U.basis.transpose() * U_tilde.basis,
                              Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat P = dec.matrixU();
    Mat S = dec.matrixV();
    Vec cosines = dec.singularValues();  // nonincreasing => angles nondecreasing
    // Reverse so that the largest angle comes first.
    P = P.rowwise().reverse().eval();
    S = S.rowwise().reverse().eval();
    cosines = cosines.reverse().eval();

    const Mat U1 = U.basis * P;         // n x r
    const Mat Ut1 = U_tilde.basis * S;  // n x r

    Vec u(r), sines(r);
    for (int i = 0; i < r; ++i) {
        const double c = std::clamp(cosines(i), -1.0, 1.0);
        u(i) = std::acos(c);
        sines(i) = std::sin(u(i));
    }

    // U' column i spans the part of the prior direction orthogonal to U, with the
    // sign fixed so that (U')^T Ut1 = -diag(sin u). Zero angles leave that column
    // unconstrained; fill those from an orthonormal completion afterwards.
    Mat W = Ut1 - U1 * cosines.asDiagonal();
    Mat Uprime = Mat::Zero(n, r);
    std::vector<int> missing;
    for (int i = 0; i < r; ++i) {
        if (sines(i) >= 1e-8) {
            Uprime.col(i) = -W.col(i) / W.col(i).norm();
        } else {
            missing.push_back(i);
        }
    }
    if (!missing.empty()) {
        // Complement of span([U1, valid U' columns]).
        Mat known(n, 2 * r - static_cast<int>(missing.size()));
        known.leftCols(r) = U1;
        int col = r;
        for (int i = 0; i < r; ++i)
            if (sines(i) >= 1e-8) known.col(col++) = Uprime.col(i);
        SubspaceBasis comp = complete_orthobasis(SubspaceBasis(known));
        int take = 0;
        for (int idx : missing) Uprime.col(idx) = comp.basis.col(take++);
    }

    Mat UU(n, 2 * r);
    UU.leftCols(r) = U1;
    UU.rightCols(r) = Uprime;
    SubspaceBasis Udpp = complete_orthobasis(SubspaceBasis(UU));

    Mat B(n, n);
    B.leftCols(r) = U1;
    B.block(0, r, n, r) = Uprime;
    B.rightCols(n - 2 * r) = Udpp.basis;

    // Partner frame: B^T B_tilde realizes the cos/sin block rotation.
    Mat Utprime = U1 * sines.asDiagonal() + Uprime * cosines.asDiagonal();
    Mat B_tilde(n, n);
    B_tilde.leftCols(r) = Ut1;
    B_tilde.block(0, r, n, r) = Utprime;
    B_tilde.rightCols(n - 2 * r) = Udpp.basis;

    CanonicalFrame F;
    F.B = B;
    F.B_tilde = B_tilde;
    F.angles = u;
    F.weight = w;
    F.r = r;
    F.Delta = Vec(r);
    Vec l12(r), l22(r);
    for (int i = 0; i < r; ++i) {
        const double c = std::cos(u(i)), s = sines(i);
        const double d = std::sqrt(w * w * c * c + s * s);
        F.Delta(i) = d;
        l12(i) = (1.0 - w * w) * s * c / d;
        l22(i) = w / d;
    }
    F.L11 = F.Delta.asDiagonal();
    F.L12 = l12.asDiagonal();
    F.L22 = l22.asDiagonal();

    // Orthogonal middle factor: Q = B O L B^T  =>  O = (B^T Q B) L^{-1}.
    const Mat Q = Mat::Identity(n, n) - (1.0 - w) * (Ut1 * Ut1.transpose());
    const Mat G = B.transpose() * Q * B;
    Mat Linv = Mat::Identity(n, n);
    for (int i = 0; i < r; ++i) {
        Linv(i, i) = 1.0 / F.Delta(i);
        Linv(r + i, r + i) = 1.0 / l22(i);
        Linv(i, r + i) = -l12(i) / (F.Delta(i) * l22(i));
    }
    F.O = G * Linv;
    return F;
}

LeverageProfile leverage_scores(const SubspaceBasis& left, const SubspaceBasis& right) {
    require(left.subspace_dim == right.subspace_dim,
            "leverage_scores: rank mismatch between bases");
    const int r = left.subspace_dim;
    auto scores = [r](const SubspaceBasis& basis) {
        const int n = basis.ambient_dim;
        Vec s(n);
        for (int i = 0; i < n; ++i)
            s(i) = (static_cast<double>(n) / r) * basis.basis.row(i).squaredNorm();
        return s;
    };
    LeverageProfile lev;
    lev.mu = scores(left);
    lev.nu = scores(right);
    lev.rank = r;
    return lev;
}

double coherence(const SubspaceBasis& left, const SubspaceBasis& right) {
    const LeverageProfile lev = leverage_scores(left, right);
    return std::max(lev.mu.maxCoeff(), lev.nu.maxCoeff());
}

std::pair<SubspaceBasis, SubspaceBasis> breve_bases(const SubspaceBasis& U,
                                                    const SubspaceBasis& U_tilde,
                                                    const SubspaceBasis& V,
                                                    const SubspaceBasis& V_tilde) {
    auto span_union = [](const SubspaceBasis& A, const SubspaceBasis& B) {
        require(A.ambient_dim == B.ambient_dim, "breve_bases: dimension mismatch");
        Mat stacked(A.ambient_dim, A.subspace_dim + B.subspace_dim);
        stacked.leftCols(A.subspace_dim) = A.basis;
        stacked.rightCols(B.subspace_dim) = B.basis;
        // Rank-revealing QR keeps only the independent directions.
        Eigen::ColPivHouseholderQR<Mat> qr(stacked);
        qr.setThreshold(1e-10);
        const int rank = static_cast<int>(qr.rank());
        Mat Q = qr.householderQ();
        return SubspaceBasis(Q.leftCols(rank));
    };
    return {span_union(U, U_tilde), span_union(V, V_tilde)};
}

static void check_scores(const LeverageProfile& lev) {
    if (lev.mu.minCoeff() <= 0.0 || lev.nu.minCoeff() <= 0.0)
        throw DegenerateScore("reweighted norm undefined: zero leverage score");
}

double weighted_inf_norm(const Mat& Z, const LeverageProfile& lev) {
    check_scores(lev);
    const double n = static_cast<double>(Z.rows());
    const double r = static_cast<double>(lev.rank);
    double best = 0.0;
    for (Eigen::Index i = 0; i < Z.rows(); ++i)
        for (Eigen::Index j = 0; j < Z.cols(); ++j) {
            const double w =
                std::sqrt(n / (lev.mu(i) * r)) * std::abs(Z(i, j)) * std::sqrt(n / (lev.nu(j) * r));
            best = std::max(best, w);
        }
    return best;
}

double weighted_inf2_norm(const Mat& Z, const LeverageProfile& lev) {
    check_scores(lev);
    const double n = static_cast<double>(Z.rows());
    const double r = static_cast<double>(lev.rank);
    double best = 0.0;
    for (Eigen::Index i = 0; i < Z.rows(); ++i)
        best = std::max(best, std::sqrt(n / (lev.mu(i) * r)) * Z.row(i).norm());
    for (Eigen::Index j = 0; j < Z.cols(); ++j)
        best = std::max(best, std::sqrt(n / (lev.nu(j) * r)) * Z.col(j).norm());
    return best;
}

}  // namespace priormc
