#include "priormc/matgeom.hpp"

#include <algorithm>
#include <cmath>

namespace priormc {

double gram_deviation(const Mat& basis) {
    const Eigen::Index d = basis.cols();
    return (basis.transpose() * basis - Mat::Identity(d, d)).norm();
}

SvdFactors svd(const Mat& A) {
    require(A.allFinite(), "svd: input has non-finite entries");
    Eigen::JacobiSVD<Mat> dec(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Mat U = dec.matrixU();
    Mat V = dec.matrixV();
    Vec sigma = dec.singularValues();
    // Deterministic sign convention: first nonzero entry of each left vector positive.
    for (Eigen::Index k = 0; k < U.cols(); ++k) {
        for (Eigen::Index i = 0; i < U.rows(); ++i) {
            if (std::abs(U(i, k)) > 1e-12) {
                if (U(i, k) < 0.0) {
                    U.col(k) = -U.col(k);
                    V.col(k) = -V.col(k);
                }
                break;
            }
        }
    }
    SvdFactors out;
    out.U = SubspaceBasis(std::move(U));
    out.sigma = std::move(sigma);
    out.V = SubspaceBasis(std::move(V));
    return out;
}

std::pair<Mat, Mat> truncate_rank(const Mat& A, int r) {
    require(r >= 1 && r <= std::min(A.rows(), A.cols()),
            "truncate_rank: rank out of range");
    const SvdFactors f = svd(A);
    const Mat& U = f.U.basis;
    const Mat& V = f.V.basis;
    Mat M_r = U.leftCols(r) * f.sigma.head(r).asDiagonal() * V.leftCols(r).transpose();
    Mat M_rplus = A - M_r;
    return {std::move(M_r), std::move(M_rplus)};
}

Vec principal_angles(const SubspaceBasis& A, const SubspaceBasis& B) {
    require(A.ambient_dim == B.ambient_dim,
            "principal_angles: ambient dimension mismatch");
    Eigen::JacobiSVD<Mat> dec(A.basis.transpose() * B.basis);
    Vec cosines = dec.singularValues();  // nonincreasing
    const Eigen::Index d = cosines.size();
    Vec angles(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double c = std::clamp(cosines(i), -1.0, 1.0);
        // Reverse order: largest angle (smallest cosine) first.
        angles(d - 1 - i) = std::acos(c);
    }
    return angles;
}

Mat project_T(const Mat& Z, const SupportProjector& T) {
    require(Z.rows() == T.left.ambient_dim && Z.cols() == T.right.ambient_dim,
            "project_T: dimension mismatch");
    const Mat& U = T.left.basis;
    const Mat& V = T.right.basis;
    const Mat UtZ = U.transpose() * Z;        // r x n
    const Mat ZV = Z * V;                     // n x r
    return U * UtZ + ZV * V.transpose() - U * (UtZ * V) * V.transpose();
}

Mat project_T_perp(const Mat& Z, const SupportProjector& T) {
    return Z - project_T(Z, T);
}

SubspaceBasis complete_orthobasis(const SubspaceBasis& A) {
    const int n = A.ambient_dim;
    const int d = A.subspace_dim;
    require(d < n, "complete_orthobasis: subspace already fills the ambient space");
    Eigen::HouseholderQR<Mat> qr(A.basis);
    Mat Q = qr.householderQ();  // n x n
    return SubspaceBasis(Q.rightCols(n - d));
}

}  // namespace priormc
