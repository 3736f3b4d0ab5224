#include "ndsys/linalg.hpp"

#include <algorithm>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace ndsys {

double spectral_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

double smallest_singular_value(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& s = svd.singularValues();
    return s(s.size() - 1);
}

ComplexMatrix orthonormal_basis(const ComplexMatrix& m, double rank_tol) {
    if (m.size() == 0) return ComplexMatrix(m.rows(), 0);
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    const double cut = rank_tol * s(0);
    while (r < s.size() && s(r) > cut && s(r) > 0.0) ++r;
    return svd.matrixU().leftCols(r);
}

ComplexMatrix orthogonal_complement(const ComplexMatrix& q) {
    const Eigen::Index n = q.rows();
    if (q.cols() == 0) return ComplexMatrix::Identity(n, n);
    Eigen::HouseholderQR<ComplexMatrix> qr(q);
    ComplexMatrix full = qr.householderQ() * ComplexMatrix::Identity(n, n);
    return full.rightCols(n - q.cols());
}

ComplexMatrix polar_isometry(const ComplexMatrix& m) {
    if (m.size() == 0) return m;
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

double relative_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = nd(rng);
            const double im = nd(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

ComplexMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
    const ComplexMatrix g = random_gaussian(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = std::abs(r(i, i));
        if (a > 0.0) q.col(i) *= r(i, i) / a;
    }
    return q;
}

}  // namespace ndsys
