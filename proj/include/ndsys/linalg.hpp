#pragma once

#include <random>

#include "ndsys/types.hpp"

namespace ndsys {

/// Largest singular value; 0 for empty matrices.
double spectral_norm(const ComplexMatrix& m);

/// Smallest singular value of a square matrix; 0 for empty matrices.
double smallest_singular_value(const ComplexMatrix& m);

/// Orthonormal basis of ran(m). Singular values at or below
/// rank_tol * sigma_max are dropped.
ComplexMatrix orthonormal_basis(const ComplexMatrix& m, double rank_tol = 1e-10);

/// Orthonormal basis of the orthogonal complement of ran(q), q with
/// orthonormal columns. Deterministic (Householder completion).
ComplexMatrix orthogonal_complement(const ComplexMatrix& q);

/// Nearest matrix with orthonormal columns (polar factor U V^*).
ComplexMatrix polar_isometry(const ComplexMatrix& m);

/// ||a - b||_F / max(1, ||b||_F).
double relative_residual(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
ComplexMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng);

ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

}  // namespace ndsys
