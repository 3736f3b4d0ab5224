#pragma once

#include <vector>

#include "ndsys/system.hpp"

namespace ndsys {

struct TorusScanReport {
    double max_norm = 0.0;
    Point argmax;
    std::size_t samples = 0;
    bool refined = false;
    /// max_norm <= 1 + tol. Only a sampled verdict.
    bool dissipative = false;
};

/// Sup of ||zeta G|| over a torus sample: m^N grid for N <= 3, Sobol points
/// above, optionally followed by gradient ascent from the best sample.
TorusScanReport dissipativity_scan(const MultiLSDS& sys, std::size_t samples, bool refine,
                                   double tol = 1e-9);

/// min(32^N, 1e5)
std::size_t default_scan_samples(std::size_t n);

struct ConservativityCertificate {
    double gram_sum = 0.0;      // ||sum G_k* G_k - I||
    double gram_cross = 0.0;    // max_{k != j} ||G_k* G_j||
    double cogram_sum = 0.0;    // ||sum G_k G_k* - I||
    double cogram_cross = 0.0;  // max_{k != j} ||G_k G_j*||
    bool pass = false;

    double max_residual() const;
};

ConservativityCertificate conservativity_check(const MultiLSDS& sys, double tol = 1e-9);

struct BlockStructure {
    std::vector<ComplexMatrix> h_minus;  // orthonormal bases of ran G_k*
    std::vector<ComplexMatrix> h_plus;   // orthonormal bases of ran G_k
    std::vector<ComplexMatrix> blocks;   // G_k^0 = Q_k+^* G_k Q_k-
    std::vector<Eigen::Index> dims_minus;
    std::vector<Eigen::Index> dims_plus;
    double orthogonality_residual = 0.0;
    double unitarity_residual = 0.0;      // ||G0* G0 - I|| for the block-diagonal G0
    double reconstruction_residual = 0.0; // ||sum_k Q_k+ G_k^0 Q_k-^* - sum_k G_k||
};

/// Throws PreconditionError when the system is not conservative.
BlockStructure block_structure(const MultiLSDS& sys, double tol = 1e-9, double rank_tol = 1e-10);

struct ClosedSubspace {
    ComplexMatrix basis;  // dim_x x dim, orthonormal columns
    int sweeps = 0;

    Eigen::Index dim() const noexcept { return basis.cols(); }
};

/// Smallest subspace containing ran B_k and ran C_j^*, invariant under all
/// A_k and A_k^*.
ClosedSubspace closely_connected_subspace(const MultiLSDS& sys, double rank_tol = 1e-10);

struct ReducedSystem {
    MultiLSDS system;
    ComplexMatrix embedding;
};

/// Compression to the closely connected part; keeps D and the transfer function.
ReducedSystem reduce_closely_connected(const MultiLSDS& sys, double rank_tol = 1e-10);

/// dim X_1 == dim X for a conservative system. Throws PreconditionError otherwise.
bool completely_nonunitary_check(const MultiLSDS& sys, double tol = 1e-9,
                                 double rank_tol = 1e-10);

}  // namespace ndsys
