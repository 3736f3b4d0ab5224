#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ndsys/system.hpp"
#include "ndsys/transfer.hpp"

namespace ndsys {

/// theta (p x q, theta(0) = 0) together with polynomial F_k (m_k x q) such that
/// I - theta(l)^* theta(z) = sum_k (1 - conj(l_k) z_k) F_k(l)^* F_k(z).
struct AglerData {
    MatrixPolynomial theta;
    std::vector<MatrixPolynomial> f;
    /// Points used to sample the spans. Empty means the default Sobol grid.
    std::vector<Point> sample_grid;
};

/// Throws ShapeError / ArityError when the pieces do not fit together.
void check_agler_shapes(const AglerData& data);

/// Max residual of the kernel identity over random pairs in (0.9 D)^N.
double verify_agler_identity(const AglerData& data, int pairs, std::uint64_t seed);

/// g(l) = [l_1 F_1(l); ...; l_N F_N(l); I_q], f(l) = [F_1(l); ...; F_N(l); theta(l)].
class AglerStacks {
   public:
    explicit AglerStacks(AglerData data);

    std::size_t n() const noexcept { return data_.f.size(); }
    Eigen::Index p() const noexcept { return data_.theta.rows(); }
    Eigen::Index q() const noexcept { return data_.theta.cols(); }
    /// m = sum_k m_k
    Eigen::Index m() const noexcept { return m_; }
    const std::vector<Eigen::Index>& block_rows() const noexcept { return rows_; }
    const AglerData& data() const noexcept { return data_; }

    /// [F_1(l); ...; F_N(l)]
    ComplexMatrix stacked_f(std::span<const Complex> l) const;
    /// [l_1 F_1(l); ...; l_N F_N(l)]
    ComplexMatrix weighted_f(std::span<const Complex> l) const;
    ComplexMatrix g(std::span<const Complex> l) const;
    ComplexMatrix f(std::span<const Complex> l) const;

   private:
    AglerData data_;
    Eigen::Index m_ = 0;
    std::vector<Eigen::Index> rows_;
};

/// The isometry L: span{g(l) eta} -> span{f(l) eta} with L g(l) = f(l).
struct GramIsometry {
    ComplexMatrix basis;  // orthonormal basis of G (K x r)
    ComplexMatrix image;  // L applied to the basis (L x r)
    double gram_residual = 0.0;
    double isometry_residual = 0.0;

    Eigen::Index dim() const noexcept { return basis.cols(); }
    /// L as a K -> L matrix vanishing on the complement of G.
    ComplexMatrix as_matrix() const { return image * basis.adjoint(); }
};

/// Throws PreconditionError on a Gram mismatch above gram_tol and
/// RankAmbiguityError when a singular value falls in [rank_tol/10, rank_tol].
GramIsometry gram_matched_isometry(const AglerStacks& stacks, const std::vector<Point>& grid,
                                   double gram_tol = 1e-8, double rank_tol = 1e-10);

struct RealizeOptions {
    std::size_t grid_size = 200;
    double grid_radius = 0.8;
    int max_grid_rounds = 6;
    std::uint64_t seed = 0;
    std::size_t verify_points = 100;
    /// Extra zero rows appended to the last block of M; enlarges the state space.
    Eigen::Index extra_padding = 0;
    double gram_tol = 1e-8;
    double rank_tol = 1e-10;
    double conservative_tol = 1e-8;
    double transfer_tol = 1e-7;
    double identity_tol = 1e-7;
    double isometry_tol = 1e-8;
};

struct RealizationResult {
    MultiLSDS system;
    Eigen::Index state_dim = 0;
    Eigen::Index padding = 0;
    std::size_t grid_size = 0;
    std::vector<Eigen::Index> dim_history;  // dim G per grid round
    std::map<std::string, double> residuals;
};

/// Colligation G_k = U P_k [Q_X, F(0)] from the isometry, then verification on
/// fresh points. Throws RealizationError when a residual is out of tolerance.
RealizationResult assemble_colligation(const AglerStacks& stacks, const GramIsometry& iso,
                                       const std::vector<Point>& grid,
                                       const RealizeOptions& options = {});

/// Full pipeline: shape checks, grid refinement, isometry, colligation.
RealizationResult realize(const AglerData& data, const RealizeOptions& options = {});

struct BuiltinExamples {
    MultiLSDS alpha;        // one state
    MultiLSDS alpha_prime;  // three states
};

/// Two conservative realizations of theta(z) = z_1 z_2.
BuiltinExamples builtin_examples();

/// theta = z_1 z_2, F_1 = (z_2), F_2 = (1).
AglerData canonical_agler_fixture();

}  // namespace ndsys
