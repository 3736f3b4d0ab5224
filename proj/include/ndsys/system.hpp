#pragma once

#include <string>
#include <vector>

#include "ndsys/pencil.hpp"

namespace ndsys {

/// Raw, unvalidated system data as read from a file or assembled by hand.
struct SystemDescription {
    std::size_t n = 0;
    Eigen::Index dim_x = 0;
    Eigen::Index dim_nm = 0;
    Eigen::Index dim_np = 0;
    std::vector<ComplexMatrix> a, b, c, d;
};

struct Violation {
    enum class Kind { Arity, Shape, Finiteness };
    Kind kind;
    std::string message;
};

/// Empty iff the description satisfies every invariant of a MultiLSDS.
std::vector<Violation> validate(const SystemDescription& desc);

/// alpha = (N; A, B, C, D; X, N-, N+) with A_k: X->X, B_k: N-->X,
/// C_k: X->N+, D_k: N-->N+.
class MultiLSDS {
   public:
    /// Throws ArityError / ShapeError / DomainError on the first violation.
    explicit MultiLSDS(const SystemDescription& desc);
    MultiLSDS(OperatorTuple a, OperatorTuple b, OperatorTuple c, OperatorTuple d);

    std::size_t n() const noexcept { return a_.size(); }
    Eigen::Index dim_x() const noexcept { return a_.rows(); }
    Eigen::Index dim_nm() const noexcept { return b_.cols(); }
    Eigen::Index dim_np() const noexcept { return c_.rows(); }

    const OperatorTuple& a() const noexcept { return a_; }
    const OperatorTuple& b() const noexcept { return b_; }
    const OperatorTuple& c() const noexcept { return c_; }
    const OperatorTuple& d() const noexcept { return d_; }

    /// G_k = [[A_k, B_k], [C_k, D_k]], 0-based k.
    ComplexMatrix system_matrix(std::size_t k) const;
    /// zG = sum_k z_k G_k
    ComplexMatrix pencil(std::span<const Complex> z) const;

    SystemDescription description() const;

   private:
    OperatorTuple a_, b_, c_, d_;
};

/// alpha* = (N; A*, C*, B*, D*; X, N+, N-)
MultiLSDS conjugate(const MultiLSDS& sys);

/// Splits G_k tuples back into a system with the given state dimension.
MultiLSDS from_system_matrices(const std::vector<ComplexMatrix>& g, Eigen::Index dim_x,
                               Eigen::Index dim_nm);

}  // namespace ndsys
