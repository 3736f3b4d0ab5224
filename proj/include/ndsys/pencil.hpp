#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ndsys/types.hpp"

namespace ndsys {

/// Largest total order |s| accepted by the multipower routines. Memory grows
/// like prod_k (s_k + 1) matrices, so callers raise this deliberately.
inline constexpr int kDefaultOrderCap = 64;

/// Element of Z^N_+ : N non-negative integers.
class MultiIndex {
   public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> components);

    static MultiIndex zero(std::size_t n);
    static MultiIndex unit(std::size_t n, std::size_t k);

    std::size_t size() const noexcept { return c_.size(); }
    int operator[](std::size_t k) const { return c_[k]; }
    const std::vector<int>& components() const noexcept { return c_; }

    /// |s| = s_1 + ... + s_N
    int order() const noexcept;
    bool is_zero() const noexcept { return order() == 0; }

    MultiIndex plus_unit(std::size_t k) const;
    /// s - e_k; requires s_k > 0.
    MultiIndex minus_unit(std::size_t k) const;

    /// True iff r <= s componentwise.
    bool dominated_by(const MultiIndex& s) const;

    auto operator<=>(const MultiIndex&) const = default;

   private:
    std::vector<int> c_;
};

/// All s in Z^N_+ with |s| = order, in lexicographic order.
std::vector<MultiIndex> indices_of_order(std::size_t n, int order);

/// All s with |s| <= max_order, sorted by order then lexicographically.
std::vector<MultiIndex> indices_up_to_order(std::size_t n, int max_order);

/// N-tuple of matrices sharing one shape.
class OperatorTuple {
   public:
    OperatorTuple() = default;
    explicit OperatorTuple(std::vector<ComplexMatrix> members);

    static OperatorTuple zeros(std::size_t n, Eigen::Index rows, Eigen::Index cols);

    std::size_t size() const noexcept { return m_.size(); }
    Eigen::Index rows() const noexcept { return rows_; }
    Eigen::Index cols() const noexcept { return cols_; }
    const ComplexMatrix& operator[](std::size_t k) const { return m_[k]; }
    const std::vector<ComplexMatrix>& members() const noexcept { return m_; }

    /// Member-wise adjoint (T_1^*, ..., T_N^*).
    OperatorTuple adjoint() const;

   private:
    std::vector<ComplexMatrix> m_;
    Eigen::Index rows_ = 0;
    Eigen::Index cols_ = 0;
};

/// zT = sum_k z_k T_k.
ComplexMatrix eval_pencil(std::span<const Complex> z, const OperatorTuple& t);

/// c_s = |s|! / (s_1! ... s_N!). Throws RangeError when the value exceeds 64 bits.
std::uint64_t multinomial(const MultiIndex& s);

/// Symmetrized multipower A^s (permutation average of words with multiplicities s).
ComplexMatrix sym_multipower(const OperatorTuple& a, const MultiIndex& s,
                             int order_cap = kDefaultOrderCap);

enum class Border {
    Right,  // (A # B)^s : last factor from B
    Left,   // (C b A)^s : first factor from C
    Both,   // (C b A # B)^s
};

/// Bordered symmetrized multipower. Unused border tuples may be empty
/// (default-constructed) when the kind does not need them.
ComplexMatrix bordered_multipower(Border kind, const OperatorTuple& a, const OperatorTuple& b,
                                  const OperatorTuple& c, const MultiIndex& s,
                                  int order_cap = kDefaultOrderCap);

/// Weighted multipowers c_s A^s, c_s (A#B)^s, c_s (C b A)^s, c_s (C b A # B)^s
/// for every |s| <= max_order, computed once by the recursion over s - e_k.
/// These are exactly the kernels of the closed-form trajectory formulas.
class MultipowerTable {
   public:
    MultipowerTable(const OperatorTuple& a, const OperatorTuple& b, const OperatorTuple& c,
                    int max_order);

    int max_order() const noexcept { return max_order_; }

    const ComplexMatrix& power(const MultiIndex& s) const;
    const ComplexMatrix& sharp(const MultiIndex& s) const;       // |s| >= 1
    const ComplexMatrix& flat(const MultiIndex& s) const;        // |s| >= 1
    const ComplexMatrix& flat_sharp(const MultiIndex& s) const;  // |s| >= 2

   private:
    int max_order_;
    std::map<MultiIndex, ComplexMatrix> power_, sharp_, flat_, flat_sharp_;
};

}  // namespace ndsys
