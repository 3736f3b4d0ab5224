#pragma once

#include <map>
#include <vector>

#include "ndsys/system.hpp"

namespace ndsys {

/// sum_t M_t z^t with every M_t of one shape.
class MatrixPolynomial {
   public:
    MatrixPolynomial() = default;
    MatrixPolynomial(std::size_t n, Eigen::Index rows, Eigen::Index cols);

    std::size_t n() const noexcept { return n_; }
    Eigen::Index rows() const noexcept { return rows_; }
    Eigen::Index cols() const noexcept { return cols_; }

    /// Adds m to the coefficient of z^t.
    void add_term(const MultiIndex& t, const ComplexMatrix& m);
    ComplexMatrix coeff(const MultiIndex& t) const;
    const std::map<MultiIndex, ComplexMatrix>& terms() const noexcept { return terms_; }

    ComplexMatrix evaluate(std::span<const Complex> z) const;
    int degree() const;

   private:
    std::size_t n_ = 0;
    Eigen::Index rows_ = 0;
    Eigen::Index cols_ = 0;
    std::map<MultiIndex, ComplexMatrix> terms_;
};

/// Pairwise commuting contractions of one size.
class CommutingTuple {
   public:
    /// Throws PreconditionError when commutation or contractivity fails.
    static CommutingTuple make(std::vector<ComplexMatrix> members, double commute_tol = 1e-10,
                               double norm_slack = 1e-12);

    std::size_t size() const noexcept { return t_.size(); }
    Eigen::Index dim() const noexcept { return t_.empty() ? 0 : t_.front().rows(); }
    const ComplexMatrix& operator[](std::size_t k) const { return t_[k]; }

   private:
    std::vector<ComplexMatrix> t_;
};

/// theta(z) = zD + zC (I - zA)^{-1} zB by a direct solve.
ComplexMatrix transfer_eval(const MultiLSDS& sys, std::span<const Complex> z);

/// zD + sum_{n=0}^{terms} zC (zA)^n zB; throws DivergenceError when ||zA|| >= 1.
ComplexMatrix transfer_eval_series(const MultiLSDS& sys, std::span<const Complex> z, int terms);

/// Bound on |series - exact| for the given truncation.
double series_error_bound(const MultiLSDS& sys, std::span<const Complex> z, int terms);

/// Coefficient of z^t in theta: D_k for t = e_k, c_t (C b A # B)^t for |t| >= 2.
ComplexMatrix maclaurin_coeff(const MultiLSDS& sys, const MultiIndex& t);

/// All nonzero coefficients with 1 <= |t| <= max_degree.
MatrixPolynomial maclaurin_polynomial(const MultiLSDS& sys, int max_degree);

/// max_z || theta_{alpha*}(z) - theta_alpha(conj z)^* ||
double conjugate_transfer_check(const MultiLSDS& sys, const std::vector<Point>& points);

struct SchurAglerReport {
    double max_norm = 0.0;
    std::vector<double> norms;
    bool pass = false;
};

/// ||theta(rT)|| with theta(rT) = sum_t kron(theta_t, (rT)^t). Only a necessary
/// condition for membership in the Schur-Agler class.
SchurAglerReport schur_agler_sample_test(const MatrixPolynomial& theta,
                                         const std::vector<CommutingTuple>& tuples, double r,
                                         double tol = 1e-9);

/// theta(z) / z for a one-variable polynomial with zero constant term.
MatrixPolynomial schwarz_split(const MatrixPolynomial& theta);

}  // namespace ndsys
