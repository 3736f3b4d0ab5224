#include "ndsys/transfer.hpp"

#include <algorithm>

#include <Eigen/LU>

#include "ndsys/errors.hpp"
#include "ndsys/linalg.hpp"

namespace ndsys {

MatrixPolynomial::MatrixPolynomial(std::size_t n, Eigen::Index rows, Eigen::Index cols)
    : n_(n), rows_(rows), cols_(cols) {
    if (n == 0) throw DomainError("polynomial needs N >= 1");
    if (rows < 0 || cols < 0) throw ShapeError("polynomial shape must be non-negative");
}

void MatrixPolynomial::add_term(const MultiIndex& t, const ComplexMatrix& m) {
    if (t.size() != n_) throw ArityError("multi-index arity does not match the polynomial");
    if (m.rows() != rows_ || m.cols() != cols_) {
        throw ShapeError("coefficient shape does not match the polynomial");
    }
    auto it = terms_.find(t);
    if (it == terms_.end()) {
        terms_.emplace(t, m);
    } else {
        it->second += m;
    }
}

ComplexMatrix MatrixPolynomial::coeff(const MultiIndex& t) const {
    auto it = terms_.find(t);
    if (it == terms_.end()) return ComplexMatrix::Zero(rows_, cols_);
    return it->second;
}

ComplexMatrix MatrixPolynomial::evaluate(std::span<const Complex> z) const {
    if (z.size() != n_) throw ArityError("evaluation point arity does not match the polynomial");
    ComplexMatrix out = ComplexMatrix::Zero(rows_, cols_);
    for (const auto& [t, m] : terms_) {
        Complex w = 1.0;
        for (std::size_t k = 0; k < n_; ++k) {
            for (int e = 0; e < t[k]; ++e) w *= z[k];
        }
        out += w * m;
    }
    return out;
}

int MatrixPolynomial::degree() const {
    int d = 0;
    for (const auto& [t, m] : terms_) d = std::max(d, t.order());
    return d;
}

CommutingTuple CommutingTuple::make(std::vector<ComplexMatrix> members, double commute_tol,
                                    double norm_slack) {
    if (members.empty()) throw PreconditionError("commuting tuple needs at least one member");
    const Eigen::Index d = members.front().rows();
    for (const auto& m : members) {
        if (m.rows() != d || m.cols() != d) {
            throw PreconditionError("tuple members must be square of one size");
        }
        if (spectral_norm(m) > 1.0 + norm_slack) {
            throw PreconditionError("tuple member is not a contraction");
        }
    }
    for (std::size_t k = 0; k < members.size(); ++k) {
        for (std::size_t j = k + 1; j < members.size(); ++j) {
            const ComplexMatrix c = members[k] * members[j] - members[j] * members[k];
            if (spectral_norm(c) > commute_tol) {
                throw PreconditionError("tuple members do not commute");
            }
        }
    }
    CommutingTuple t;
    t.t_ = std::move(members);
    return t;
}

namespace {

void check_point(const MultiLSDS& sys, std::span<const Complex> z) {
    if (z.size() != sys.n()) {
        throw ArityError("point has " + std::to_string(z.size()) + " coordinates, system has N = " +
                         std::to_string(sys.n()));
    }
}

}  // namespace

ComplexMatrix transfer_eval(const MultiLSDS& sys, std::span<const Complex> z) {
    check_point(sys, z);
    const ComplexMatrix zd = eval_pencil(z, sys.d());
    const Eigen::Index dx = sys.dim_x();
    if (dx == 0) return zd;
    const ComplexMatrix m = ComplexMatrix::Identity(dx, dx) - eval_pencil(z, sys.a());
    const double smin = smallest_singular_value(m);
    if (smin <= 1e-13 * std::max(1.0, spectral_norm(m))) {
        throw SingularityError("I - zA is numerically singular", smin);
    }
    const ComplexMatrix x = m.partialPivLu().solve(eval_pencil(z, sys.b()));
    return zd + eval_pencil(z, sys.c()) * x;
}

ComplexMatrix transfer_eval_series(const MultiLSDS& sys, std::span<const Complex> z, int terms) {
    check_point(sys, z);
    if (terms < 0) throw DomainError("series needs a non-negative number of terms");
    const ComplexMatrix za = eval_pencil(z, sys.a());
    const double rho = spectral_norm(za);
    if (rho >= 1.0) throw DivergenceError("||zA|| >= 1; the Neumann series may diverge");
    ComplexMatrix out = eval_pencil(z, sys.d());
    ComplexMatrix v = eval_pencil(z, sys.b());
    const ComplexMatrix zc = eval_pencil(z, sys.c());
    for (int n = 0; n <= terms; ++n) {
        out.noalias() += zc * v;
        v = za * v;
    }
    return out;
}

double series_error_bound(const MultiLSDS& sys, std::span<const Complex> z, int terms) {
    const double rho = spectral_norm(eval_pencil(z, sys.a()));
    return spectral_norm(eval_pencil(z, sys.c())) * spectral_norm(eval_pencil(z, sys.b())) *
           std::pow(rho, terms + 1) / (1.0 - rho);
}

ComplexMatrix maclaurin_coeff(const MultiLSDS& sys, const MultiIndex& t) {
    if (t.size() != sys.n()) throw ArityError("multi-index arity does not match N");
    if (t.order() == 0) throw DomainError("theta(0) = 0; the constant coefficient is not defined here");
    if (t.order() == 1) {
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (t[k] == 1) return sys.d()[k];
        }
    }
    const MultipowerTable table(sys.a(), sys.b(), sys.c(), t.order());
    return table.flat_sharp(t);
}

MatrixPolynomial maclaurin_polynomial(const MultiLSDS& sys, int max_degree) {
    MatrixPolynomial p(sys.n(), sys.dim_np(), sys.dim_nm());
    if (max_degree < 1) return p;
    const MultipowerTable table(sys.a(), sys.b(), sys.c(), max_degree);
    for (const auto& t : indices_up_to_order(sys.n(), max_degree)) {
        if (t.order() == 0) continue;
        ComplexMatrix m;
        if (t.order() == 1) {
            for (std::size_t k = 0; k < t.size(); ++k) {
                if (t[k] == 1) m = sys.d()[k];
            }
        } else {
            m = table.flat_sharp(t);
        }
        if (m.size() > 0 && m.cwiseAbs().maxCoeff() > 0.0) p.add_term(t, m);
    }
    return p;
}

double conjugate_transfer_check(const MultiLSDS& sys, const std::vector<Point>& points) {
    const MultiLSDS star = conjugate(sys);
    double worst = 0.0;
    for (const auto& z : points) {
        Point zb(z.size());
        for (std::size_t k = 0; k < z.size(); ++k) zb[k] = std::conj(z[k]);
        const ComplexMatrix lhs = transfer_eval(star, z);
        const ComplexMatrix rhs = transfer_eval(sys, zb).adjoint();
        worst = std::max(worst, spectral_norm(lhs - rhs));
    }
    return worst;
}

SchurAglerReport schur_agler_sample_test(const MatrixPolynomial& theta,
                                         const std::vector<CommutingTuple>& tuples, double r,
                                         double tol) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("radius must lie in (0, 1)");
    SchurAglerReport rep;
    for (const auto& tuple : tuples) {
        if (tuple.size() != theta.n()) throw ArityError("tuple size does not match N");
        const Eigen::Index d = tuple.dim();
        const int deg = theta.degree();
        // Powers (rT_k)^e for e <= deg.
        std::vector<std::vector<ComplexMatrix>> pw(tuple.size());
        for (std::size_t k = 0; k < tuple.size(); ++k) {
            pw[k].push_back(ComplexMatrix::Identity(d, d));
            for (int e = 1; e <= deg; ++e) pw[k].push_back(pw[k].back() * (r * tuple[k]));
        }
        ComplexMatrix value = ComplexMatrix::Zero(theta.rows() * d, theta.cols() * d);
        for (const auto& [t, m] : theta.terms()) {
            ComplexMatrix tp = ComplexMatrix::Identity(d, d);
            for (std::size_t k = 0; k < tuple.size(); ++k) tp = tp * pw[k][t[k]];
            value += kron(m, tp);
        }
        const double nv = spectral_norm(value);
        rep.norms.push_back(nv);
        rep.max_norm = std::max(rep.max_norm, nv);
    }
    rep.pass = rep.max_norm <= 1.0 + tol;
    return rep;
}

MatrixPolynomial schwarz_split(const MatrixPolynomial& theta) {
    if (theta.n() != 1) throw DomainError("schwarz_split applies to one-variable polynomials");
    const MultiIndex zero = MultiIndex::zero(1);
    if (theta.coeff(zero).size() > 0 && theta.coeff(zero).cwiseAbs().maxCoeff() > 0.0) {
        throw DomainError("constant term must vanish");
    }
    MatrixPolynomial out(1, theta.rows(), theta.cols());
    for (const auto& [t, m] : theta.terms()) {
        if (t[0] == 0) continue;
        out.add_term(t.minus_unit(0), m);
    }
    return out;
}

}  // namespace ndsys
