#include "ndsys/realization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/SVD>

#include "ndsys/analysis.hpp"
#include "ndsys/errors.hpp"
#include "ndsys/linalg.hpp"
#include "ndsys/sampling.hpp"

namespace ndsys {

void check_agler_shapes(const AglerData& data) {
    const std::size_t n = data.theta.n();
    if (n == 0) throw ArityError("theta is empty");
    if (data.f.size() != n) {
        throw ArityError("need one F_k per variable: got " + std::to_string(data.f.size()) +
                         ", N = " + std::to_string(n));
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (data.f[k].n() != n) throw ArityError("F_" + std::to_string(k + 1) + " has wrong arity");
        if (data.f[k].cols() != data.theta.cols()) {
            throw ShapeError("F_" + std::to_string(k + 1) + " must have as many columns as theta");
        }
    }
    for (const auto& p : data.sample_grid) {
        if (p.size() != n) throw ArityError("sample grid point has wrong arity");
    }
}

double verify_agler_identity(const AglerData& data, int pairs, std::uint64_t seed) {
    check_agler_shapes(data);
    const std::size_t n = data.theta.n();
    const auto pts = random_polydisc(n, 2 * static_cast<std::size_t>(std::max(pairs, 0)), 0.9, seed);
    const Eigen::Index q = data.theta.cols();
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const Point& l = pts[2 * i];
        const Point& z = pts[2 * i + 1];
        ComplexMatrix r = ComplexMatrix::Identity(q, q) -
                          data.theta.evaluate(l).adjoint() * data.theta.evaluate(z);
        for (std::size_t k = 0; k < n; ++k) {
            r -= (1.0 - std::conj(l[k]) * z[k]) * data.f[k].evaluate(l).adjoint() *
                 data.f[k].evaluate(z);
        }
        worst = std::max(worst, spectral_norm(r));
    }
    return worst;
}

AglerStacks::AglerStacks(AglerData data) : data_(std::move(data)) {
    check_agler_shapes(data_);
    for (const auto& fk : data_.f) {
        rows_.push_back(fk.rows());
        m_ += fk.rows();
    }
}

ComplexMatrix AglerStacks::stacked_f(std::span<const Complex> l) const {
    ComplexMatrix out(m_, q());
    Eigen::Index r = 0;
    for (std::size_t k = 0; k < n(); ++k) {
        out.middleRows(r, rows_[k]) = data_.f[k].evaluate(l);
        r += rows_[k];
    }
    return out;
}

ComplexMatrix AglerStacks::weighted_f(std::span<const Complex> l) const {
    ComplexMatrix out(m_, q());
    Eigen::Index r = 0;
    for (std::size_t k = 0; k < n(); ++k) {
        out.middleRows(r, rows_[k]) = l[k] * data_.f[k].evaluate(l);
        r += rows_[k];
    }
    return out;
}

ComplexMatrix AglerStacks::g(std::span<const Complex> l) const {
    ComplexMatrix out(m_ + q(), q());
    out.topRows(m_) = weighted_f(l);
    out.bottomRows(q()) = ComplexMatrix::Identity(q(), q());
    return out;
}

ComplexMatrix AglerStacks::f(std::span<const Complex> l) const {
    ComplexMatrix out(m_ + p(), q());
    out.topRows(m_) = stacked_f(l);
    out.bottomRows(p()) = data_.theta.evaluate(l);
    return out;
}

namespace {

ComplexMatrix sample_columns(const std::vector<Point>& grid, Eigen::Index rows, Eigen::Index q,
                             const std::function<ComplexMatrix(const Point&)>& fn) {
    ComplexMatrix out(rows, q * static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.middleCols(q * static_cast<Eigen::Index>(i), q) = fn(grid[i]);
    }
    return out;
}

}  // namespace

GramIsometry gram_matched_isometry(const AglerStacks& stacks, const std::vector<Point>& grid,
                                   double gram_tol, double rank_tol) {
    if (grid.empty()) throw DomainError("sample grid is empty");
    const Eigen::Index q = stacks.q();
    const ComplexMatrix gam = sample_columns(grid, stacks.m() + q, q,
                                             [&](const Point& l) { return stacks.g(l); });
    const ComplexMatrix phi = sample_columns(grid, stacks.m() + stacks.p(), q,
                                             [&](const Point& l) { return stacks.f(l); });

    GramIsometry iso;
    const ComplexMatrix diff = gam.adjoint() * gam - phi.adjoint() * phi;
    iso.gram_residual = diff.cwiseAbs().maxCoeff();
    if (iso.gram_residual > gram_tol) {
        throw PreconditionError("kernel identity fails on the sample grid (residual " +
                                std::to_string(iso.gram_residual) + ")");
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(gam, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double rel = s(i) / s(0);
        if (rel >= rank_tol / 10.0 && rel <= rank_tol) {
            throw RankAmbiguityError("singular value " + std::to_string(rel) +
                                     " (relative) falls in the rank dead zone");
        }
        if (rel > rank_tol) ++r;
    }
    iso.basis = svd.matrixU().leftCols(r);
    const ComplexMatrix inv_s = s.head(r).cwiseInverse().asDiagonal();
    iso.image = phi * svd.matrixV().leftCols(r) * inv_s;
    iso.isometry_residual =
        spectral_norm(iso.image.adjoint() * iso.image - ComplexMatrix::Identity(r, r));
    return iso;
}

namespace {

std::vector<Point> default_grid(std::size_t n, std::size_t count, double radius) {
    return sobol_polydisc(n, count, radius);
}

AglerData padded(const AglerData& data, Eigen::Index extra) {
    if (extra <= 0) return data;
    AglerData out = data;
    const MatrixPolynomial& last = data.f.back();
    MatrixPolynomial grown(last.n(), last.rows() + extra, last.cols());
    for (const auto& [t, m] : last.terms()) {
        ComplexMatrix big = ComplexMatrix::Zero(last.rows() + extra, last.cols());
        big.topRows(last.rows()) = m;
        grown.add_term(t, big);
    }
    out.f.back() = std::move(grown);
    return out;
}

}  // namespace

RealizationResult assemble_colligation(const AglerStacks& stacks, const GramIsometry& iso,
                                       const std::vector<Point>& grid,
                                       const RealizeOptions& options) {
    const Eigen::Index m = stacks.m(), p = stacks.p(), q = stacks.q();
    const std::size_t n = stacks.n();
    if (p != q) {
        throw RealizationError(
            "a finite conservative realization needs as many outputs as inputs (p = " +
                std::to_string(p) + ", q = " + std::to_string(q) + ")",
            {{"p", double(p)}, {"q", double(q)}});
    }
    std::map<std::string, double> res;
    res["gram"] = iso.gram_residual;
    res["isometry_L"] = iso.isometry_residual;

    const Point zero(n, Complex(0.0));
    const ComplexMatrix f0 = stacks.stacked_f(zero);
    res["f0_isometry"] = spectral_norm(f0.adjoint() * f0 - ComplexMatrix::Identity(q, q));
    const ComplexMatrix qx = orthogonal_complement(orthonormal_basis(f0, options.rank_tol));
    const Eigen::Index dx = qx.cols();
    if (dx != m - q) {
        throw RealizationError("F(0) is not of full column rank", res);
    }

    // Domain of U: span of l P F(l), sampled on the grid.
    const ComplexMatrix dom_samples = sample_columns(
        grid, m, q, [&](const Point& l) { return stacks.weighted_f(l); });
    const ComplexMatrix qu = orthonormal_basis(dom_samples, options.rank_tol);
    const Eigen::Index ru = qu.cols();

    ComplexMatrix lifted = ComplexMatrix::Zero(m + q, ru);
    lifted.topRows(m) = qu;
    const ComplexMatrix w_full = iso.as_matrix() * lifted;  // (m + p) x ru
    res["splitting_grid"] = spectral_norm(f0.adjoint() * w_full.topRows(m));
    ComplexMatrix w(dx + p, ru);
    w.topRows(dx) = qx.adjoint() * w_full.topRows(m);
    w.bottomRows(p) = w_full.bottomRows(p);
    res["isometry_U"] = spectral_norm(w.adjoint() * w - ComplexMatrix::Identity(ru, ru));
    w = polar_isometry(w);

    const ComplexMatrix qu_perp = orthogonal_complement(qu);
    const ComplexMatrix w_perp = orthogonal_complement(w);
    ComplexMatrix left(dx + p, m), right(m, m);
    left << w, w_perp;
    right << qu, qu_perp;
    const ComplexMatrix u_ext = left * right.adjoint();

    ComplexMatrix frame(m, dx + q);
    frame << qx, f0;
    std::vector<ComplexMatrix> g;
    Eigen::Index r0 = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Eigen::Index mk = stacks.block_rows()[k];
        ComplexMatrix pk_frame = ComplexMatrix::Zero(m, dx + q);
        pk_frame.middleRows(r0, mk) = frame.middleRows(r0, mk);
        g.push_back(u_ext * pk_frame);
        r0 += mk;
    }
    MultiLSDS sys = from_system_matrices(g, dx, q);

    res["conservativity"] = conservativity_check(sys).max_residual();

    const auto fresh = random_polydisc(n, options.verify_points, 0.9, options.seed + 1);
    double transfer = 0.0, identity = 0.0, splitting = 0.0;
    for (const auto& l : fresh) {
        transfer = std::max(transfer,
                            spectral_norm(transfer_eval(sys, l) - stacks.data().theta.evaluate(l)));
        const ComplexMatrix shift = stacks.stacked_f(l) - f0;
        splitting = std::max(splitting, spectral_norm(f0.adjoint() * shift));
        if (dx > 0) {
            const ComplexMatrix res_op =
                ComplexMatrix::Identity(dx, dx) - eval_pencil(l, sys.a());
            const ComplexMatrix state = res_op.partialPivLu().solve(eval_pencil(l, sys.b()));
            identity = std::max(identity, spectral_norm(state - qx.adjoint() * shift));
        }
    }
    res["transfer"] = transfer;
    res["state_identity"] = identity;
    res["splitting"] = splitting;

    const bool ok = res["conservativity"] <= options.conservative_tol &&
                    res["transfer"] <= options.transfer_tol &&
                    res["state_identity"] <= options.identity_tol &&
                    res["splitting"] <= options.isometry_tol &&
                    res["f0_isometry"] <= options.isometry_tol;
    if (!ok) throw RealizationError("realization failed verification", res);

    return RealizationResult{std::move(sys), dx, 0, grid.size(), {iso.dim()}, std::move(res)};
}

RealizationResult realize(const AglerData& data, const RealizeOptions& options) {
    check_agler_shapes(data);
    const AglerStacks stacks(padded(data, options.extra_padding));
    const std::size_t n = stacks.n();

    std::vector<Point> grid;
    GramIsometry iso;
    std::vector<Eigen::Index> history;
    if (!data.sample_grid.empty()) {
        grid = data.sample_grid;
        iso = gram_matched_isometry(stacks, grid, options.gram_tol, options.rank_tol);
        history.push_back(iso.dim());
    } else {
        std::size_t size = std::max<std::size_t>(options.grid_size, 1);
        for (int round = 0; round < options.max_grid_rounds; ++round) {
            grid = default_grid(n, size, options.grid_radius);
            iso = gram_matched_isometry(stacks, grid, options.gram_tol, options.rank_tol);
            history.push_back(iso.dim());
            if (history.size() >= 2 && history[history.size() - 1] == history[history.size() - 2]) {
                break;
            }
            size *= 2;
        }
    }
    RealizationResult out = assemble_colligation(stacks, iso, grid, options);
    out.padding = std::max<Eigen::Index>(options.extra_padding, 0);
    out.dim_history = std::move(history);
    return out;
}

BuiltinExamples builtin_examples() {
    auto s = [](double v) { return ComplexMatrix::Constant(1, 1, Complex(v)); };
    const MultiLSDS alpha(OperatorTuple({s(0), s(0)}), OperatorTuple({s(0), s(1)}),
                          OperatorTuple({s(1), s(0)}), OperatorTuple({s(0), s(0)}));

    const double h = 1.0 / std::sqrt(2.0);
    ComplexMatrix a1 = ComplexMatrix::Zero(3, 3), a2 = ComplexMatrix::Zero(3, 3);
    a1(0, 2) = -h;
    a1(2, 1) = h;
    a2(1, 2) = h;
    a2(2, 0) = -h;
    ComplexMatrix b1 = ComplexMatrix::Zero(3, 1), b2 = ComplexMatrix::Zero(3, 1);
    b1(0, 0) = h;
    b2(1, 0) = h;
    ComplexMatrix c1 = ComplexMatrix::Zero(1, 3), c2 = ComplexMatrix::Zero(1, 3);
    c1(0, 1) = h;
    c2(0, 0) = h;
    const MultiLSDS alpha_prime(OperatorTuple({a1, a2}), OperatorTuple({b1, b2}),
                                OperatorTuple({c1, c2}), OperatorTuple({s(0), s(0)}));
    return {alpha, alpha_prime};
}

AglerData canonical_agler_fixture() {
    const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
    AglerData d;
    d.theta = MatrixPolynomial(2, 1, 1);
    d.theta.add_term(MultiIndex({1, 1}), one);
    MatrixPolynomial f1(2, 1, 1), f2(2, 1, 1);
    f1.add_term(MultiIndex({0, 1}), one);
    f2.add_term(MultiIndex({0, 0}), one);
    d.f = {f1, f2};
    return d;
}

}  // namespace ndsys
