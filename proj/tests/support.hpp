#pragma once

// Random fixtures and independent oracles shared by the tests and the
// acceptance runner.

#include <algorithm>
#include <random>
#include <vector>

#include "ndsys/lattice.hpp"
#include "ndsys/linalg.hpp"
#include "ndsys/pencil.hpp"
#include "ndsys/realization.hpp"
#include "ndsys/system.hpp"
#include "ndsys/transfer.hpp"

namespace ndsys::testing {

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Point random_point(std::size_t n, double radius, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Point z(n);
    for (auto& c : z) {
        const double r = radius * std::sqrt(u(rng));
        const double a = 2.0 * 3.14159265358979323846 * u(rng);
        c = std::polar(r, a);
    }
    return z;
}

inline OperatorTuple random_tuple(std::size_t n, Eigen::Index rows, Eigen::Index cols,
                                  std::mt19937_64& rng, double scale = 1.0) {
    std::vector<ComplexMatrix> m;
    for (std::size_t k = 0; k < n; ++k) m.push_back(scale * random_gaussian(rows, cols, rng));
    return OperatorTuple(m);
}

inline MultiLSDS random_system(std::size_t n, Eigen::Index dx, Eigen::Index nm, Eigen::Index np,
                               std::mt19937_64& rng, double scale = 0.5) {
    return MultiLSDS(random_tuple(n, dx, dx, rng, scale), random_tuple(n, dx, nm, rng, scale),
                     random_tuple(n, np, dx, rng, scale), random_tuple(n, np, nm, rng, scale));
}

/// Random split of `total` into n non-negative parts.
inline std::vector<Eigen::Index> random_split(Eigen::Index total, std::size_t n,
                                              std::mt19937_64& rng) {
    std::vector<Eigen::Index> parts(n, 0);
    for (Eigen::Index i = 0; i < total; ++i) ++parts[uniform_int(rng, 0, int(n) - 1)];
    return parts;
}

/// G_k = V+_k W_k V-_k^* over a random orthogonal split of X + N; satisfies
/// the four conservativity conditions exactly up to rounding.
inline std::vector<ComplexMatrix> random_conservative_matrices(std::size_t n, Eigen::Index h,
                                                               std::mt19937_64& rng) {
    const ComplexMatrix vm = random_unitary(h, rng);
    const ComplexMatrix vp = random_unitary(h, rng);
    const auto parts = random_split(h, n, rng);
    std::vector<ComplexMatrix> g;
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Eigen::Index d = parts[k];
        const ComplexMatrix w = random_unitary(d, rng);
        g.push_back(vp.middleCols(off, d) * w * vm.middleCols(off, d).adjoint());
        off += d;
    }
    return g;
}

inline MultiLSDS random_conservative(std::size_t n, Eigen::Index dx, Eigen::Index p,
                                     std::mt19937_64& rng) {
    return from_system_matrices(random_conservative_matrices(n, dx + p, rng), dx, p);
}

/// Convex combination of conservative tuples: contractive on the torus.
inline MultiLSDS random_dissipative(std::size_t n, Eigen::Index dx, Eigen::Index p,
                                    std::mt19937_64& rng, int terms = 3) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<double> w(terms);
    double s = 0.0;
    for (auto& x : w) s += (x = u(rng));
    std::vector<ComplexMatrix> g(n, ComplexMatrix::Zero(dx + p, dx + p));
    for (int i = 0; i < terms; ++i) {
        const auto gi = random_conservative_matrices(n, dx + p, rng);
        for (std::size_t k = 0; k < n; ++k) g[k] += (w[i] / s) * gi[k];
    }
    return from_system_matrices(g, dx, p);
}

/// Commuting contractions built as polynomials in one contraction.
inline std::vector<ComplexMatrix> random_commuting(std::size_t n, Eigen::Index d,
                                                   std::mt19937_64& rng) {
    ComplexMatrix c = random_gaussian(d, d, rng);
    c /= 1.05 * spectral_norm(c);
    std::vector<ComplexMatrix> out;
    ComplexMatrix pw = c;
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(k % 2 == 0 ? pw : 0.5 * (pw + pw * c));
        pw = pw * c;
    }
    return out;
}

// ---- oracles -----------------------------------------------------------------

/// Symmetrized multipower by explicit enumeration of distinct arrangements.
inline ComplexMatrix brute_multipower(const std::vector<ComplexMatrix>& a,
                                      const std::vector<int>& s) {
    std::vector<int> word;
    for (std::size_t k = 0; k < s.size(); ++k) word.insert(word.end(), s[k], int(k));
    std::sort(word.begin(), word.end());
    const Eigen::Index d = a.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    long count = 0;
    do {
        ComplexMatrix p = ComplexMatrix::Identity(d, d);
        for (int k : word) p = p * a[k];
        sum += p;
        ++count;
    } while (std::next_permutation(word.begin(), word.end()));
    return sum / double(count);
}

/// Bordered multipower by enumeration: first factor from C, last from B,
/// middle from A (only the borders the kind asks for).
inline ComplexMatrix brute_bordered(Border kind, const std::vector<ComplexMatrix>& a,
                                    const std::vector<ComplexMatrix>& b,
                                    const std::vector<ComplexMatrix>& c,
                                    const std::vector<int>& s) {
    std::vector<int> word;
    for (std::size_t k = 0; k < s.size(); ++k) word.insert(word.end(), s[k], int(k));
    std::sort(word.begin(), word.end());
    ComplexMatrix sum;
    long count = 0;
    do {
        const std::size_t len = word.size();
        ComplexMatrix p;
        for (std::size_t i = 0; i < len; ++i) {
            const bool first = i == 0, last = i + 1 == len;
            const ComplexMatrix* f = &a[word[i]];
            if (first && kind != Border::Right) f = &c[word[i]];
            else if (last && kind != Border::Left) f = &b[word[i]];
            p = i == 0 ? *f : ComplexMatrix(p * *f);
        }
        sum = count == 0 ? p : ComplexMatrix(sum + p);
        ++count;
    } while (std::next_permutation(word.begin(), word.end()));
    return sum / double(count);
}

/// Classical one-parameter system x(t+1) = A x(t) + B u(t), y(t) = C x(t) + D u(t).
struct TextbookRun {
    std::vector<ComplexVector> x;  // x(0..T)
    std::vector<ComplexVector> y;  // y(0..T-1)
};

inline TextbookRun textbook_simulate(const ComplexMatrix& a, const ComplexMatrix& b,
                                     const ComplexMatrix& c, const ComplexMatrix& d,
                                     const ComplexVector& x0,
                                     const std::vector<ComplexVector>& u) {
    TextbookRun r;
    r.x.push_back(x0);
    for (const auto& ut : u) {
        r.y.push_back(c * r.x.back() + d * ut);
        r.x.push_back(a * r.x.back() + b * ut);
    }
    return r;
}

/// D + zC(I - zA)^{-1}B
inline ComplexMatrix textbook_transfer(const ComplexMatrix& a, const ComplexMatrix& b,
                                       const ComplexMatrix& c, const ComplexMatrix& d,
                                       Complex z) {
    const Eigen::Index n = a.rows();
    const ComplexMatrix m = ComplexMatrix::Identity(n, n) - z * a;
    return d + z * c * m.fullPivLu().solve(b);
}

// ---- Agler fixtures ----------------------------------------------------------

inline MatrixPolynomial poly_mul(const MatrixPolynomial& x, const MatrixPolynomial& y) {
    MatrixPolynomial out(x.n(), x.rows(), y.cols());
    for (const auto& [s, ms] : x.terms()) {
        for (const auto& [t, mt] : y.terms()) {
            std::vector<int> st(s.size());
            for (std::size_t k = 0; k < st.size(); ++k) st[k] = s[k] + t[k];
            out.add_term(MultiIndex(st), ms * mt);
        }
    }
    return out;
}

inline MatrixPolynomial constant_poly(std::size_t n, const ComplexMatrix& m) {
    MatrixPolynomial p(n, m.rows(), m.cols());
    p.add_term(MultiIndex::zero(n), m);
    return p;
}

/// theta = sum_k z_k D_k with a conservative D-tuple; F_k = V-_k^*.
inline AglerData degree_one_factor(std::size_t n, Eigen::Index p, std::mt19937_64& rng) {
    const ComplexMatrix vm = random_unitary(p, rng);
    const ComplexMatrix vp = random_unitary(p, rng);
    const auto parts = random_split(p, n, rng);
    AglerData d;
    d.theta = MatrixPolynomial(n, p, p);
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Eigen::Index dk = parts[k];
        const ComplexMatrix w = random_unitary(dk, rng);
        d.theta.add_term(MultiIndex::unit(n, k),
                         vp.middleCols(off, dk) * w * vm.middleCols(off, dk).adjoint());
        d.f.push_back(constant_poly(n, vm.middleCols(off, dk).adjoint()));
        off += dk;
    }
    return d;
}

/// theta = theta_1 * psi with F_k = [F_k^psi; F_k^1 psi].
inline AglerData agler_product(const AglerData& left, const AglerData& right) {
    AglerData d;
    d.theta = poly_mul(left.theta, right.theta);
    const std::size_t n = left.f.size();
    for (std::size_t k = 0; k < n; ++k) {
        const MatrixPolynomial lower = poly_mul(left.f[k], right.theta);
        MatrixPolynomial stacked(n, right.f[k].rows() + lower.rows(), right.theta.cols());
        for (const auto& [t, m] : right.f[k].terms()) {
            ComplexMatrix big = ComplexMatrix::Zero(stacked.rows(), stacked.cols());
            big.topRows(m.rows()) = m;
            stacked.add_term(t, big);
        }
        for (const auto& [t, m] : lower.terms()) {
            ComplexMatrix big = ComplexMatrix::Zero(stacked.rows(), stacked.cols());
            big.bottomRows(m.rows()) = m;
            stacked.add_term(t, big);
        }
        d.f.push_back(std::move(stacked));
    }
    return d;
}

/// Product of 1..3 degree-one conservative factors.
inline AglerData random_agler_fixture(std::size_t n, Eigen::Index p, int factors,
                                      std::mt19937_64& rng) {
    AglerData d = degree_one_factor(n, p, rng);
    for (int i = 1; i < factors; ++i) d = agler_product(degree_one_factor(n, p, rng), d);
    return d;
}

inline LatticeSignal random_signal_on(const std::vector<LatticePoint>& pts, std::size_t n,
                                      Eigen::Index dim, std::mt19937_64& rng) {
    LatticeSignal s(n, dim);
    for (const auto& t : pts) s.set(t, random_gaussian(dim, 1, rng).col(0));
    return s;
}

}  // namespace ndsys::testing
