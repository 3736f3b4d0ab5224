#include "ndsys/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "ndsys/errors.hpp"
#include "ndsys/linalg.hpp"
#include "ndsys/sampling.hpp"

namespace ndsys {

std::size_t default_scan_samples(std::size_t n) {
    std::size_t s = 1;
    for (std::size_t k = 0; k < n; ++k) {
        s *= 32;
        if (s >= 100000) return 100000;
    }
    return s;
}

namespace {

Point torus_point(const std::vector<double>& angles) {
    Point z(angles.size());
    for (std::size_t k = 0; k < angles.size(); ++k) z[k] = std::polar(1.0, angles[k]);
    return z;
}

struct Ascent {
    std::vector<double> angles;
    double value;
};

// Gradient ascent on sigma_max(zeta G) over the torus angles.
Ascent refine_on_torus(const MultiLSDS& sys, const std::vector<ComplexMatrix>& g,
                       std::vector<double> angles, double value) {
    double step = 0.1;
    for (int it = 0; it < 50; ++it) {
        const Point z = torus_point(angles);
        Eigen::JacobiSVD<ComplexMatrix> svd(sys.pencil(z),
                                            Eigen::ComputeThinU | Eigen::ComputeThinV);
        const ComplexVector u = svd.matrixU().col(0);
        const ComplexVector v = svd.matrixV().col(0);
        std::vector<double> grad(angles.size());
        double gnorm = 0.0;
        for (std::size_t k = 0; k < angles.size(); ++k) {
            const Complex d = u.dot(Complex(0.0, 1.0) * z[k] * (g[k] * v));
            grad[k] = d.real();
            gnorm += grad[k] * grad[k];
        }
        gnorm = std::sqrt(gnorm);
        if (gnorm < 1e-14) break;
        std::vector<double> trial(angles);
        for (std::size_t k = 0; k < angles.size(); ++k) trial[k] += step * grad[k] / gnorm;
        const double tv = spectral_norm(sys.pencil(torus_point(trial)));
        if (tv > value) {
            angles = std::move(trial);
            value = tv;
            step *= 1.5;
        } else {
            step *= 0.5;
            if (step < 1e-12) break;
        }
    }
    return {std::move(angles), value};
}

}  // namespace

TorusScanReport dissipativity_scan(const MultiLSDS& sys, std::size_t samples, bool refine,
                                   double tol) {
    if (samples == 0) throw DomainError("torus scan needs at least one sample");
    const std::size_t n = sys.n();
    std::vector<ComplexMatrix> g;
    for (std::size_t k = 0; k < n; ++k) g.push_back(sys.system_matrix(k));

    std::vector<std::vector<double>> angle_sets;
    if (n <= 3) {
        auto m = static_cast<std::size_t>(std::floor(std::pow(double(samples), 1.0 / double(n))));
        m = std::max<std::size_t>(m, 1);
        auto fits = [&](std::size_t mm) {
            std::size_t p = 1;
            for (std::size_t k = 0; k < n; ++k) p *= mm;
            return p <= samples;
        };
        while (fits(m + 1)) ++m;
        while (m > 1 && !fits(m)) --m;
        std::vector<std::size_t> idx(n, 0);
        while (true) {
            std::vector<double> a(n);
            for (std::size_t k = 0; k < n; ++k) {
                a[k] = 2.0 * std::numbers::pi * double(idx[k]) / double(m);
            }
            angle_sets.push_back(std::move(a));
            std::size_t k = n;
            while (k > 0 && idx[k - 1] + 1 == m) idx[--k] = 0;
            if (k == 0) break;
            ++idx[k - 1];
        }
    } else {
        for (auto& p : sobol_sequence(n, samples)) {
            for (auto& c : p) c *= 2.0 * std::numbers::pi;
            angle_sets.push_back(std::move(p));
        }
    }

    TorusScanReport rep;
    rep.samples = angle_sets.size();
    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t i = 0; i < angle_sets.size(); ++i) {
        const double v = spectral_norm(sys.pencil(torus_point(angle_sets[i])));
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    std::vector<double> best_angles = angle_sets[best];
    if (refine) {
        auto r = refine_on_torus(sys, g, best_angles, best_value);
        best_angles = std::move(r.angles);
        best_value = r.value;
        rep.refined = true;
    }
    rep.max_norm = best_value;
    rep.argmax = torus_point(best_angles);
    rep.dissipative = best_value <= 1.0 + tol;
    return rep;
}

double ConservativityCertificate::max_residual() const {
    return std::max({gram_sum, gram_cross, cogram_sum, cogram_cross});
}

ConservativityCertificate conservativity_check(const MultiLSDS& sys, double tol) {
    const std::size_t n = sys.n();
    std::vector<ComplexMatrix> g;
    for (std::size_t k = 0; k < n; ++k) g.push_back(sys.system_matrix(k));
    const Eigen::Index rows = g.front().rows(), cols = g.front().cols();

    ConservativityCertificate cert;
    ComplexMatrix gram = -ComplexMatrix::Identity(cols, cols);
    ComplexMatrix cogram = -ComplexMatrix::Identity(rows, rows);
    for (std::size_t k = 0; k < n; ++k) {
        gram.noalias() += g[k].adjoint() * g[k];
        cogram.noalias() += g[k] * g[k].adjoint();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            cert.gram_cross = std::max(cert.gram_cross, spectral_norm(g[k].adjoint() * g[j]));
            cert.cogram_cross = std::max(cert.cogram_cross, spectral_norm(g[k] * g[j].adjoint()));
        }
    }
    cert.gram_sum = spectral_norm(gram);
    cert.cogram_sum = spectral_norm(cogram);
    cert.pass = cert.max_residual() <= tol;
    return cert;
}

BlockStructure block_structure(const MultiLSDS& sys, double tol, double rank_tol) {
    const auto cert = conservativity_check(sys, tol);
    if (!cert.pass) {
        throw PreconditionError("block structure requires a conservative system (residual " +
                                std::to_string(cert.max_residual()) + ")");
    }
    const std::size_t n = sys.n();
    BlockStructure bs;
    ComplexMatrix g_sum = ComplexMatrix::Zero(sys.dim_x() + sys.dim_np(),
                                              sys.dim_x() + sys.dim_nm());
    ComplexMatrix rebuilt = g_sum;
    for (std::size_t k = 0; k < n; ++k) {
        const ComplexMatrix g = sys.system_matrix(k);
        g_sum += g;
        bs.h_minus.push_back(orthonormal_basis(g.adjoint(), rank_tol));
        bs.h_plus.push_back(orthonormal_basis(g, rank_tol));
        bs.blocks.push_back(bs.h_plus.back().adjoint() * g * bs.h_minus.back());
        bs.dims_minus.push_back(bs.h_minus.back().cols());
        bs.dims_plus.push_back(bs.h_plus.back().cols());
        const ComplexMatrix piece = bs.h_plus.back() * bs.blocks.back() * bs.h_minus.back().adjoint();
        rebuilt += piece;
        bs.reconstruction_residual = std::max(bs.reconstruction_residual, spectral_norm(piece - g));
    }
    bs.reconstruction_residual = std::max(bs.reconstruction_residual, spectral_norm(rebuilt - g_sum));

    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = k + 1; j < n; ++j) {
            bs.orthogonality_residual =
                std::max({bs.orthogonality_residual,
                          spectral_norm(bs.h_minus[k].adjoint() * bs.h_minus[j]),
                          spectral_norm(bs.h_plus[k].adjoint() * bs.h_plus[j])});
        }
    }

    Eigen::Index total_minus = 0, total_plus = 0;
    for (std::size_t k = 0; k < n; ++k) {
        total_minus += bs.dims_minus[k];
        total_plus += bs.dims_plus[k];
    }
    ComplexMatrix g0 = ComplexMatrix::Zero(total_plus, total_minus);
    Eigen::Index r = 0, c = 0;
    for (std::size_t k = 0; k < n; ++k) {
        g0.block(r, c, bs.dims_plus[k], bs.dims_minus[k]) = bs.blocks[k];
        r += bs.dims_plus[k];
        c += bs.dims_minus[k];
    }
    const ComplexMatrix h0 = g0.adjoint() * g0 - ComplexMatrix::Identity(total_minus, total_minus);
    bs.unitarity_residual = spectral_norm(h0);
    // Completeness: the H_k^- must fill X + N-, the H_k^+ must fill X + N+.
    if (total_minus != sys.dim_x() + sys.dim_nm() || total_plus != sys.dim_x() + sys.dim_np()) {
        bs.unitarity_residual = std::max(bs.unitarity_residual, 1.0);
    }
    return bs;
}

ClosedSubspace closely_connected_subspace(const MultiLSDS& sys, double rank_tol) {
    const Eigen::Index dx = sys.dim_x();
    const std::size_t n = sys.n();
    ClosedSubspace out;
    out.basis = ComplexMatrix(dx, 0);
    if (dx == 0) return out;

    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        scale = std::max({scale, spectral_norm(sys.a()[k]), spectral_norm(sys.b()[k]),
                          spectral_norm(sys.c()[k])});
    }
    if (scale == 0.0) return out;
    const double accept = rank_tol * scale;

    std::vector<ComplexVector> q;
    auto try_add = [&](ComplexVector v) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : q) v -= b * b.dot(v);
        }
        const double r = v.norm();
        if (r > accept && static_cast<Eigen::Index>(q.size()) < dx) {
            q.push_back(v / r);
            return true;
        }
        return false;
    };

    for (std::size_t k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < sys.b()[k].cols(); ++j) try_add(sys.b()[k].col(j));
    }
    for (std::size_t k = 0; k < n; ++k) {
        const ComplexMatrix cs = sys.c()[k].adjoint();
        for (Eigen::Index j = 0; j < cs.cols(); ++j) try_add(cs.col(j));
    }

    std::vector<ComplexMatrix> ops;
    for (std::size_t k = 0; k < n; ++k) ops.push_back(sys.a()[k]);
    for (std::size_t k = 0; k < n; ++k) ops.push_back(sys.a()[k].adjoint());

    while (!q.empty() && static_cast<Eigen::Index>(q.size()) < dx) {
        ++out.sweeps;
        bool grew = false;
        for (const auto& op : ops) {
            const std::size_t current = q.size();
            for (std::size_t i = 0; i < current; ++i) {
                if (try_add(op * q[i])) grew = true;
            }
        }
        if (!grew) break;
    }

    out.basis = ComplexMatrix(dx, static_cast<Eigen::Index>(q.size()));
    for (std::size_t i = 0; i < q.size(); ++i) out.basis.col(static_cast<Eigen::Index>(i)) = q[i];
    return out;
}

ReducedSystem reduce_closely_connected(const MultiLSDS& sys, double rank_tol) {
    const ComplexMatrix qb = closely_connected_subspace(sys, rank_tol).basis;
    std::vector<ComplexMatrix> a, b, c;
    for (std::size_t k = 0; k < sys.n(); ++k) {
        a.push_back(qb.adjoint() * sys.a()[k] * qb);
        b.push_back(qb.adjoint() * sys.b()[k]);
        c.push_back(sys.c()[k] * qb);
    }
    return {MultiLSDS(OperatorTuple(a), OperatorTuple(b), OperatorTuple(c), sys.d()), qb};
}

bool completely_nonunitary_check(const MultiLSDS& sys, double tol, double rank_tol) {
    const auto cert = conservativity_check(sys, tol);
    if (!cert.pass) {
        throw PreconditionError("complete non-unitarity test requires a conservative system");
    }
    return closely_connected_subspace(sys, rank_tol).dim() == sys.dim_x();
}

}  // namespace ndsys
