#include "ndsys/lax_phillips.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ndsys/errors.hpp"
#include "ndsys/linalg.hpp"

namespace ndsys {

namespace {

void check_k(const MultiLSDS& sys, std::size_t k) {
    if (k >= sys.n()) {
        throw DomainError("generator index " + std::to_string(k + 1) + " out of range 1.." +
                          std::to_string(sys.n()));
    }
}

void check_vector(const MultiLSDS& sys, const LPVector& h) {
    if (h.box.dims() != sys.n()) throw ArityError("vector box arity does not match N");
    if (h.u_plus.dim() != sys.dim_np() || h.y.dim() != sys.dim_x() ||
        h.u_minus.dim() != sys.dim_nm()) {
        throw ShapeError("vector components do not match the system spaces");
    }
}

// Reads one component at p; out-of-box or flagged reads mark the result.
struct Reader {
    const Box& box;
    const LatticeSignal& sig;
    const std::set<LatticePoint>& flagged;

    ComplexVector operator()(const LatticePoint& p, bool& bad) const {
        if (!box.contains(p)) {
            bad = true;
            return ComplexVector::Zero(sig.dim());
        }
        if (flagged.count(p)) bad = true;
        return sig.at(p);
    }
};

LPVector empty_like(const LPVector& h) {
    return {h.box, LatticeSignal(h.u_plus.n(), h.u_plus.dim()),
            LatticeSignal(h.y.n(), h.y.dim()), LatticeSignal(h.u_minus.n(), h.u_minus.dim())};
}

double masked_sq(const LatticeSignal& a, const LatticeSignal& b,
                 const std::set<LatticePoint>& skip) {
    std::set<LatticePoint> keys;
    for (const auto& [t, v] : a.entries()) keys.insert(t);
    for (const auto& [t, v] : b.entries()) keys.insert(t);
    double s = 0.0;
    for (const auto& t : keys) {
        if (!skip.count(t)) s += (a.at(t) - b.at(t)).squaredNorm();
    }
    return s;
}

Complex signal_dot(const LatticeSignal& a, const LatticeSignal& b) {
    Complex s = 0.0;
    for (const auto& [t, v] : b.entries()) {
        if (a.contains(t)) s += a.at(t).dot(v);
    }
    return s;
}

LatticeSignal negate_points(const LatticeSignal& s) {
    LatticeSignal out(s.n(), s.dim());
    for (const auto& [t, v] : s.entries()) {
        LatticePoint m(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) m[i] = -t[i];
        out.set(m, v);
    }
    return out;
}

}  // namespace

LPVector zero_lp_vector(const MultiLSDS& sys, const Box& box) {
    return {box, LatticeSignal(sys.n(), sys.dim_np()), LatticeSignal(sys.n(), sys.dim_x()),
            LatticeSignal(sys.n(), sys.dim_nm())};
}

LPVector random_interior_vector(const MultiLSDS& sys, const Box& box, int margin,
                                std::mt19937_64& rng) {
    LPVector h = zero_lp_vector(sys, box);
    for (const auto& t : box.points()) {
        if (!box.deep_inside(t, margin)) continue;
        const int f = front_of(t);
        if (f <= 0) h.u_plus.set(t, random_gaussian(sys.dim_np(), 1, rng).col(0));
        if (f == 0) h.y.set(t, random_gaussian(sys.dim_x(), 1, rng).col(0));
        if (f >= 0) h.u_minus.set(t, random_gaussian(sys.dim_nm(), 1, rng).col(0));
    }
    return h;
}

LPResult apply_generator(const MultiLSDS& sys, std::size_t k, const LPVector& h,
                         const LPMask& in) {
    check_k(sys, k);
    check_vector(sys, h);
    const Box& box = h.box;
    const Reader up{box, h.u_plus, in.u_plus};
    const Reader yy{box, h.y, in.y};
    const Reader um{box, h.u_minus, in.u_minus};
    LPResult r{empty_like(h), {}};

    for (const auto& t : box.points()) {
        const int f = front_of(t);
        const LatticePoint tk = shifted(t, k, 1);
        if (f <= -1) {
            bool bad = false;
            r.value.u_plus.set(t, up(tk, bad));
            if (bad) r.contaminated.u_plus.insert(t);
        }
        if (f == 0) {
            bool bad = false;
            ComplexVector out = ComplexVector::Zero(sys.dim_np());
            ComplexVector st = ComplexVector::Zero(sys.dim_x());
            for (std::size_t j = 0; j < sys.n(); ++j) {
                const LatticePoint p = shifted(tk, j, -1);
                const ComplexVector yv = yy(p, bad);
                const ComplexVector uv = um(p, bad);
                out.noalias() += sys.c()[j] * yv + sys.d()[j] * uv;
                st.noalias() += sys.a()[j] * yv + sys.b()[j] * uv;
            }
            r.value.u_plus.set(t, std::move(out));
            r.value.y.set(t, std::move(st));
            if (bad) {
                r.contaminated.u_plus.insert(t);
                r.contaminated.y.insert(t);
            }
        }
        if (f >= 0) {
            bool bad = false;
            r.value.u_minus.set(t, um(tk, bad));
            if (bad) r.contaminated.u_minus.insert(t);
        }
    }
    return r;
}

LPResult apply_adjoint(const MultiLSDS& sys, std::size_t k, const LPVector& h,
                       const LPMask& in) {
    check_k(sys, k);
    check_vector(sys, h);
    const Box& box = h.box;
    const Reader up{box, h.u_plus, in.u_plus};
    const Reader yy{box, h.y, in.y};
    const Reader um{box, h.u_minus, in.u_minus};
    LPResult r{empty_like(h), {}};

    for (const auto& t : box.points()) {
        const int f = front_of(t);
        const LatticePoint tk = shifted(t, k, -1);
        if (f <= 0) {
            bool bad = false;
            r.value.u_plus.set(t, up(tk, bad));
            if (bad) r.contaminated.u_plus.insert(t);
        }
        if (f == 0) {
            bool bad = false;
            ComplexVector st = ComplexVector::Zero(sys.dim_x());
            ComplexVector in_part = ComplexVector::Zero(sys.dim_nm());
            for (std::size_t j = 0; j < sys.n(); ++j) {
                const LatticePoint p = shifted(tk, j, 1);
                const ComplexVector yv = yy(p, bad);
                const ComplexVector uv = up(p, bad);
                st.noalias() += sys.a()[j].adjoint() * yv + sys.c()[j].adjoint() * uv;
                in_part.noalias() += sys.b()[j].adjoint() * yv + sys.d()[j].adjoint() * uv;
            }
            r.value.y.set(t, std::move(st));
            r.value.u_minus.set(t, std::move(in_part));
            if (bad) {
                r.contaminated.y.insert(t);
                r.contaminated.u_minus.insert(t);
            }
        }
        if (f >= 1) {
            bool bad = false;
            r.value.u_minus.set(t, um(tk, bad));
            if (bad) r.contaminated.u_minus.insert(t);
        }
    }
    return r;
}

LPVector gamma_map(const LPVector& h) {
    return {h.box.negated(), negate_points(h.u_minus), negate_points(h.y),
            negate_points(h.u_plus)};
}

LPVector gamma_inverse(const LPVector& h) { return gamma_map(h); }

Complex inner_product(const LPVector& a, const LPVector& b) {
    return signal_dot(a.u_plus, b.u_plus) + signal_dot(a.y, b.y) +
           signal_dot(a.u_minus, b.u_minus);
}

double norm(const LPVector& h) { return std::sqrt(std::max(0.0, inner_product(h, h).real())); }

double masked_distance(const LPVector& a, const LPVector& b, const LPMask& skip) {
    return std::sqrt(masked_sq(a.u_plus, b.u_plus, skip.u_plus) + masked_sq(a.y, b.y, skip.y) +
                     masked_sq(a.u_minus, b.u_minus, skip.u_minus));
}

namespace {

LPMask merge(const LPMask& a, const LPMask& b) {
    LPMask m = a;
    m.u_plus.insert(b.u_plus.begin(), b.u_plus.end());
    m.y.insert(b.y.begin(), b.y.end());
    m.u_minus.insert(b.u_minus.begin(), b.u_minus.end());
    return m;
}

}  // namespace

double commutation_residual(const MultiLSDS& sys, std::size_t k, std::size_t j, int trials,
                            const Box& box, std::uint64_t seed) {
    if (sys.n() == 1) return 0.0;
    check_k(sys, k);
    check_k(sys, j);
    if (k == j) throw DomainError("commutation residual needs two distinct generators");
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        const LPVector h = random_interior_vector(sys, box, 2, rng);
        const LPResult wj = apply_generator(sys, j, h);
        const LPResult wkj = apply_generator(sys, k, wj.value, wj.contaminated);
        const LPResult wk = apply_generator(sys, k, h);
        const LPResult wjk = apply_generator(sys, j, wk.value, wk.contaminated);
        const LPMask skip = merge(wkj.contaminated, wjk.contaminated);
        worst = std::max(worst, masked_distance(wkj.value, wjk.value, skip));
    }
    return worst;
}

MetricReport metric_check(const MultiLSDS& sys, int trials, const Box& box, std::uint64_t seed,
                          double tol) {
    std::mt19937_64 rng(seed);
    MetricReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    rep.max_ratio = 0.0;
    for (int i = 0; i < trials; ++i) {
        const LPVector h = random_interior_vector(sys, box, 1, rng);
        const double nh = norm(h);
        if (nh == 0.0) continue;
        for (std::size_t k = 0; k < sys.n(); ++k) {
            const double ratio = norm(apply_generator(sys, k, h).value) / nh;
            rep.min_ratio = std::min(rep.min_ratio, ratio);
            rep.max_ratio = std::max(rep.max_ratio, ratio);
        }
    }
    if (rep.max_ratio == 0.0 && !std::isfinite(rep.min_ratio)) rep.min_ratio = 0.0;
    rep.contractive = rep.max_ratio <= 1.0 + tol;
    rep.isometric = rep.contractive && rep.min_ratio >= 1.0 - tol;
    return rep;
}

OneParamSystemView associated_one_param(const MultiLSDS& sys, std::size_t k, const Box& box) {
    check_k(sys, k);
    if (box.dims() != sys.n()) throw ArityError("box arity does not match N");
    OneParamSystemView v;
    v.k = k;
    v.front = box.front(0);
    const auto m = static_cast<Eigen::Index>(v.front.size());
    std::map<LatticePoint, Eigen::Index> index;
    for (Eigen::Index i = 0; i < m; ++i) index[v.front[i]] = i;

    const Eigen::Index dx = sys.dim_x(), nm = sys.dim_nm(), np = sys.dim_np();
    v.a = ComplexMatrix::Zero(m * dx, m * dx);
    v.b = ComplexMatrix::Zero(m * dx, m * nm);
    v.c = ComplexMatrix::Zero(m * np, m * dx);
    v.d = ComplexMatrix::Zero(m * np, m * nm);
    v.lossy.assign(v.front.size(), false);

    for (Eigen::Index i = 0; i < m; ++i) {
        const LatticePoint tk = shifted(v.front[i], k, 1);
        for (std::size_t j = 0; j < sys.n(); ++j) {
            auto it = index.find(shifted(tk, j, -1));
            if (it == index.end()) {
                v.lossy[i] = true;
                continue;
            }
            const Eigen::Index c = it->second;
            v.a.block(i * dx, c * dx, dx, dx) += sys.a()[j];
            v.b.block(i * dx, c * nm, dx, nm) += sys.b()[j];
            v.c.block(i * np, c * dx, np, dx) += sys.c()[j];
            v.d.block(i * np, c * nm, np, nm) += sys.d()[j];
        }
    }
    return v;
}

OneParamRun run_one_param(const OneParamSystemView& view, const ComplexVector& x0,
                          const std::vector<ComplexVector>& inputs) {
    if (x0.size() != view.a.cols()) throw ShapeError("initial state size mismatch");
    OneParamRun run;
    run.states.push_back(x0);
    run.contaminated.emplace_back(view.front.size(), false);

    std::map<LatticePoint, std::size_t> index;
    for (std::size_t i = 0; i < view.front.size(); ++i) index[view.front[i]] = i;
    const std::size_t n = view.front.empty() ? 0 : view.front.front().size();

    for (const auto& u : inputs) {
        if (u.size() != view.b.cols()) throw ShapeError("input size mismatch");
        const ComplexVector& x = run.states.back();
        run.outputs.push_back(view.c * x + view.d * u);
        run.states.push_back(view.a * x + view.b * u);

        const auto& prev = run.contaminated.back();
        std::vector<bool> next(view.front.size(), false);
        for (std::size_t i = 0; i < view.front.size(); ++i) {
            bool bad = view.lossy[i];
            const LatticePoint tk = shifted(view.front[i], view.k, 1);
            for (std::size_t j = 0; j < n && !bad; ++j) {
                auto it = index.find(shifted(tk, j, -1));
                if (it != index.end() && prev[it->second]) bad = true;
            }
            next[i] = bad;
        }
        run.contaminated.push_back(std::move(next));
    }
    return run;
}

}  // namespace ndsys
