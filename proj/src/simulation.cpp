#include "ndsys/simulation.hpp"

#include <cmath>

#include "ndsys/errors.hpp"

namespace ndsys {

namespace {

void check_inputs(const MultiLSDS& sys, const LatticeSignal& init, const LatticeSignal& input,
                  const SimulationWindow& window) {
    if (window.box.dims() != sys.n()) throw ArityError("window arity does not match N");
    if (window.n_max < 1) throw DomainError("window needs n_max >= 1");
    if (init.n() != sys.n() || input.n() != sys.n()) {
        throw ArityError("signal arity does not match N");
    }
    if (init.dim() != sys.dim_x()) throw ShapeError("initial state dimension mismatch");
    if (input.dim() != sys.dim_nm()) throw ShapeError("input dimension mismatch");
    for (const auto& [t, v] : init.entries()) {
        if (front_of(t) != 0) throw DomainError("initial states must lie on the front |t| = 0");
    }
}

std::set<LatticePoint> contamination_mask(const Box& box, int n_max) {
    std::set<LatticePoint> bad;
    for (int n = 1; n <= n_max; ++n) {
        for (const auto& t : box.front(n)) {
            for (std::size_t k = 0; k < t.size(); ++k) {
                const auto p = shifted(t, k, -1);
                if (!box.contains(p) || bad.count(p)) {
                    bad.insert(t);
                    break;
                }
            }
        }
    }
    return bad;
}

}  // namespace

Trajectory simulate(const MultiLSDS& sys, const LatticeSignal& init, const LatticeSignal& input,
                    const SimulationWindow& window) {
    check_inputs(sys, init, input, window);
    const Box& box = window.box;
    Trajectory tr{LatticeSignal(sys.n(), sys.dim_x()), LatticeSignal(sys.n(), sys.dim_np()),
                  contamination_mask(box, window.n_max)};
    for (const auto& t : box.front(0)) tr.states.set(t, init.at(t));

    const Eigen::Index x = sys.dim_x();
    for (int n = 1; n <= window.n_max; ++n) {
        for (const auto& t : box.front(n)) {
            ComplexVector xs = ComplexVector::Zero(x);
            ComplexVector ys = ComplexVector::Zero(sys.dim_np());
            for (std::size_t k = 0; k < sys.n(); ++k) {
                const auto p = shifted(t, k, -1);
                if (!box.contains(p)) continue;
                const ComplexVector xp = tr.states.at(p);
                const ComplexVector up = input.at(p);
                xs.noalias() += sys.a()[k] * xp + sys.b()[k] * up;
                ys.noalias() += sys.c()[k] * xp + sys.d()[k] * up;
            }
            tr.states.set(t, std::move(xs));
            tr.outputs.set(t, std::move(ys));
        }
    }
    return tr;
}

Trajectory closed_form(const MultiLSDS& sys, const LatticeSignal& init,
                       const LatticeSignal& input, const SimulationWindow& window) {
    check_inputs(sys, init, input, window);
    const Box& box = window.box;
    const std::size_t big_n = sys.n();
    const MultipowerTable table(sys.a(), sys.b(), sys.c(), window.n_max);
    Trajectory tr{LatticeSignal(big_n, sys.dim_x()), LatticeSignal(big_n, sys.dim_np()),
                  contamination_mask(box, window.n_max)};
    for (const auto& t : box.front(0)) tr.states.set(t, init.at(t));

    auto minus = [](const LatticePoint& t, const MultiIndex& s) {
        LatticePoint r = t;
        for (std::size_t k = 0; k < r.size(); ++k) r[k] -= s[k];
        return r;
    };

    for (int n = 1; n <= window.n_max; ++n) {
        const auto top = indices_of_order(big_n, n);
        const auto all = indices_up_to_order(big_n, n);
        for (const auto& t : box.front(n)) {
            ComplexVector xs = ComplexVector::Zero(sys.dim_x());
            ComplexVector ys = ComplexVector::Zero(sys.dim_np());
            for (const auto& s : top) {
                const auto p = minus(t, s);
                if (!init.contains(p)) continue;
                const ComplexVector x0 = init.at(p);
                xs.noalias() += table.power(s) * x0;
                ys.noalias() += table.flat(s) * x0;
            }
            for (const auto& s : all) {
                if (s.order() == 0) continue;
                const auto p = minus(t, s);
                if (!input.contains(p)) continue;
                const ComplexVector u = input.at(p);
                xs.noalias() += table.sharp(s) * u;
                if (s.order() == 1) {
                    for (std::size_t k = 0; k < big_n; ++k) {
                        if (s[k] == 1) ys.noalias() += sys.d()[k] * u;
                    }
                } else {
                    ys.noalias() += table.flat_sharp(s) * u;
                }
            }
            tr.states.set(t, std::move(xs));
            tr.outputs.set(t, std::move(ys));
        }
    }
    return tr;
}

std::vector<EnergyRow> energy_balance_report(const MultiLSDS& sys, const LatticeSignal& init,
                                             const LatticeSignal& input,
                                             const SimulationWindow& window, double tol) {
    const Trajectory tr = simulate(sys, init, input, window);
    const Box& box = window.box;

    bool outside = false;
    for (const auto& [t, v] : init.entries()) {
        if (!box.contains(t) && v.squaredNorm() > 0.0) outside = true;
    }
    // Input reached outside the box: only fronts up to n_max - 1 feed the ledger.
    auto input_outside_up_to = [&](int n) {
        for (const auto& [t, v] : input.entries()) {
            const int f = front_of(t);
            if (f >= 0 && f <= n && !box.contains(t) && v.squaredNorm() > 0.0) return true;
        }
        return false;
    };

    auto box_energy = [&](const LatticeSignal& s, int n) {
        double e = 0.0;
        for (const auto& t : box.front(n)) e += s.at(t).squaredNorm();
        return e;
    };

    std::vector<EnergyRow> rows;
    bool spilled = false;
    for (int n = 1; n <= window.n_max; ++n) {
        // Anything in front n-1 pushed by G_k to a point outside the box.
        for (const auto& q : box.front(n - 1)) {
            const ComplexVector xq = tr.states.at(q);
            const ComplexVector uq = input.at(q);
            for (std::size_t k = 0; k < sys.n() && !spilled; ++k) {
                if (box.contains(shifted(q, k, 1))) continue;
                const double push = (sys.a()[k] * xq + sys.b()[k] * uq).squaredNorm() +
                                    (sys.c()[k] * xq + sys.d()[k] * uq).squaredNorm();
                if (push > 0.0) spilled = true;
            }
        }
        EnergyRow r;
        r.n = n;
        r.e_minus = box_energy(input, n - 1);
        r.e_plus = box_energy(tr.outputs, n);
        r.e_x = box_energy(tr.states, n);
        r.e_x_prev = box_energy(tr.states, n - 1);
        r.lhs = r.e_minus - r.e_plus;
        r.rhs = r.e_x - r.e_x_prev;
        r.difference = r.lhs - r.rhs;
        r.contaminated = spilled || outside || input_outside_up_to(n - 1);
        r.dissipative_ok = r.lhs >= r.rhs - tol;
        r.conservative_ok = std::abs(r.difference) <= tol;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace ndsys
