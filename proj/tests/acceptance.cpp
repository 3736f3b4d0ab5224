// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "ndsys/analysis.hpp"
#include "ndsys/errors.hpp"
#include "ndsys/lax_phillips.hpp"
#include "ndsys/realization.hpp"
#include "ndsys/sampling.hpp"
#include "ndsys/simulation.hpp"
#include "ndsys/transfer.hpp"
#include "support.hpp"

using namespace ndsys;
using namespace ndsys::testing;

namespace {

struct Outcome {
    bool ok = true;
    double worst = 0.0;  // largest residual seen, relative to its own tolerance
    std::string note;

    // Records residual r against tolerance tol.
    void check(double r, double tol) {
        worst = std::max(worst, r / tol);
        if (!(r <= tol)) ok = false;
    }
    void require(bool cond, const std::string& why) {
        if (!cond) {
            ok = false;
            if (note.empty()) note = why;
        }
    }
};

double rel(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

double rel(const ComplexVector& a, const ComplexVector& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

// ---- 1 --------------------------------------------------------------------

Outcome example_reproduction() {
    Outcome o;
    const auto ex = builtin_examples();
    o.check(conservativity_check(ex.alpha).max_residual(), 1e-12);
    o.check(conservativity_check(ex.alpha_prime).max_residual(), 1e-12);
    o.require(closely_connected_subspace(ex.alpha).dim() == 1, "cc dim of alpha is not 1");
    o.require(closely_connected_subspace(ex.alpha_prime).dim() == 3, "cc dim of alpha' is not 3");
    std::mt19937_64 rng(1001);
    for (int i = 0; i < 50; ++i) {
        const Point z = random_point(2, 1.0, rng);
        for (const auto* s : {&ex.alpha, &ex.alpha_prime}) {
            o.check(std::abs(transfer_eval(*s, z)(0, 0) - z[0] * z[1]), 1e-12);
        }
    }
    return o;
}

// ---- 2 --------------------------------------------------------------------

Outcome recursion_vs_closed_form() {
    Outcome o;
    std::mt19937_64 rng(1002);
    const int nmax = 5;
    std::size_t clean = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const auto s = random_system(n, uniform_int(rng, 1, 4), uniform_int(rng, 1, 4),
                                     uniform_int(rng, 1, 4), rng);
        const Box box = Box::cube(n, -3, nmax);
        LatticeSignal init(n, s.dim_x()), input(n, s.dim_nm());
        if (trial % 2 == 0) {
            input.set(LatticePoint(n, 0), ComplexVector::Ones(s.dim_nm()));
        } else {
            init = random_signal_on(box.front(0), n, s.dim_x(), rng);
            std::vector<LatticePoint> pts;
            for (const auto& t : box.points()) {
                if (front_of(t) >= 0 && front_of(t) < nmax) pts.push_back(t);
            }
            input = random_signal_on(pts, n, s.dim_nm(), rng);
        }
        const SimulationWindow w{box, nmax};
        const auto r = simulate(s, init, input, w);
        const auto c = closed_form(s, init, input, w);
        for (const auto& t : box.points()) {
            const int f = front_of(t);
            if (f < 1 || f > nmax || !r.is_clean(t)) continue;
            ++clean;
            o.check(rel(c.states.at(t), r.states.at(t)), 1e-10);
            o.check(rel(c.outputs.at(t), r.outputs.at(t)), 1e-10);
        }
    }
    o.require(clean > 1000, "too few clean points");
    return o;
}

// ---- 3 --------------------------------------------------------------------

Outcome multipower_identity() {
    Outcome o;
    std::mt19937_64 rng(1003);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const Eigen::Index d = uniform_int(rng, 1, 4);
        const auto a = random_tuple(n, d, d, rng);
        const auto b = random_tuple(n, d, 2, rng);
        const auto c = random_tuple(n, 2, d, rng);
        const Point z = random_point(n, 1.0, rng);
        const int order = uniform_int(rng, 2, 5);
        const ComplexMatrix za = eval_pencil(z, a), zb = eval_pencil(z, b),
                            zc = eval_pencil(z, c);

        ComplexMatrix pw = ComplexMatrix::Identity(d, d);
        for (int i = 0; i < order; ++i) pw = pw * za;
        ComplexMatrix pw1 = ComplexMatrix::Identity(d, d);
        for (int i = 0; i < order - 1; ++i) pw1 = pw1 * za;
        ComplexMatrix pw2 = ComplexMatrix::Identity(d, d);
        for (int i = 0; i < order - 2; ++i) pw2 = pw2 * za;

        ComplexMatrix sym = ComplexMatrix::Zero(d, d), right = ComplexMatrix::Zero(d, 2),
                      left = ComplexMatrix::Zero(2, d), both = ComplexMatrix::Zero(2, 2);
        for (const auto& s : indices_of_order(n, order)) {
            Complex zs = 1.0;
            for (std::size_t k = 0; k < n; ++k) zs *= std::pow(z[k], s[k]);
            const double w = double(multinomial(s));
            sym += w * zs * sym_multipower(a, s);
            right += w * zs * bordered_multipower(Border::Right, a, b, c, s);
            left += w * zs * bordered_multipower(Border::Left, a, b, c, s);
            both += w * zs * bordered_multipower(Border::Both, a, b, c, s);
        }
        o.check(rel(sym, pw), 1e-10);
        o.check(rel(right, ComplexMatrix(pw1 * zb)), 1e-10);
        o.check(rel(left, ComplexMatrix(zc * pw1)), 1e-10);
        o.check(rel(both, ComplexMatrix(zc * pw2 * zb)), 1e-10);
    }
    return o;
}

// ---- 4 --------------------------------------------------------------------

// Data supported near the origin so that the energy stays inside the window.
void central_data(std::size_t n, const MultiLSDS& s, std::mt19937_64& rng, LatticeSignal& init,
                  LatticeSignal& input) {
    const Box core = Box::cube(n, -1, 1);
    init = LatticeSignal(n, s.dim_x());
    input = LatticeSignal(n, s.dim_nm());
    for (const auto& t : core.points()) {
        if (front_of(t) == 0) init.set(t, random_gaussian(s.dim_x(), 1, rng).col(0));
        if (front_of(t) >= 0) input.set(t, random_gaussian(s.dim_nm(), 1, rng).col(0));
    }
}

Outcome energy_laws() {
    Outcome o;
    std::mt19937_64 rng(1004);
    int clean = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const auto s = random_conservative(n, uniform_int(rng, 1, 3), uniform_int(rng, 1, 2), rng);
        const SimulationWindow w{Box::cube(n, -5, 5), 4};
        for (const auto& sys : {s, conjugate(s)}) {
            LatticeSignal init, input;
            central_data(n, sys, rng, init, input);
            for (const auto& r : energy_balance_report(sys, init, input, w)) {
                if (r.contaminated) continue;
                ++clean;
                o.check(std::abs(r.lhs - r.rhs), 1e-9);
            }
        }
    }
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const auto s = random_dissipative(n, uniform_int(rng, 1, 3), uniform_int(rng, 1, 2), rng);
        const SimulationWindow w{Box::cube(n, -5, 5), 4};
        LatticeSignal init, input;
        central_data(n, s, rng, init, input);
        for (const auto& r : energy_balance_report(s, init, input, w)) {
            if (r.contaminated) continue;
            ++clean;
            o.check(std::max(0.0, r.rhs - r.lhs), 1e-9);
        }
    }
    o.require(clean >= 200, "too few clean fronts");
    return o;
}

// ---- 5 --------------------------------------------------------------------

Outcome conservativity_equivalence() {
    Outcome o;
    std::mt19937_64 rng(1005);
    std::vector<MultiLSDS> systems;
    const auto ex = builtin_examples();
    systems.push_back(ex.alpha);
    systems.push_back(ex.alpha_prime);
    for (int i = 0; i < 20; ++i) {
        systems.push_back(random_conservative(1 + i % 4, uniform_int(rng, 1, 4),
                                              uniform_int(rng, 1, 3), rng));
    }
    int certified = 0;
    for (std::size_t i = 0; i < systems.size(); ++i) {
        const auto& s = systems[i];
        if (!conservativity_check(s).pass) continue;
        ++certified;
        for (const auto& z : random_torus(s.n(), 100, 500 + i)) {
            Eigen::JacobiSVD<ComplexMatrix> svd(s.pencil(z));
            const auto& sv = svd.singularValues();
            o.check(std::abs(sv(0) - 1.0), 1e-9);
            o.check(std::abs(sv(sv.size() - 1) - 1.0), 1e-9);
        }
        const auto bs = block_structure(s);
        o.check(bs.reconstruction_residual, 1e-9);
        o.check(bs.unitarity_residual, 1e-9);
        o.check(bs.orthogonality_residual, 1e-9);
    }
    o.require(certified == int(systems.size()), "a conservative fixture was not certified");
    return o;
}

// ---- 6 --------------------------------------------------------------------

Outcome lax_phillips_structure() {
    Outcome o;
    std::mt19937_64 rng(1006);
    int compared = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 2;
        const auto s = random_system(n, uniform_int(rng, 1, 3), uniform_int(rng, 1, 2),
                                     uniform_int(rng, 1, 2), rng);
        const auto star = conjugate(s);
        const Box box = Box::cube(n, n == 2 ? -5 : -3, n == 2 ? 5 : 3);

        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = k + 1; j < n; ++j) {
                o.check(commutation_residual(s, k, j, 2, box, 2000 + trial), 1e-10);
            }
            const auto h = random_interior_vector(s, box, 2, rng);
            const auto g = random_interior_vector(s, box, 2, rng);
            const double scale = norm(h) * norm(g);
            const Complex lhs = inner_product(g, apply_generator(s, k, h).value);
            const Complex rhs = inner_product(apply_adjoint(s, k, g).value, h);
            o.check(std::abs(lhs - rhs) / scale, 1e-10);

            const auto via_adjoint = gamma_map(apply_adjoint(s, k, h).value);
            const auto via_star = apply_generator(star, k, gamma_map(h)).value;
            o.check(masked_distance(via_adjoint, via_star, {}) / norm(h), 1e-10);
        }

        // Reproduction: the k-th one-parametric system run on front 0 against
        // the N-parametric recursion at s + n e_k.
        const int steps = 3;
        const auto init = random_signal_on(box.front(0), n, s.dim_x(), rng);
        std::vector<LatticePoint> pts;
        for (const auto& t : box.points()) {
            if (front_of(t) >= 0 && front_of(t) < steps) pts.push_back(t);
        }
        const auto input = random_signal_on(pts, n, s.dim_nm(), rng);
        const auto traj = simulate(s, init, input, {box, steps});
        for (std::size_t k = 0; k < n; ++k) {
            const auto view = associated_one_param(s, k, box);
            const auto m = static_cast<Eigen::Index>(view.front.size());
            const Eigen::Index dx = s.dim_x(), nm = s.dim_nm(), np = s.dim_np();
            ComplexVector x0(m * dx);
            for (Eigen::Index i = 0; i < m; ++i) x0.segment(i * dx, dx) = init.at(view.front[i]);
            std::vector<ComplexVector> u;
            for (int step = 0; step < steps; ++step) {
                ComplexVector un(m * nm);
                for (Eigen::Index i = 0; i < m; ++i) {
                    un.segment(i * nm, nm) = input.at(shifted(view.front[i], k, step));
                }
                u.push_back(un);
            }
            const auto run = run_one_param(view, x0, u);
            for (int step = 1; step <= steps; ++step) {
                for (Eigen::Index i = 0; i < m; ++i) {
                    const LatticePoint t = shifted(view.front[i], k, step);
                    if (run.contaminated[step][i] || !box.contains(t) || !traj.is_clean(t)) {
                        continue;
                    }
                    ++compared;
                    o.check(rel(ComplexVector(run.states[step].segment(i * dx, dx)),
                                traj.states.at(t)),
                            1e-10);
                    o.check(rel(ComplexVector(run.outputs[step - 1].segment(i * np, np)),
                                traj.outputs.at(t)),
                            1e-10);
                }
            }
        }
    }
    o.require(compared > 100, "too few reproduction points");
    return o;
}

// ---- 7 --------------------------------------------------------------------

Outcome realization_round_trip() {
    Outcome o;
    std::mt19937_64 rng(1007);
    std::vector<AglerData> fixtures{canonical_agler_fixture()};
    while (fixtures.size() < 11) {
        const std::size_t n = 2 + fixtures.size() % 2;
        auto d = random_agler_fixture(n, uniform_int(rng, 1, 2), uniform_int(rng, 1, 3), rng);
        if (verify_agler_identity(d, 50, 3000 + fixtures.size()) > 1e-10) continue;
        fixtures.push_back(std::move(d));
    }
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        RealizeOptions opt;
        opt.seed = 4000 + i;
        std::optional<RealizationResult> made;
        try {
            made = realize(fixtures[i], opt);
        } catch (const Error& e) {
            o.require(false, std::string("realize threw: ") + e.what());
            continue;
        }
        const RealizationResult& r = *made;
        o.check(r.residuals.at("conservativity"), 1e-8);
        o.check(r.residuals.at("transfer"), 1e-7);
        o.check(r.residuals.at("state_identity"), 1e-7);
        // Independent fresh grid.
        for (const auto& z : random_polydisc(r.system.n(), 100, 0.9, 5000 + i)) {
            o.check(spectral_norm(transfer_eval(r.system, z) - fixtures[i].theta.evaluate(z)),
                    1e-7);
        }
    }
    return o;
}

// ---- 8 --------------------------------------------------------------------

Outcome single_parameter() {
    Outcome o;
    std::mt19937_64 rng(1008);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_system(1, uniform_int(rng, 1, 4), uniform_int(rng, 1, 3),
                                     uniform_int(rng, 1, 3), rng);
        const ComplexMatrix &a = s.a()[0], &b = s.b()[0], &c = s.c()[0], &d = s.d()[0];
        const int steps = 10;
        const ComplexVector x0 = random_gaussian(s.dim_x(), 1, rng).col(0);
        LatticeSignal init(1, s.dim_x()), input(1, s.dim_nm());
        init.set({0}, x0);
        std::vector<ComplexVector> u;
        for (int t = 0; t < steps; ++t) {
            u.push_back(random_gaussian(s.dim_nm(), 1, rng).col(0));
            input.set({t}, u.back());
        }
        const auto tr = simulate(s, init, input, {Box({0}, {steps}), steps});
        const auto ref = textbook_simulate(a, b, c, d, x0, u);
        for (int t = 1; t <= steps; ++t) {
            o.require(tr.is_clean({t}), "one-parameter trajectory flagged");
            o.check(rel(tr.states.at({t}), ref.x[t]), 1e-12);
            o.check(rel(tr.outputs.at({t}), ref.y[t - 1]), 1e-12);
        }

        const double rho = 0.2 / std::max(1.0, spectral_norm(a));
        const auto quotient = schwarz_split(maclaurin_polynomial(s, 60));
        for (int i = 0; i < 20; ++i) {
            const Complex z = random_point(1, rho, rng)[0];
            const ComplexMatrix classical = textbook_transfer(a, b, c, d, z);
            o.check(rel(transfer_eval(s, Point{z}), ComplexMatrix(z * classical)), 1e-12);
            o.check(rel(quotient.evaluate(Point{z}), classical), 1e-12);
        }
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"example reproduction", 1.0, example_reproduction},
        {"recursion / closed form", 30.0, recursion_vs_closed_form},
        {"multipower generating identity", 10.0, multipower_identity},
        {"energy laws", 60.0, energy_laws},
        {"conservativity equivalence", 60.0, conservativity_equivalence},
        {"Lax-Phillips structure", 60.0, lax_phillips_structure},
        {"realization round trip", 120.0, realization_round_trip},
        {"single-parameter degeneration", 60.0, single_parameter},
    };
    int failed = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.note = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_s) {
            o.ok = false;
            if (o.note.empty()) o.note = "over time limit";
        }
        if (!o.ok) ++failed;
        std::printf("%s  %d  %-32s residual/tol=%.3g  time=%.3fs (limit %.0fs)%s%s\n",
                    o.ok ? "PASS" : "FAIL", index, c.name, o.worst, secs, c.limit_s,
                    o.note.empty() ? "" : "  ", o.note.c_str());
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
