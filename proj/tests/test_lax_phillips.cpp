#include <gtest/gtest.h>

#include "ndsys/errors.hpp"
#include "ndsys/lax_phillips.hpp"
#include "ndsys/realization.hpp"
#include "support.hpp"

using namespace ndsys;
using namespace ndsys::testing;

namespace {

LPMask merge(LPMask a, const LPMask& b) {
    a.u_plus.insert(b.u_plus.begin(), b.u_plus.end());
    a.y.insert(b.y.begin(), b.y.end());
    a.u_minus.insert(b.u_minus.begin(), b.u_minus.end());
    return a;
}

}  // namespace

TEST(LaxPhillips, GeneratorAdjointPairing) {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 10; ++i) {
        const auto s = random_system(2 + i % 2, 2, 1, 2, rng);
        const Box b = Box::cube(s.n(), -4, 4);
        for (std::size_t k = 0; k < s.n(); ++k) {
            const auto h = random_interior_vector(s, b, 2, rng);
            const auto g = random_interior_vector(s, b, 2, rng);
            const auto wh = apply_generator(s, k, h);
            const auto wg = apply_adjoint(s, k, g);
            const Complex lhs = inner_product(g, wh.value);
            const Complex rhs = inner_product(wg.value, h);
            EXPECT_LT(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST(LaxPhillips, GeneratorsCommute) {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 10; ++i) {
        const auto s = random_system(2 + i % 2, 2, 2, 1, rng);
        const Box box = Box::cube(s.n(), -4, 4);
        for (std::size_t k = 0; k < s.n(); ++k) {
            for (std::size_t j = k + 1; j < s.n(); ++j) {
                EXPECT_LT(commutation_residual(s, k, j, 3, box, 100 + i), 1e-12);
            }
        }
    }
}

TEST(LaxPhillips, AdjointsCommute) {
    std::mt19937_64 rng(43);
    const auto s = random_system(2, 2, 1, 1, rng);
    const Box box = Box::cube(2, -5, 5);
    const auto h = random_interior_vector(s, box, 2, rng);
    const auto a = apply_adjoint(s, 0, h);
    const auto ab = apply_adjoint(s, 1, a.value, a.contaminated);
    const auto b = apply_adjoint(s, 1, h);
    const auto ba = apply_adjoint(s, 0, b.value, b.contaminated);
    EXPECT_LT(masked_distance(ab.value, ba.value, merge(ab.contaminated, ba.contaminated)), 1e-12);
    EXPECT_GT(norm(ab.value), 0.0);
}

TEST(LaxPhillips, GammaIsAnInvolutionOfIndices) {
    std::mt19937_64 rng(44);
    const auto s = random_system(2, 2, 1, 3, rng);
    const auto h = random_interior_vector(s, Box::cube(2, -3, 3), 1, rng);
    const auto back = gamma_inverse(gamma_map(h));
    EXPECT_EQ(masked_distance(back, h, {}), 0.0);
    EXPECT_NEAR(norm(gamma_map(h)), norm(h), 1e-14);
    // u+ of gamma(h) holds u- of h at negated points.
    const auto gh = gamma_map(h);
    EXPECT_EQ(gh.u_plus.dim(), 1);
    EXPECT_EQ(gh.u_minus.dim(), 3);
}

TEST(LaxPhillips, GammaIntertwinesAdjointWithConjugateGenerator) {
    std::mt19937_64 rng(45);
    for (int i = 0; i < 5; ++i) {
        const auto s = random_system(2 + i % 2, 2, 2, 1, rng);
        const auto star = conjugate(s);
        const Box box = Box::cube(s.n(), -4, 4);
        for (std::size_t k = 0; k < s.n(); ++k) {
            const auto h = random_interior_vector(s, box, 2, rng);
            const auto lhs = gamma_map(apply_adjoint(s, k, h).value);
            const auto rhs = apply_generator(star, k, gamma_map(h)).value;
            EXPECT_LT(masked_distance(lhs, rhs, {}), 1e-13);
        }
    }
}

TEST(LaxPhillips, ConservativeIsIsometric) {
    std::mt19937_64 rng(46);
    for (int i = 0; i < 5; ++i) {
        const auto s = random_conservative(2 + i % 2, 2, 1, rng);
        const auto rep = metric_check(s, 10, Box::cube(s.n(), -3, 3), 200 + i);
        EXPECT_TRUE(rep.isometric) << rep.min_ratio << " " << rep.max_ratio;
    }
    const auto ex = builtin_examples();
    EXPECT_TRUE(metric_check(ex.alpha_prime, 10, Box::cube(2, -4, 4), 7).isometric);
}

TEST(LaxPhillips, DissipativeIsContractive) {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 5; ++i) {
        const auto s = random_dissipative(2, 2, 1, rng);
        const auto rep = metric_check(s, 10, Box::cube(2, -3, 3), 300 + i);
        EXPECT_TRUE(rep.contractive);
        EXPECT_FALSE(rep.isometric);
    }
}

TEST(LaxPhillips, ExpansiveSystemIsNotContractive) {
    const auto one = ComplexMatrix::Identity(1, 1);
    const MultiLSDS s(OperatorTuple({2.0 * one, 0.0 * one}), OperatorTuple({0.0 * one, 0.0 * one}),
                      OperatorTuple({0.0 * one, 0.0 * one}), OperatorTuple({0.0 * one, 0.0 * one}));
    EXPECT_FALSE(metric_check(s, 5, Box::cube(2, -3, 3), 9).contractive);
}

TEST(LaxPhillips, ExampleFirstGeneratorPattern) {
    const auto& s = builtin_examples().alpha;
    const Box box = Box::cube(2, -3, 3);
    auto h = zero_lp_vector(s, box);
    h.y.set({0, 0}, ComplexVector::Ones(1));
    h.u_minus.set({1, -1}, 2.0 * ComplexVector::Ones(1));
    const auto r = apply_generator(s, 0, h);
    // The state moves to the output slot; the input at (1,-1) becomes the state at (0,0).
    EXPECT_EQ(r.value.u_plus.at({0, 0})(0), Complex(1.0));
    EXPECT_EQ(r.value.y.at({0, 0})(0), Complex(2.0));
    EXPECT_EQ(r.value.u_minus.at({0, -1}).norm(), 0.0);
    EXPECT_NEAR(norm(r.value), norm(h), 1e-15);
    double total = 0.0;
    for (const auto& [t, v] : r.value.y.entries()) total += v.squaredNorm();
    EXPECT_EQ(total, 4.0);
}

TEST(LaxPhillips, BoundaryReadsAreFlagged) {
    const auto& s = builtin_examples().alpha;
    const Box box = Box::cube(2, -2, 2);
    const auto r = apply_generator(s, 0, zero_lp_vector(s, box));
    EXPECT_TRUE(r.contaminated.u_plus.count({2, -3}) == 0);
    EXPECT_TRUE(r.contaminated.u_plus.count({-1, 0}) == 0);
    EXPECT_TRUE(r.contaminated.u_plus.count({2, -2}));
    EXPECT_TRUE(r.contaminated.u_minus.count({2, 0}));
}

TEST(LaxPhillips, IndexAndShapeErrors) {
    const auto& s = builtin_examples().alpha;
    const Box box = Box::cube(2, -2, 2);
    EXPECT_THROW(apply_generator(s, 2, zero_lp_vector(s, box)), DomainError);
    EXPECT_THROW(commutation_residual(s, 1, 1, 1, box, 0), DomainError);
    EXPECT_THROW(apply_generator(s, 0, zero_lp_vector(s, Box::cube(3, -1, 1))), ArityError);
    std::mt19937_64 rng(48);
    const auto other = random_system(2, 2, 1, 1, rng);
    EXPECT_THROW(apply_adjoint(other, 0, zero_lp_vector(s, box)), ShapeError);
}

TEST(LaxPhillips, SingleParameterIsClassicalShift) {
    std::mt19937_64 rng(49);
    const auto s = random_system(1, 3, 2, 2, rng);
    EXPECT_EQ(commutation_residual(s, 0, 0, 1, Box::cube(1, -3, 3), 0), 0.0);
    const Box box = Box::cube(1, -12, 12);
    const auto view = associated_one_param(s, 0, box);
    EXPECT_LT(relative_residual(view.a, s.a()[0]), 1e-15);
    EXPECT_LT(relative_residual(view.d, s.d()[0]), 1e-15);
    EXPECT_FALSE(view.lossy[0]);

    // Iterating W on (x0 at 0, inputs u(0..9)) reproduces the textbook recursion.
    auto h = zero_lp_vector(s, box);
    const ComplexVector x0 = random_gaussian(3, 1, rng).col(0);
    std::vector<ComplexVector> u;
    h.y.set({0}, x0);
    for (int n = 0; n < 10; ++n) {
        u.push_back(random_gaussian(2, 1, rng).col(0));
        h.u_minus.set({n}, u.back());
    }
    const auto ref = textbook_simulate(s.a()[0], s.b()[0], s.c()[0], s.d()[0], x0, u);
    LPResult cur{h, {}};
    for (int n = 0; n < 10; ++n) {
        cur = apply_generator(s, 0, cur.value, cur.contaminated);
        EXPECT_LT((cur.value.y.at({0}) - ref.x[n + 1]).norm(), 1e-12);
        // Output y(n) now sits at u+(0) and is carried to u+(-(m)) later.
        EXPECT_LT((cur.value.u_plus.at({0}) - ref.y[n]).norm(), 1e-12);
        EXPECT_FALSE(cur.contaminated.y.count({0}));
    }
    for (int n = 0; n < 9; ++n) {
        EXPECT_LT((cur.value.u_plus.at({-(9 - n)}) - ref.y[n]).norm(), 1e-12);
    }
}

TEST(LaxPhillips, OneParameterViewTracksGenerator) {
    std::mt19937_64 rng(50);
    const auto s = random_system(2, 2, 1, 1, rng);
    const Box box = Box::cube(2, -6, 6);
    for (std::size_t k = 0; k < 2; ++k) {
        const auto view = associated_one_param(s, k, box);
        const auto m = static_cast<Eigen::Index>(view.front.size());
        auto h = random_interior_vector(s, box, 1, rng);

        ComplexVector x0(m * s.dim_x());
        for (Eigen::Index i = 0; i < m; ++i) x0.segment(i * 2, 2) = h.y.at(view.front[i]);
        std::vector<ComplexVector> inputs;
        LPResult cur{h, {}};
        std::vector<LPResult> steps;
        for (int n = 0; n < 4; ++n) {
            ComplexVector un(m);
            for (Eigen::Index i = 0; i < m; ++i) un(i) = cur.value.u_minus.at(view.front[i])(0);
            inputs.push_back(un);
            cur = apply_generator(s, k, cur.value, cur.contaminated);
            steps.push_back(cur);
        }
        const auto run = run_one_param(view, x0, inputs);
        int clean = 0;
        for (int n = 0; n < 4; ++n) {
            for (Eigen::Index i = 0; i < m; ++i) {
                const auto& t = view.front[i];
                if (run.contaminated[n + 1][i] || steps[n].contaminated.y.count(t)) continue;
                ++clean;
                EXPECT_LT((run.states[n + 1].segment(i * 2, 2) - steps[n].value.y.at(t)).norm(),
                          1e-12);
                EXPECT_LT(std::abs(run.outputs[n](i) - steps[n].value.u_plus.at(t)(0)), 1e-12);
            }
        }
        EXPECT_GT(clean, 10);
    }
}
