#pragma once

#include <random>
#include <set>
#include <vector>

#include "ndsys/lattice.hpp"
#include "ndsys/system.hpp"

namespace ndsys {

/// h = (u+, y, u-) over a box: u+ on |t| <= 0 (values in N+), y on |t| = 0
/// (values in X), u- on |t| >= 0 (values in N-).
struct LPVector {
    Box box;
    LatticeSignal u_plus;
    LatticeSignal y;
    LatticeSignal u_minus;
};

struct LPMask {
    std::set<LatticePoint> u_plus;
    std::set<LatticePoint> y;
    std::set<LatticePoint> u_minus;

    bool empty() const noexcept { return u_plus.empty() && y.empty() && u_minus.empty(); }
};

struct LPResult {
    LPVector value;
    LPMask contaminated;
};

LPVector zero_lp_vector(const MultiLSDS& sys, const Box& box);

/// Random vector supported on points at sup-distance >= margin from the box faces.
LPVector random_interior_vector(const MultiLSDS& sys, const Box& box, int margin,
                                std::mt19937_64& rng);

/// W_{alpha,k}, 0-based k. `in` marks coordinates of h already unreliable.
LPResult apply_generator(const MultiLSDS& sys, std::size_t k, const LPVector& h,
                         const LPMask& in = {});

/// W_{alpha,k}^*
LPResult apply_adjoint(const MultiLSDS& sys, std::size_t k, const LPVector& h,
                       const LPMask& in = {});

/// Inverse-time map H_alpha -> H_{alpha*}; the box is negated.
LPVector gamma_map(const LPVector& h);
/// Inverse of gamma_map (H_{alpha*} -> H_alpha); the same index negation.
LPVector gamma_inverse(const LPVector& h);

Complex inner_product(const LPVector& a, const LPVector& b);
double norm(const LPVector& h);

/// ||a - b|| over coordinates outside both masks.
double masked_distance(const LPVector& a, const LPVector& b, const LPMask& skip);

/// max over trials of ||W_k W_j h - W_j W_k h|| on jointly clean coordinates.
double commutation_residual(const MultiLSDS& sys, std::size_t k, std::size_t j, int trials,
                            const Box& box, std::uint64_t seed);

struct MetricReport {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    bool contractive = false;
    bool isometric = false;
};

/// ||W_k h|| / ||h|| over random interior h, all k.
MetricReport metric_check(const MultiLSDS& sys, int trials, const Box& box, std::uint64_t seed,
                          double tol = 1e-10);

/// Classical system over the truncated front 0 of the box, advancing along e_k.
struct OneParamSystemView {
    std::size_t k = 0;
    std::vector<LatticePoint> front;  // lexicographic
    ComplexMatrix a, b, c, d;
    /// Row s reads a point s + e_k - e_j outside the truncated front.
    std::vector<bool> lossy;
};

OneParamSystemView associated_one_param(const MultiLSDS& sys, std::size_t k, const Box& box);

struct OneParamRun {
    std::vector<ComplexVector> states;   // x_0 .. x_steps
    std::vector<ComplexVector> outputs;  // y_1 .. y_steps
    std::vector<std::vector<bool>> contaminated;  // per step, per front point
};

/// x_{n+1} = A x_n + B u_n, y_{n+1} = C x_n + D u_n.
OneParamRun run_one_param(const OneParamSystemView& view, const ComplexVector& x0,
                          const std::vector<ComplexVector>& inputs);

}  // namespace ndsys
