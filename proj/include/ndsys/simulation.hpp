#pragma once

#include <set>
#include <vector>

#include "ndsys/lattice.hpp"
#include "ndsys/system.hpp"

namespace ndsys {

struct Trajectory {
    LatticeSignal states;   // fronts 0..n_max inside the box
    LatticeSignal outputs;  // fronts 1..n_max inside the box
    /// Points whose value depended on a read outside the box.
    std::set<LatticePoint> contaminated;

    bool is_clean(const LatticePoint& t) const { return contaminated.count(t) == 0; }
};

/// Front-by-front recursion. Reads outside the window are zero and
/// contaminate every dependent point.
Trajectory simulate(const MultiLSDS& sys, const LatticeSignal& init, const LatticeSignal& input,
                    const SimulationWindow& window);

/// Closed-form evaluation through the weighted multipowers. Uses the data at
/// every lattice point, so it agrees with simulate on clean points only.
Trajectory closed_form(const MultiLSDS& sys, const LatticeSignal& init,
                       const LatticeSignal& input, const SimulationWindow& window);

struct EnergyRow {
    int n = 0;
    double e_minus = 0.0;   // input energy on front n-1
    double e_plus = 0.0;    // output energy on front n
    double e_x = 0.0;       // state energy on front n
    double e_x_prev = 0.0;  // state energy on front n-1
    double lhs = 0.0;       // e_minus - e_plus
    double rhs = 0.0;       // e_x - e_x_prev
    double difference = 0.0;
    /// Energy may have left the box (or data sat outside it) by this front.
    bool contaminated = false;
    bool dissipative_ok = false;
    bool conservative_ok = false;
};

std::vector<EnergyRow> energy_balance_report(const MultiLSDS& sys, const LatticeSignal& init,
                                             const LatticeSignal& input,
                                             const SimulationWindow& window, double tol = 1e-9);

}  // namespace ndsys
