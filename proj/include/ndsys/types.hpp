#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace ndsys {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// A point of C^N (or of the torus / polydisc, depending on context).
using Point = std::vector<Complex>;

/// Default tolerances. Every operation that compares against a threshold
/// takes one of these by value so callers can override it.
struct Tolerances {
    double exact = 1e-10;          // relative, exact algebraic identities
    double iterative = 1e-8;       // relative, iteratively computed quantities
    double rank = 1e-10;           // singular values below rank * sigma_max are zero
    double conservative = 1e-9;    // absolute, conservativity residuals
    double dissipative = 1e-9;     // absolute slack on torus norms and energy laws
};

}  // namespace ndsys
