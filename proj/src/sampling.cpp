#include "ndsys/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/random/sobol.hpp>

#include "ndsys/errors.hpp"

namespace ndsys {

std::vector<std::vector<double>> sobol_sequence(std::size_t dim, std::size_t count,
                                                std::size_t skip) {
    if (dim == 0) throw DomainError("Sobol dimension must be positive");
    boost::random::sobol gen(dim);
    if (skip > 0) gen.discard(skip * dim);
    std::vector<std::vector<double>> out(count, std::vector<double>(dim));
    for (auto& p : out) {
        for (auto& c : p) c = std::ldexp(static_cast<double>(gen() >> 11), -53);
    }
    return out;
}

namespace {

Complex disc_point(double u, double v, double radius) {
    return std::polar(radius * std::sqrt(u), 2.0 * std::numbers::pi * v);
}

}  // namespace

std::vector<Point> sobol_polydisc(std::size_t n, std::size_t count, double radius,
                                  std::size_t skip) {
    const auto raw = sobol_sequence(2 * n, count, skip);
    std::vector<Point> out;
    out.reserve(count);
    for (const auto& p : raw) {
        Point z(n);
        for (std::size_t k = 0; k < n; ++k) z[k] = disc_point(p[2 * k], p[2 * k + 1], radius);
        out.push_back(std::move(z));
    }
    return out;
}

std::vector<Point> random_polydisc(std::size_t n, std::size_t count, double radius,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Point> out(count, Point(n));
    for (auto& z : out) {
        for (auto& c : z) {
            const double u = u01(rng);
            const double v = u01(rng);
            c = disc_point(u, v, radius);
        }
    }
    return out;
}

std::vector<Point> random_torus(std::size_t n, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<Point> out(count, Point(n));
    for (auto& z : out) {
        for (auto& c : z) c = std::polar(1.0, angle(rng));
    }
    return out;
}

}  // namespace ndsys
