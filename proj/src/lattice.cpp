#include "ndsys/lattice.hpp"

#include <numeric>
#include <string>

#include "ndsys/errors.hpp"

namespace ndsys {

int front_of(const LatticePoint& t) { return std::accumulate(t.begin(), t.end(), 0); }

LatticePoint shifted(LatticePoint t, std::size_t k, int by) {
    t.at(k) += by;
    return t;
}

Box::Box(LatticePoint lo_, LatticePoint hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.empty() || lo.size() != hi.size()) {
        throw ShapeError("box bounds must be non-empty and of equal length");
    }
    for (std::size_t k = 0; k < lo.size(); ++k) {
        if (lo[k] > hi[k]) throw DomainError("box requires lo_k <= hi_k");
    }
}

Box Box::cube(std::size_t n, int lo, int hi) {
    return Box(LatticePoint(n, lo), LatticePoint(n, hi));
}

bool Box::contains(const LatticePoint& t) const {
    if (t.size() != lo.size()) return false;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < lo[k] || t[k] > hi[k]) return false;
    }
    return true;
}

std::vector<LatticePoint> Box::points() const {
    std::vector<LatticePoint> out;
    if (lo.empty()) return out;
    LatticePoint cur = lo;
    while (true) {
        out.push_back(cur);
        auto k = static_cast<std::ptrdiff_t>(cur.size()) - 1;
        while (k >= 0 && cur[k] == hi[k]) {
            cur[k] = lo[k];
            --k;
        }
        if (k < 0) return out;
        ++cur[k];
    }
}

std::vector<LatticePoint> Box::front(int order) const {
    std::vector<LatticePoint> out;
    for (auto& t : points()) {
        if (front_of(t) == order) out.push_back(std::move(t));
    }
    return out;
}

bool Box::deep_inside(const LatticePoint& t, int margin) const {
    if (t.size() != lo.size()) return false;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] - margin < lo[k] || t[k] + margin > hi[k]) return false;
    }
    return true;
}

Box Box::negated() const {
    LatticePoint nlo(lo.size()), nhi(hi.size());
    for (std::size_t k = 0; k < lo.size(); ++k) {
        nlo[k] = -hi[k];
        nhi[k] = -lo[k];
    }
    return Box(std::move(nlo), std::move(nhi));
}

LatticeSignal::LatticeSignal(std::size_t n, Eigen::Index dim) : n_(n), dim_(dim) {
    if (n == 0) throw DomainError("lattice signal needs N >= 1");
    if (dim < 0) throw DomainError("lattice signal dimension must be non-negative");
}

void LatticeSignal::set(const LatticePoint& t, ComplexVector v) {
    if (t.size() != n_) {
        throw ArityError("lattice point has " + std::to_string(t.size()) +
                         " coordinates, signal expects " + std::to_string(n_));
    }
    if (v.size() != dim_) {
        throw ShapeError("signal value has dimension " + std::to_string(v.size()) +
                         ", expected " + std::to_string(dim_));
    }
    entries_[t] = std::move(v);
}

ComplexVector LatticeSignal::at(const LatticePoint& t) const {
    auto it = entries_.find(t);
    if (it == entries_.end()) return ComplexVector::Zero(dim_);
    return it->second;
}

std::vector<std::pair<LatticePoint, ComplexVector>> LatticeSignal::front(int order) const {
    std::vector<std::pair<LatticePoint, ComplexVector>> out;
    for (const auto& [t, v] : entries_) {
        if (front_of(t) == order) out.emplace_back(t, v);
    }
    return out;
}

double front_energy(const LatticeSignal& signal, int n) {
    double e = 0.0;
    for (const auto& [t, v] : signal.entries()) {
        if (front_of(t) == n) e += v.squaredNorm();
    }
    return e;
}

}  // namespace ndsys
