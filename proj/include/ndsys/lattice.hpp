#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "ndsys/types.hpp"

namespace ndsys {

/// Point of Z^N; coordinates may be negative.
using LatticePoint = std::vector<int>;

/// |t| = t_1 + ... + t_N
int front_of(const LatticePoint& t);

LatticePoint shifted(LatticePoint t, std::size_t k, int by);

/// Axis-aligned box lo_k <= t_k <= hi_k.
struct Box {
    LatticePoint lo;
    LatticePoint hi;

    Box() = default;
    Box(LatticePoint lo, LatticePoint hi);
    static Box cube(std::size_t n, int lo, int hi);

    std::size_t dims() const noexcept { return lo.size(); }
    bool contains(const LatticePoint& t) const;
    /// Every point of the box, lexicographic.
    std::vector<LatticePoint> points() const;
    /// Box points on the front |t| = order, lexicographic.
    std::vector<LatticePoint> front(int order) const;
    /// True iff every point within distance `margin` (sup norm) of t is inside.
    bool deep_inside(const LatticePoint& t, int margin) const;
    /// {-t : t in box}
    Box negated() const;
};

struct SimulationWindow {
    Box box;
    int n_max = 1;
};

/// Finitely supported map Z^N -> C^dim. Reads outside the support give zero.
class LatticeSignal {
   public:
    LatticeSignal() = default;
    LatticeSignal(std::size_t n, Eigen::Index dim);

    std::size_t n() const noexcept { return n_; }
    Eigen::Index dim() const noexcept { return dim_; }

    void set(const LatticePoint& t, ComplexVector v);
    ComplexVector at(const LatticePoint& t) const;
    bool contains(const LatticePoint& t) const { return entries_.count(t) != 0; }

    /// All stored entries with |t| = order.
    std::vector<std::pair<LatticePoint, ComplexVector>> front(int order) const;
    const std::map<LatticePoint, ComplexVector>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

   private:
    std::size_t n_ = 0;
    Eigen::Index dim_ = 0;
    std::map<LatticePoint, ComplexVector> entries_;
};

/// Sum of squared norms over the stored entries with |t| = n.
double front_energy(const LatticeSignal& signal, int n);

}  // namespace ndsys
