#include "ndsys/pencil.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "ndsys/errors.hpp"

namespace ndsys {

MultiIndex::MultiIndex(std::vector<int> components) : c_(std::move(components)) {
    if (c_.empty()) throw DomainError("multi-index must have at least one component");
    for (int v : c_) {
        if (v < 0) throw DomainError("multi-index components must be non-negative");
    }
}

MultiIndex MultiIndex::zero(std::size_t n) { return MultiIndex(std::vector<int>(n, 0)); }

MultiIndex MultiIndex::unit(std::size_t n, std::size_t k) {
    std::vector<int> c(n, 0);
    c.at(k) = 1;
    return MultiIndex(std::move(c));
}

int MultiIndex::order() const noexcept { return std::accumulate(c_.begin(), c_.end(), 0); }

MultiIndex MultiIndex::plus_unit(std::size_t k) const {
    auto c = c_;
    ++c.at(k);
    return MultiIndex(std::move(c));
}

MultiIndex MultiIndex::minus_unit(std::size_t k) const {
    if (c_.at(k) == 0) throw DomainError("minus_unit on a zero component");
    auto c = c_;
    --c[k];
    return MultiIndex(std::move(c));
}

bool MultiIndex::dominated_by(const MultiIndex& s) const {
    if (s.size() != size()) return false;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] > s.c_[k]) return false;
    }
    return true;
}

namespace {

void enumerate_order(std::size_t n, std::size_t pos, int remaining, std::vector<int>& cur,
                     std::vector<MultiIndex>& out) {
    if (pos + 1 == n) {
        cur[pos] = remaining;
        out.emplace_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[pos] = v;
        enumerate_order(n, pos + 1, remaining - v, cur, out);
    }
}

}  // namespace

std::vector<MultiIndex> indices_of_order(std::size_t n, int order) {
    if (n == 0) throw DomainError("multi-index arity must be >= 1");
    std::vector<MultiIndex> out;
    if (order < 0) return out;
    std::vector<int> cur(n, 0);
    enumerate_order(n, 0, order, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MultiIndex> indices_up_to_order(std::size_t n, int max_order) {
    std::vector<MultiIndex> out;
    for (int m = 0; m <= max_order; ++m) {
        auto level = indices_of_order(n, m);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

OperatorTuple::OperatorTuple(std::vector<ComplexMatrix> members) : m_(std::move(members)) {
    if (m_.empty()) throw ArityError("operator tuple must have at least one member");
    rows_ = m_.front().rows();
    cols_ = m_.front().cols();
    for (std::size_t k = 1; k < m_.size(); ++k) {
        if (m_[k].rows() != rows_ || m_[k].cols() != cols_) {
            throw ShapeError("operator tuple member " + std::to_string(k + 1) +
                             " has a different shape than member 1");
        }
    }
}

OperatorTuple OperatorTuple::zeros(std::size_t n, Eigen::Index rows, Eigen::Index cols) {
    return OperatorTuple(std::vector<ComplexMatrix>(n, ComplexMatrix::Zero(rows, cols)));
}

OperatorTuple OperatorTuple::adjoint() const {
    std::vector<ComplexMatrix> adj;
    adj.reserve(m_.size());
    for (const auto& m : m_) adj.push_back(m.adjoint());
    return OperatorTuple(std::move(adj));
}

ComplexMatrix eval_pencil(std::span<const Complex> z, const OperatorTuple& t) {
    if (z.size() != t.size()) {
        throw ArityError("pencil point has " + std::to_string(z.size()) +
                         " coordinates, tuple has " + std::to_string(t.size()) + " members");
    }
    ComplexMatrix out = ComplexMatrix::Zero(t.rows(), t.cols());
    for (std::size_t k = 0; k < z.size(); ++k) out += z[k] * t[k];
    return out;
}

namespace {

std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t k) {
    // Multiplicative formula; each partial product is itself a binomial
    // coefficient so the division is exact.
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        unsigned __int128 wide = static_cast<unsigned __int128>(r) * (n - k + i);
        wide /= i;
        if (wide > std::numeric_limits<std::uint64_t>::max()) {
            throw RangeError("multinomial coefficient exceeds 64-bit range");
        }
        r = static_cast<std::uint64_t>(wide);
    }
    return r;
}

/// {r : r <= s}, sorted by order so that every r - e_k precedes r.
std::vector<MultiIndex> sublattice(const MultiIndex& s) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(s.size(), 0);
    while (true) {
        out.emplace_back(cur);
        std::size_t k = 0;
        while (k < cur.size() && cur[k] == s[k]) cur[k++] = 0;
        if (k == cur.size()) break;
        ++cur[k];
    }
    std::stable_sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
        return a.order() < b.order() || (a.order() == b.order() && a < b);
    });
    return out;
}

void require_arity(const OperatorTuple& t, const MultiIndex& s, const char* what) {
    if (t.size() != s.size()) {
        throw ArityError(std::string(what) + " tuple has " + std::to_string(t.size()) +
                         " members but the multi-index has " + std::to_string(s.size()) +
                         " components");
    }
}

void require_square(const OperatorTuple& a) {
    if (a.rows() != a.cols()) throw ShapeError("multipower base tuple must be square");
}

void require_order_cap(const MultiIndex& s, int cap) {
    if (s.order() > cap) {
        throw DomainError("multi-index order " + std::to_string(s.order()) +
                          " exceeds the configured cap " + std::to_string(cap));
    }
}

/// Number of distinct arrangements, as a double, over an order-sorted
/// downward-closed index set (Pascal recursion).
std::map<MultiIndex, double> arrangement_counts(const std::vector<MultiIndex>& lattice) {
    std::map<MultiIndex, double> count;
    for (const auto& r : lattice) {
        if (r.is_zero()) {
            count.emplace(r, 1.0);
            continue;
        }
        double c = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k] > 0) c += count.at(r.minus_unit(k));
        }
        count.emplace(r, c);
    }
    return count;
}

/// Weighted plain powers W(r) = c_r A^r = sum_k A_k W(r - e_k).
std::map<MultiIndex, ComplexMatrix> weighted_powers(const OperatorTuple& a,
                                                    const std::vector<MultiIndex>& lattice) {
    std::map<MultiIndex, ComplexMatrix> w;
    for (const auto& r : lattice) {
        if (r.is_zero()) {
            w.emplace(r, ComplexMatrix::Identity(a.rows(), a.cols()));
            continue;
        }
        ComplexMatrix acc = ComplexMatrix::Zero(a.rows(), a.cols());
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k] > 0) acc.noalias() += a[k] * w.at(r.minus_unit(k));
        }
        w.emplace(r, std::move(acc));
    }
    return w;
}

}  // namespace

std::uint64_t multinomial(const MultiIndex& s) {
    std::uint64_t result = 1;
    std::uint64_t running = 0;
    for (int v : s.components()) {
        running += static_cast<std::uint64_t>(v);
        const std::uint64_t b = checked_binomial(running, static_cast<std::uint64_t>(v));
        unsigned __int128 wide = static_cast<unsigned __int128>(result) * b;
        if (wide > std::numeric_limits<std::uint64_t>::max()) {
            throw RangeError("multinomial coefficient exceeds 64-bit range");
        }
        result = static_cast<std::uint64_t>(wide);
    }
    return result;
}

ComplexMatrix sym_multipower(const OperatorTuple& a, const MultiIndex& s, int order_cap) {
    require_arity(a, s, "base");
    require_square(a);
    require_order_cap(s, order_cap);
    const auto lattice = sublattice(s);
    const auto w = weighted_powers(a, lattice);
    const auto count = arrangement_counts(lattice);
    return w.at(s) / count.at(s);
}

ComplexMatrix bordered_multipower(Border kind, const OperatorTuple& a, const OperatorTuple& b,
                                  const OperatorTuple& c, const MultiIndex& s, int order_cap) {
    require_arity(a, s, "base");
    require_square(a);
    require_order_cap(s, order_cap);
    const int min_order = kind == Border::Both ? 2 : 1;
    if (s.order() < min_order) {
        throw DomainError("bordered multipower needs |s| >= " + std::to_string(min_order));
    }
    const bool right = kind != Border::Left;
    const bool left = kind != Border::Right;
    if (right) {
        require_arity(b, s, "right border");
        if (b.rows() != a.rows()) throw ShapeError("right border rows must match the base size");
    }
    if (left) {
        require_arity(c, s, "left border");
        if (c.cols() != a.cols()) throw ShapeError("left border cols must match the base size");
    }

    const auto lattice = sublattice(s);
    const auto w = weighted_powers(a, lattice);
    const double count = arrangement_counts(lattice).at(s);

    auto sharp_at = [&](const MultiIndex& r) {
        ComplexMatrix acc = ComplexMatrix::Zero(a.rows(), b.cols());
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k] > 0) acc.noalias() += w.at(r.minus_unit(k)) * b[k];
        }
        return acc;
    };

    switch (kind) {
        case Border::Right:
            return sharp_at(s) / count;
        case Border::Left: {
            ComplexMatrix acc = ComplexMatrix::Zero(c.rows(), a.cols());
            for (std::size_t k = 0; k < s.size(); ++k) {
                if (s[k] > 0) acc.noalias() += c[k] * w.at(s.minus_unit(k));
            }
            return acc / count;
        }
        case Border::Both: {
            ComplexMatrix acc = ComplexMatrix::Zero(c.rows(), b.cols());
            for (std::size_t k = 0; k < s.size(); ++k) {
                if (s[k] > 0) acc.noalias() += c[k] * sharp_at(s.minus_unit(k));
            }
            return acc / count;
        }
    }
    return {};
}

MultipowerTable::MultipowerTable(const OperatorTuple& a, const OperatorTuple& b,
                                 const OperatorTuple& c, int max_order)
    : max_order_(max_order) {
    if (a.rows() != a.cols()) throw ShapeError("multipower base tuple must be square");
    if (b.size() != a.size() || c.size() != a.size()) {
        throw ArityError("multipower table tuples must share one arity");
    }
    if (b.rows() != a.rows() || c.cols() != a.cols()) {
        throw ShapeError("border tuples do not chain with the base tuple");
    }
    const auto lattice = indices_up_to_order(a.size(), max_order);
    power_ = weighted_powers(a, lattice);
    for (const auto& r : lattice) {
        if (r.is_zero()) continue;
        ComplexMatrix sh = ComplexMatrix::Zero(a.rows(), b.cols());
        ComplexMatrix fl = ComplexMatrix::Zero(c.rows(), a.cols());
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k] == 0) continue;
            const auto prev = r.minus_unit(k);
            sh.noalias() += power_.at(prev) * b[k];
            fl.noalias() += c[k] * power_.at(prev);
        }
        sharp_.emplace(r, std::move(sh));
        flat_.emplace(r, std::move(fl));
    }
    for (const auto& r : lattice) {
        if (r.order() < 2) continue;
        ComplexMatrix fs = ComplexMatrix::Zero(c.rows(), b.cols());
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k] > 0) fs.noalias() += c[k] * sharp_.at(r.minus_unit(k));
        }
        flat_sharp_.emplace(r, std::move(fs));
    }
}

namespace {

const ComplexMatrix& lookup(const std::map<MultiIndex, ComplexMatrix>& m, const MultiIndex& s,
                            const char* what) {
    auto it = m.find(s);
    if (it == m.end()) {
        throw DomainError(std::string("multipower table has no ") + what +
                          " entry for the requested multi-index");
    }
    return it->second;
}

}  // namespace

const ComplexMatrix& MultipowerTable::power(const MultiIndex& s) const {
    return lookup(power_, s, "plain");
}
const ComplexMatrix& MultipowerTable::sharp(const MultiIndex& s) const {
    return lookup(sharp_, s, "right-bordered");
}
const ComplexMatrix& MultipowerTable::flat(const MultiIndex& s) const {
    return lookup(flat_, s, "left-bordered");
}
const ComplexMatrix& MultipowerTable::flat_sharp(const MultiIndex& s) const {
    return lookup(flat_sharp_, s, "doubly bordered");
}

}  // namespace ndsys
