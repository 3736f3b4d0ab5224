#include "ndsys/system.hpp"

#include <string>

#include "ndsys/errors.hpp"

namespace ndsys {

namespace {

void check_family(const std::vector<ComplexMatrix>& mats, const char* name, std::size_t n,
                  Eigen::Index rows, Eigen::Index cols, std::vector<Violation>& out) {
    if (mats.size() != n) {
        out.push_back({Violation::Kind::Arity, std::string(name) + " has " +
                                                   std::to_string(mats.size()) +
                                                   " members, expected " + std::to_string(n)});
    }
    for (std::size_t k = 0; k < mats.size(); ++k) {
        const auto& m = mats[k];
        const std::string label = std::string(name) + "_" + std::to_string(k + 1);
        if (m.rows() != rows || m.cols() != cols) {
            out.push_back({Violation::Kind::Shape,
                           label + " is " + std::to_string(m.rows()) + "x" +
                               std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                               "x" + std::to_string(cols)});
        }
        if (!m.allFinite()) {
            out.push_back({Violation::Kind::Finiteness, label + " has a non-finite entry"});
        }
    }
}

}  // namespace

std::vector<Violation> validate(const SystemDescription& desc) {
    std::vector<Violation> out;
    if (desc.n == 0) out.push_back({Violation::Kind::Arity, "N must be at least 1"});
    if (desc.dim_x < 0 || desc.dim_nm < 0 || desc.dim_np < 0) {
        out.push_back({Violation::Kind::Shape, "dimensions must be non-negative"});
        return out;
    }
    check_family(desc.a, "A", desc.n, desc.dim_x, desc.dim_x, out);
    check_family(desc.b, "B", desc.n, desc.dim_x, desc.dim_nm, out);
    check_family(desc.c, "C", desc.n, desc.dim_np, desc.dim_x, out);
    check_family(desc.d, "D", desc.n, desc.dim_np, desc.dim_nm, out);
    return out;
}

MultiLSDS::MultiLSDS(const SystemDescription& desc) {
    const auto violations = validate(desc);
    if (!violations.empty()) {
        const auto& v = violations.front();
        switch (v.kind) {
            case Violation::Kind::Arity:
                throw ArityError(v.message);
            case Violation::Kind::Shape:
                throw ShapeError(v.message);
            case Violation::Kind::Finiteness:
                throw DomainError(v.message);
        }
    }
    a_ = OperatorTuple(desc.a);
    b_ = OperatorTuple(desc.b);
    c_ = OperatorTuple(desc.c);
    d_ = OperatorTuple(desc.d);
}

MultiLSDS::MultiLSDS(OperatorTuple a, OperatorTuple b, OperatorTuple c, OperatorTuple d)
    : MultiLSDS(SystemDescription{a.size(), a.rows(), b.cols(), c.rows(), a.members(),
                                  b.members(), c.members(), d.members()}) {}

ComplexMatrix MultiLSDS::system_matrix(std::size_t k) const {
    if (k >= n()) throw DomainError("system matrix index out of range");
    const Eigen::Index x = dim_x(), nm = dim_nm(), np = dim_np();
    ComplexMatrix g(x + np, x + nm);
    g.topLeftCorner(x, x) = a_[k];
    g.topRightCorner(x, nm) = b_[k];
    g.bottomLeftCorner(np, x) = c_[k];
    g.bottomRightCorner(np, nm) = d_[k];
    return g;
}

ComplexMatrix MultiLSDS::pencil(std::span<const Complex> z) const {
    if (z.size() != n()) throw ArityError("pencil point arity does not match N");
    ComplexMatrix g = ComplexMatrix::Zero(dim_x() + dim_np(), dim_x() + dim_nm());
    for (std::size_t k = 0; k < n(); ++k) g += z[k] * system_matrix(k);
    return g;
}

SystemDescription MultiLSDS::description() const {
    return {n(), dim_x(), dim_nm(), dim_np(), a_.members(), b_.members(), c_.members(),
            d_.members()};
}

MultiLSDS conjugate(const MultiLSDS& sys) {
    return MultiLSDS(sys.a().adjoint(), sys.c().adjoint(), sys.b().adjoint(), sys.d().adjoint());
}

MultiLSDS from_system_matrices(const std::vector<ComplexMatrix>& g, Eigen::Index dim_x,
                               Eigen::Index dim_nm) {
    if (g.empty()) throw ArityError("need at least one system matrix");
    SystemDescription desc;
    desc.n = g.size();
    desc.dim_x = dim_x;
    desc.dim_nm = dim_nm;
    desc.dim_np = g.front().rows() - dim_x;
    if (desc.dim_np < 0 || g.front().cols() != dim_x + dim_nm) {
        throw ShapeError("system matrix does not split with the given dimensions");
    }
    for (const auto& gk : g) {
        if (gk.rows() != dim_x + desc.dim_np || gk.cols() != dim_x + dim_nm) {
            throw ShapeError("system matrices have inconsistent shapes");
        }
        desc.a.push_back(gk.topLeftCorner(dim_x, dim_x));
        desc.b.push_back(gk.topRightCorner(dim_x, dim_nm));
        desc.c.push_back(gk.bottomLeftCorner(desc.dim_np, dim_x));
        desc.d.push_back(gk.bottomRightCorner(desc.dim_np, dim_nm));
    }
    return MultiLSDS(desc);
}

}  // namespace ndsys
