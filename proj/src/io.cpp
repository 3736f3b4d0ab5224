#include "ndsys/io.hpp"

#include <fstream>
#include <sstream>

#include "ndsys/errors.hpp"

namespace ndsys::io {

namespace {

// Runs fn and turns nlohmann and library errors into ParseError with context.
template <class Fn>
auto guarded(const char* what, Fn fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ParseError&) {
        throw;
    } catch (const json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    } catch (const Error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw ParseError(msg);
}

}  // namespace

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
            "complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
    require(j.is_array(), "matrix must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return ComplexMatrix(0, 0);
    require(j[0].is_array(), "matrix rows must be arrays");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        require(j[r].is_array() && static_cast<Eigen::Index>(j[r].size()) == cols,
                "matrix rows must have equal length");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

json vector_to_json(const ComplexVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

ComplexVector vector_from_json(const json& j) {
    require(j.is_array(), "vector must be an array");
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

json point_to_json(const Point& z) {
    json out = json::array();
    for (const auto& c : z) out.push_back(complex_to_json(c));
    return out;
}

Point point_from_json(const json& j) {
    require(j.is_array(), "point must be an array of complex numbers");
    Point z;
    for (const auto& c : j) z.push_back(complex_from_json(c));
    return z;
}

namespace {

// Shapes of empty matrices cannot be recovered from nested arrays; fix them
// from the declared dimensions.
ComplexMatrix sized(const json& j, Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix m = matrix_from_json(j);
    if (m.size() == 0 && (rows == 0 || cols == 0)) return ComplexMatrix(rows, cols);
    return m;
}

std::vector<ComplexMatrix> family(const json& j, const char* key, Eigen::Index rows,
                                  Eigen::Index cols) {
    require(j.contains(key) && j[key].is_array(), std::string("missing array \"") + key + "\"");
    std::vector<ComplexMatrix> out;
    for (const auto& m : j[key]) out.push_back(sized(m, rows, cols));
    return out;
}

}  // namespace

json system_to_json(const MultiLSDS& sys) {
    json j;
    j["n"] = sys.n();
    j["dims"] = {{"x", sys.dim_x()}, {"nm", sys.dim_nm()}, {"np", sys.dim_np()}};
    auto fam = [](const OperatorTuple& t) {
        json a = json::array();
        for (const auto& m : t.members()) a.push_back(matrix_to_json(m));
        return a;
    };
    j["A"] = fam(sys.a());
    j["B"] = fam(sys.b());
    j["C"] = fam(sys.c());
    j["D"] = fam(sys.d());
    return j;
}

SystemDescription description_from_json(const json& j) {
    return guarded("system file", [&] {
        require(j.is_object(), "system file must be a JSON object");
        SystemDescription d;
        d.n = j.at("n").get<std::size_t>();
        const auto& dims = j.at("dims");
        d.dim_x = dims.at("x").get<Eigen::Index>();
        d.dim_nm = dims.at("nm").get<Eigen::Index>();
        d.dim_np = dims.at("np").get<Eigen::Index>();
        d.a = family(j, "A", d.dim_x, d.dim_x);
        d.b = family(j, "B", d.dim_x, d.dim_nm);
        d.c = family(j, "C", d.dim_np, d.dim_x);
        d.d = family(j, "D", d.dim_np, d.dim_nm);
        return d;
    });
}

MultiLSDS system_from_json(const json& j) {
    const SystemDescription d = description_from_json(j);
    const auto v = validate(d);
    if (!v.empty()) {
        std::string msg = "invalid system:";
        for (const auto& e : v) msg += " " + e.message + ";";
        throw ParseError(msg);
    }
    return MultiLSDS(d);
}

json signal_to_json(const LatticeSignal& s) {
    json entries = json::array();
    for (const auto& [t, v] : s.entries()) {
        entries.push_back({{"t", t}, {"v", vector_to_json(v)}});
    }
    return {{"n", s.n()}, {"dim", s.dim()}, {"entries", entries}};
}

LatticeSignal signal_from_json(const json& j) {
    return guarded("signal", [&] {
        LatticeSignal s(j.at("n").get<std::size_t>(), j.at("dim").get<Eigen::Index>());
        for (const auto& e : j.at("entries")) {
            s.set(e.at("t").get<LatticePoint>(), vector_from_json(e.at("v")));
        }
        return s;
    });
}

json polynomial_to_json(const MatrixPolynomial& p) {
    json terms = json::array();
    for (const auto& [t, m] : p.terms()) {
        terms.push_back({{"t", t.components()}, {"m", matrix_to_json(m)}});
    }
    return {{"n", p.n()}, {"shape", {p.rows(), p.cols()}}, {"terms", terms}};
}

MatrixPolynomial polynomial_from_json(const json& j) {
    return guarded("polynomial", [&] {
        const auto& shape = j.at("shape");
        require(shape.is_array() && shape.size() == 2, "shape must be [rows, cols]");
        const auto rows = shape[0].get<Eigen::Index>();
        const auto cols = shape[1].get<Eigen::Index>();
        MatrixPolynomial p(j.at("n").get<std::size_t>(), rows, cols);
        for (const auto& t : j.at("terms")) {
            p.add_term(MultiIndex(t.at("t").get<std::vector<int>>()), sized(t.at("m"), rows, cols));
        }
        return p;
    });
}

json box_to_json(const Box& b) { return {{"lo", b.lo}, {"hi", b.hi}}; }

Box box_from_json(const json& j) {
    return guarded("box", [&] {
        return Box(j.at("lo").get<LatticePoint>(), j.at("hi").get<LatticePoint>());
    });
}

json lp_vector_to_json(const LPVector& h) {
    return {{"box", box_to_json(h.box)},
            {"u_plus", signal_to_json(h.u_plus)},
            {"y", signal_to_json(h.y)},
            {"u_minus", signal_to_json(h.u_minus)}};
}

LPVector lp_vector_from_json(const json& j) {
    return guarded("Lax-Phillips vector", [&] {
        return LPVector{box_from_json(j.at("box")), signal_from_json(j.at("u_plus")),
                        signal_from_json(j.at("y")), signal_from_json(j.at("u_minus"))};
    });
}

json agler_to_json(const AglerData& d) {
    json fs = json::array();
    for (const auto& f : d.f) fs.push_back(polynomial_to_json(f));
    json grid = json::array();
    for (const auto& z : d.sample_grid) grid.push_back(point_to_json(z));
    return {{"theta", polynomial_to_json(d.theta)}, {"F", fs}, {"sample_grid", grid}};
}

AglerData agler_from_json(const json& j) {
    return guarded("Agler data", [&] {
        AglerData d;
        d.theta = polynomial_from_json(j.at("theta"));
        for (const auto& f : j.at("F")) d.f.push_back(polynomial_from_json(f));
        if (j.contains("sample_grid")) {
            for (const auto& z : j.at("sample_grid")) d.sample_grid.push_back(point_from_json(z));
        }
        check_agler_shapes(d);
        return d;
    });
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace ndsys::io
