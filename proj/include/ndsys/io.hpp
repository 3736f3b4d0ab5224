#pragma once

#include <string>

#include <json.hpp>

#include "ndsys/lattice.hpp"
#include "ndsys/lax_phillips.hpp"
#include "ndsys/realization.hpp"
#include "ndsys/system.hpp"
#include "ndsys/transfer.hpp"

namespace ndsys::io {

using nlohmann::json;

// Complex numbers are [re, im]; matrices are arrays of rows.
json complex_to_json(Complex c);
Complex complex_from_json(const json& j);
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);
json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const json& j);
json point_to_json(const Point& z);
Point point_from_json(const json& j);

/// {"n", "dims": {"x", "nm", "np"}, "A", "B", "C", "D"}
json system_to_json(const MultiLSDS& sys);
/// Structure only; no invariant checks.
SystemDescription description_from_json(const json& j);
/// Throws ParseError listing every violation.
MultiLSDS system_from_json(const json& j);

/// {"n", "dim", "entries": [{"t", "v"}]}
json signal_to_json(const LatticeSignal& s);
LatticeSignal signal_from_json(const json& j);

/// {"n", "shape": [p, q], "terms": [{"t", "m"}]}
json polynomial_to_json(const MatrixPolynomial& p);
MatrixPolynomial polynomial_from_json(const json& j);

json box_to_json(const Box& b);
Box box_from_json(const json& j);

/// {"box", "u_plus", "y", "u_minus"}
json lp_vector_to_json(const LPVector& h);
LPVector lp_vector_from_json(const json& j);

/// {"theta", "F": [...], "sample_grid": [[z_1, ..., z_N], ...]}
json agler_to_json(const AglerData& d);
AglerData agler_from_json(const json& j);

/// Throws ParseError when the file is unreadable or not JSON.
json read_json_file(const std::string& path);

}  // namespace ndsys::io
