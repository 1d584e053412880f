#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "parastat/rmatrix.hpp"
#include "parastat/spinchain.hpp"

namespace parastat::io {

using Json = nlohmann::ordered_json;

// {"m": m, "data": [re, im, ...]} with m^4 entries in (a, b, c, d) order, 0-based.
Json rmatrix_to_json(const RMatrix& r);
// Throws ShapeError on a malformed payload. Runs ybe_check unless validate is
// false and throws ConstraintError when it fails.
RMatrix rmatrix_from_json(const Json& j, bool validate = true, double tol = 1e-12);
RMatrix load_rmatrix(const std::string& path, bool validate = true, double tol = 1e-12);
void save_rmatrix(const RMatrix& r, const std::string& path);

// {"rmatrix": "<path>" | {"builtin": name, "m": m} | {"m":..,"data":..}, "N": n, "J": [..], "mu": [..]}
SpinChainSpec chain_spec_from_json(const Json& j, bool validate = true);
SpinChainSpec load_chain_spec(const std::string& path, bool validate = true);

Json complex_matrix(const CMatrix& a);  // rows of [re, im] pairs
Json real_vector(const Eigen::VectorXd& v);

std::string hex64(std::uint64_t v);

}  // namespace parastat::io
