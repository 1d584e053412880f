#include "parastat/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "parastat/errors.hpp"

namespace parastat::io {

Json rmatrix_to_json(const RMatrix& r) {
  const int m = r.m();
  Json data = Json::array();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) {
          const cplx v = r(a, b, c, d);
          data.push_back(v.real());
          data.push_back(v.imag());
        }
  return Json{{"m", m}, {"data", std::move(data)}};
}

RMatrix rmatrix_from_json(const Json& j, bool validate, double tol) {
  if (!j.is_object() || !j.contains("m") || !j.contains("data"))
    throw ShapeError("R-matrix JSON needs keys \"m\" and \"data\"");
  if (!j["m"].is_number_integer() || j["m"].get<long long>() < 1)
    throw ShapeError("\"m\" must be a positive integer");
  const auto mm = j["m"].get<long long>();
  if (mm > 64) throw ShapeError("\"m\" = " + std::to_string(mm) + " is unreasonably large");
  const int m = static_cast<int>(mm);
  const auto& data = j["data"];
  const std::size_t want = 2 * static_cast<std::size_t>(m) * m * m * m;
  if (!data.is_array() || data.size() != want)
    throw ShapeError("\"data\" must hold " + std::to_string(want) + " numbers (m^4 complex entries), got " +
                     std::to_string(data.is_array() ? data.size() : 0));
  CMatrix mat(m * m, m * m);
  std::size_t k = 0;
  for (int row = 0; row < m * m; ++row)
    for (int col = 0; col < m * m; ++col, k += 2) {
      if (!data[k].is_number() || !data[k + 1].is_number())
        throw ShapeError("non-numeric entry at position " + std::to_string(k));
      mat(row, col) = cplx(data[k].get<double>(), data[k + 1].get<double>());
    }
  RMatrix r(m, std::move(mat), "file");
  if (validate) {
    const YbeReport rep = ybe_check(r, tol);
    if (!rep.involutive || !rep.braid) {
      std::ostringstream msg;
      msg << "R-matrix fails the Yang-Baxter checks: involution residual "
          << rep.involution_residual << ", braid residual " << rep.braid_residual;
      throw ConstraintError(msg.str());
    }
  }
  return r;
}

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ShapeError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError(path + ": " + e.what());
  }
}

std::vector<double> number_list(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  if (!j[key].is_array()) throw ShapeError(std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw ShapeError(std::string("\"") + key + "\" holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

RMatrix load_rmatrix(const std::string& path, bool validate, double tol) {
  return rmatrix_from_json(read_json(path), validate, tol);
}

void save_rmatrix(const RMatrix& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ShapeError("cannot write " + path);
  out << rmatrix_to_json(r).dump(1) << "\n";
}

SpinChainSpec chain_spec_from_json(const Json& j, bool validate) {
  if (!j.is_object() || !j.contains("rmatrix") || !j.contains("N"))
    throw ShapeError("chain spec needs \"rmatrix\" and \"N\"");
  const Json& src = j["rmatrix"];
  std::optional<RMatrix> r;
  if (src.is_string()) {
    r = load_rmatrix(src.get<std::string>(), validate);
  } else if (src.is_object() && src.contains("builtin")) {
    const int m = src.value("m", 1);
    r = builtin(parse_builtin(src["builtin"].get<std::string>()), m);
  } else {
    r = rmatrix_from_json(src, validate);
  }
  if (!j["N"].is_number_integer()) throw ShapeError("\"N\" must be an integer");
  const int n = j["N"].get<int>();
  std::vector<double> jj = number_list(j, "J");
  std::vector<double> mu = number_list(j, "mu");
  if (mu.empty()) mu.assign(std::max(n, 0), 0.0);
  return SpinChainSpec::make(*r, n, std::move(jj), std::move(mu));
}

SpinChainSpec load_chain_spec(const std::string& path, bool validate) {
  return chain_spec_from_json(read_json(path), validate);
}

Json complex_matrix(const CMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back({a(i, k).real(), a(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Json real_vector(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace parastat::io
