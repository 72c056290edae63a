#pragma once

// JSON file formats and report serialization. All emitted documents carry
// "schema": "1", keys appear in a fixed order, and numeric output is printed
// with 17 significant digits so reruns are byte-comparable.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "comass.hpp"
#include "positivity.hpp"
#include "tensor.hpp"

namespace kcurv {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline void dump17(const ordered_json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::detail::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        dump17(it.value(), out);
      }
      out += '}';
      break;
    }
    case nlohmann::detail::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump17(v, out);
      }
      out += ']';
      break;
    }
    case nlohmann::detail::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

inline std::string dump_json(const ordered_json& j) {
  std::string out;
  detail::dump17(j, out);
  out += '\n';
  return out;
}

// --------------------------------------------------------------------------
// Tensor files: { "schema": "1", "n": int, "R": [i][j][k][l] -> [re, im] }.

inline ordered_json tensor_to_json(const CurvatureTensor& R) {
  ordered_json j;
  j["schema"] = "1";
  j["n"] = R.n;
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < R.n; ++i) {
    ordered_json ji = ordered_json::array();
    for (int jj = 0; jj < R.n; ++jj) {
      ordered_json jk = ordered_json::array();
      for (int k = 0; k < R.n; ++k) {
        ordered_json jl = ordered_json::array();
        for (int l = 0; l < R.n; ++l) {
          const cplx v = R(i, jj, k, l);
          jl.push_back(ordered_json::array({v.real(), v.imag()}));
        }
        jk.push_back(jl);
      }
      ji.push_back(jk);
    }
    rows.push_back(ji);
  }
  j["R"] = rows;
  return j;
}

inline CurvatureTensor tensor_from_json(const ordered_json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer()) throw std::invalid_argument("tensor file: missing integer field \"n\"");
  const int n = j["n"].get<int>();
  if (n < 1) throw std::invalid_argument("tensor file: n must be >= 1");
  if (!j.contains("R") || !j["R"].is_array() || static_cast<int>(j["R"].size()) != n)
    throw std::invalid_argument("tensor file: \"R\" must be an array of length n");
  CurvatureTensor R(n);
  for (int i = 0; i < n; ++i) {
    const auto& ji = j["R"][i];
    if (!ji.is_array() || static_cast<int>(ji.size()) != n) {
      std::ostringstream os;
      os << "tensor file: R[" << i << "] must be an array of length n";
      throw std::invalid_argument(os.str());
    }
    for (int jj = 0; jj < n; ++jj) {
      const auto& jk = ji[jj];
      if (!jk.is_array() || static_cast<int>(jk.size()) != n) {
        std::ostringstream os;
        os << "tensor file: R[" << i << "][" << jj << "] must be an array of length n";
        throw std::invalid_argument(os.str());
      }
      for (int k = 0; k < n; ++k) {
        const auto& jl = jk[k];
        if (!jl.is_array() || static_cast<int>(jl.size()) != n) {
          std::ostringstream os;
          os << "tensor file: R[" << i << "][" << jj << "][" << k << "] must be an array of length n";
          throw std::invalid_argument(os.str());
        }
        for (int l = 0; l < n; ++l) {
          const auto& entry = jl[l];
          if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
            std::ostringstream os;
            os << "tensor file: R[" << i << "][" << jj << "][" << k << "][" << l << "] must be [re, im]";
            throw std::invalid_argument(os.str());
          }
          R(i, jj, k, l) = cplx(entry[0].get<double>(), entry[1].get<double>());
        }
      }
    }
  }
  return R;
}

// --------------------------------------------------------------------------
// Covector files: { "schema": "1", "n": int, "p": int,
//                   "coeffs": [ [[i_1,...,i_p], re, im], ... ] },
// indices 0-based and strictly increasing.

inline ordered_json form_to_json(const PCovector& w) {
  ordered_json j;
  j["schema"] = "1";
  j["n"] = w.n;
  j["p"] = w.p;
  ordered_json entries = ordered_json::array();
  const auto indices = increasing_multi_indices(w.n, w.p);
  for (size_t m = 0; m < indices.size(); ++m) {
    if (w.coeffs[m] == cplx(0, 0)) continue;
    ordered_json idx = ordered_json::array();
    for (int v : indices[m]) idx.push_back(v);
    entries.push_back(ordered_json::array({idx, w.coeffs[m].real(), w.coeffs[m].imag()}));
  }
  j["coeffs"] = entries;
  return j;
}

inline PCovector form_from_json(const ordered_json& j) {
  if (!j.contains("n") || !j.contains("p")) throw std::invalid_argument("form file: missing \"n\" or \"p\"");
  const int n = j["n"].get<int>();
  const int p = j["p"].get<int>();
  PCovector w = PCovector::zero(n, p);
  if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw std::invalid_argument("form file: missing \"coeffs\" array");
  size_t pos = 0;
  for (const auto& entry : j["coeffs"]) {
    if (!entry.is_array() || entry.size() != 3 || !entry[0].is_array()) {
      std::ostringstream os;
      os << "form file: coeffs[" << pos << "] must be [[indices], re, im]";
      throw std::invalid_argument(os.str());
    }
    std::vector<int> I;
    for (const auto& v : entry[0]) I.push_back(v.get<int>());
    w.set(I, cplx(entry[1].get<double>(), entry[2].get<double>()));
    ++pos;
  }
  return w;
}

// --------------------------------------------------------------------------

inline ordered_json complex_to_json(const cplx& z) { return ordered_json::array({z.real(), z.imag()}); }

inline ordered_json vector_to_json(const Eigen::VectorXcd& v) {
  ordered_json j = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(complex_to_json(v(i)));
  return j;
}

inline ordered_json matrix_to_json(const Eigen::MatrixXcd& m) {
  ordered_json j = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    j.push_back(row);
  }
  return j;
}

// Key order: schema, n, seed, eps, restarts, conditions, audit, summary.
inline ordered_json report_to_json(const PositivityReport& rep) {
  ordered_json j;
  j["schema"] = "1";
  j["n"] = rep.n;
  j["seed"] = rep.opts.seed;
  j["eps"] = rep.opts.eps;
  j["restarts"] = rep.opts.restarts;
  ordered_json conds = ordered_json::array();
  for (const auto& c : rep.conditions) {
    ordered_json jc;
    jc["name"] = c.name;
    jc["value"] = c.value;
    jc["margin"] = c.margin;
    jc["status"] = status_name(c.status);
    jc["certified"] = c.certified;
    jc["sampled_min"] = c.sampled_min;
    jc["sample_ok"] = c.sample_ok;
    ordered_json w;
    if (c.witness_vector.size() > 0) w["vector"] = vector_to_json(c.witness_vector);
    if (c.witness_frame.size() > 0) w["frame"] = matrix_to_json(c.witness_frame);
    if (c.witness_map.size() > 0) w["map"] = matrix_to_json(c.witness_map);
    jc["witness"] = w;
    conds.push_back(jc);
  }
  j["conditions"] = conds;
  ordered_json audit = ordered_json::array();
  for (const auto& a : rep.audit) {
    ordered_json ja;
    ja["name"] = a.name;
    ja["ok"] = a.ok;
    ja["lhs"] = a.lhs;
    ja["rhs"] = a.rhs;
    ja["detail"] = a.detail;
    audit.push_back(ja);
  }
  j["audit"] = audit;
  ordered_json summary;
  summary["positive"] = rep.count(Status::Positive);
  summary["nonpositive"] = rep.count(Status::Nonpositive);
  summary["inconclusive"] = rep.count(Status::Inconclusive);
  j["summary"] = summary;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

inline ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return j;
}

}  // namespace kcurv
