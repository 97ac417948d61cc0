#pragma once

/** @file io.hpp
 *  JSON schemas for every value the toolkit exchanges through files, plus the
 *  CSV/JSON table rendering shared by the command line front end.
 *
 *  Schemas:
 *    matrix          {"dim": n, "re": [[..]], "im": [[..]]}   ("im" optional)
 *    vector          {"dim": n, "re": [..],   "im": [..]}     ("im" optional)
 *    state           matrix (validated density) or unit vector (pure state)
 *    Hamiltonian     matrix keys plus {"energies": [..], "grouping_tol": t};
 *                    "energies" alone declares a diagonal Hamiltonian
 *    distribution    {"support": [{"energy": e, "p": p}, ..]}
 *    channel bundle  {"H_S", "H_B", "beta_B", "U_SB",
 *                     "metadata": {"name", "target_gate"}}
 *    random variable {"basis": ["1","sqrt2",..],
 *                     "atoms": [{"coeffs": ["p/q",..], "p": x}, ..]}
 *    prepartition    {"subsets": [[indices], ..]}
 *    gate file       {"hamiltonian", "gate"} plus optional exact spectrum
 *                    declaration {"basis", "levels": [[coeffs], ..]}
 *
 *  Every loader validates shape and domain and throws schema_error on
 *  malformed input; constructions that would exceed the dense-dimension cap
 *  throw cap_error before allocating.
 */

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "gatecoh/bounds.hpp"
#include "gatecoh/channels.hpp"
#include "gatecoh/coherence.hpp"
#include "gatecoh/common.hpp"
#include "gatecoh/discrete_rv.hpp"
#include "gatecoh/exact.hpp"
#include "gatecoh/hamiltonian.hpp"
#include "gatecoh/linalg.hpp"
#include "gatecoh/states.hpp"

namespace gatecoh {

inline constexpr const char* kVersion = "0.1.0";

//=============================================================================
// Files and formatting
//=============================================================================

/** Parses a JSON document from disk; missing or unparsable files are schema
 *  violations. */
inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw schema_error("cannot open file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw schema_error("invalid JSON in '" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out.good()) throw schema_error("cannot write file '" + path + "'");
  out << text;
}

/** Locale-independent rendering with 12 significant digits. */
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace detail {

inline const nlohmann::json& require_key(const nlohmann::json& j,
                                         const char* key, const char* ctx) {
  if (!j.is_object() || !j.contains(key))
    throw schema_error(std::string(ctx) + ": missing key '" + key + "'");
  return j.at(key);
}

inline double require_number(const nlohmann::json& j, const char* ctx) {
  if (!j.is_number())
    throw schema_error(std::string(ctx) + ": expected a number");
  return j.get<double>();
}

inline int require_dim(const nlohmann::json& j, const char* ctx) {
  const nlohmann::json& d = require_key(j, "dim", ctx);
  if (!d.is_number_integer() || d.get<long long>() < 1)
    throw schema_error(std::string(ctx) + ": 'dim' must be a positive integer");
  const long long n = d.get<long long>();
  if (n > kMaxDenseDim)
    throw cap_error(std::string(ctx) + ": dimension " + std::to_string(n) +
                    " exceeds the dense cap " + std::to_string(kMaxDenseDim));
  return static_cast<int>(n);
}

/** Reads an n-row x n-col numeric grid ("re"/"im" style). */
inline Eigen::MatrixXd read_grid(const nlohmann::json& j, int rows, int cols,
                                 const char* ctx) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw schema_error(std::string(ctx) + ": expected " + std::to_string(rows) +
                       " rows");
  Eigen::MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const nlohmann::json& row = j.at(r);
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw schema_error(std::string(ctx) + ": row " + std::to_string(r) +
                         " must hold " + std::to_string(cols) + " numbers");
    for (int c = 0; c < cols; ++c) out(r, c) = require_number(row.at(c), ctx);
  }
  return out;
}

inline Eigen::VectorXd read_list(const nlohmann::json& j, int n,
                                 const char* ctx) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw schema_error(std::string(ctx) + ": expected " + std::to_string(n) +
                       " numbers");
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = require_number(j.at(i), ctx);
  return out;
}

} // namespace detail

//=============================================================================
// Matrices, vectors, states
//=============================================================================

inline nlohmann::json matrix_to_json(const Matrix& m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int r = 0; r < rows; ++r) {
    nlohmann::json row_re = nlohmann::json::array();
    nlohmann::json row_im = nlohmann::json::array();
    for (int c = 0; c < cols; ++c) {
      row_re.push_back(m(r, c).real());
      row_im.push_back(m(r, c).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return {{"dim", rows}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  const char* ctx = "matrix";
  const int n = detail::require_dim(j, ctx);
  const Eigen::MatrixXd re =
      detail::read_grid(detail::require_key(j, "re", ctx), n, n, ctx);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(n, n);
  if (j.contains("im")) im = detail::read_grid(j.at("im"), n, n, ctx);
  Matrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

inline nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"dim", static_cast<int>(v.size())},
          {"re", std::move(re)},
          {"im", std::move(im)}};
}

inline Vector vector_from_json(const nlohmann::json& j) {
  const char* ctx = "vector";
  const int n = detail::require_dim(j, ctx);
  const Eigen::VectorXd re =
      detail::read_list(detail::require_key(j, "re", ctx), n, ctx);
  Eigen::VectorXd im = Eigen::VectorXd::Zero(n);
  if (j.contains("im")) im = detail::read_list(j.at("im"), n, ctx);
  Vector out(n);
  out.real() = re;
  out.imag() = im;
  return out;
}

/** A state file holds either a density matrix (2-D "re") or a unit vector
 *  (1-D "re") describing a pure state. */
inline DensityOperator state_from_json(const nlohmann::json& j) {
  const nlohmann::json& re = detail::require_key(j, "re", "state");
  if (re.is_array() && !re.empty() && re.at(0).is_array())
    return DensityOperator(matrix_from_json(j));
  Vector v = vector_from_json(j);
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-9)
    throw schema_error("state: pure-state vector must have unit norm");
  return PureState(v / norm).density();
}

//=============================================================================
// Hamiltonians
//=============================================================================

inline nlohmann::json hamiltonian_to_json(const Hamiltonian& h) {
  nlohmann::json j = matrix_to_json(h.matrix());
  nlohmann::json energies = nlohmann::json::array();
  for (int l = 0; l < h.level_count(); ++l)
    for (int k = 0; k < h.degeneracy(l); ++k) energies.push_back(h.energy(l));
  j["energies"] = std::move(energies);
  j["grouping_tol"] = h.grouping_tol();
  return j;
}

inline Hamiltonian hamiltonian_from_json(const nlohmann::json& j) {
  const char* ctx = "hamiltonian";
  const int n = detail::require_dim(j, ctx);
  double gtol = -1.0;
  if (j.contains("grouping_tol"))
    gtol = detail::require_number(j.at("grouping_tol"), ctx);

  if (j.contains("re")) {
    const Hamiltonian h = Hamiltonian::from_matrix(matrix_from_json(j), gtol);
    if (j.contains("energies")) {
      // Declared energies are cross-checked against the matrix spectrum.
      Eigen::VectorXd declared = detail::read_list(j.at("energies"), n, ctx);
      std::sort(declared.data(), declared.data() + declared.size());
      const double tol = 1e-6 * (h.spectral_radius() + 1.0);
      int at = 0;
      for (int l = 0; l < h.level_count(); ++l)
        for (int k = 0; k < h.degeneracy(l); ++k, ++at)
          if (std::abs(declared(at) - h.energy(l)) > tol)
            throw schema_error(
                "hamiltonian: declared energies do not match the matrix "
                "spectrum");
    }
    return h;
  }
  if (j.contains("energies"))
    return Hamiltonian::from_energies(detail::read_list(j.at("energies"), n, ctx),
                                      gtol);
  throw schema_error("hamiltonian: need either 're' or 'energies'");
}

//=============================================================================
// Energy distributions
//=============================================================================

inline nlohmann::json energy_distribution_to_json(const EnergyDistribution& d) {
  nlohmann::json support = nlohmann::json::array();
  for (const auto& entry : d.support)
    support.push_back({{"energy", entry.energy}, {"p", entry.probability}});
  return {{"support", std::move(support)}};
}

inline EnergyDistribution energy_distribution_from_json(const nlohmann::json& j) {
  const char* ctx = "energy distribution";
  const nlohmann::json& support = detail::require_key(j, "support", ctx);
  if (!support.is_array() || support.empty())
    throw schema_error("energy distribution: 'support' must be non-empty");
  std::vector<EnergyDistribution::Entry> entries;
  double total = 0.0;
  for (const auto& item : support) {
    EnergyDistribution::Entry e;
    e.energy = detail::require_number(detail::require_key(item, "energy", ctx), ctx);
    e.probability = detail::require_number(detail::require_key(item, "p", ctx), ctx);
    if (e.probability < -1e-12)
      throw schema_error("energy distribution: negative probability");
    total += e.probability;
    entries.push_back(e);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw schema_error("energy distribution: probabilities must sum to one");
  return EnergyDistribution(std::move(entries));
}

//=============================================================================
// Channel bundles
//=============================================================================

struct ChannelBundle {
  TepChannel channel;
  std::string name;
  std::string target_gate;
};

inline nlohmann::json channel_bundle_to_json(const TepChannel& ch,
                                             const std::string& name,
                                             const std::string& target_gate) {
  return {{"H_S", hamiltonian_to_json(ch.system_hamiltonian())},
          {"H_B", hamiltonian_to_json(ch.battery_hamiltonian())},
          {"beta_B", matrix_to_json(ch.battery_state().matrix())},
          {"U_SB", matrix_to_json(ch.joint_unitary())},
          {"metadata", {{"name", name}, {"target_gate", target_gate}}}};
}

inline ChannelBundle channel_bundle_from_json(const nlohmann::json& j) {
  const char* ctx = "channel bundle";
  Hamiltonian h_s = hamiltonian_from_json(detail::require_key(j, "H_S", ctx));
  Hamiltonian h_b = hamiltonian_from_json(detail::require_key(j, "H_B", ctx));
  DensityOperator beta = state_from_json(detail::require_key(j, "beta_B", ctx));
  Matrix u = matrix_from_json(detail::require_key(j, "U_SB", ctx));
  const nlohmann::json& meta = detail::require_key(j, "metadata", ctx);
  const nlohmann::json& name = detail::require_key(meta, "name", ctx);
  const nlohmann::json& target = detail::require_key(meta, "target_gate", ctx);
  if (!name.is_string() || !target.is_string())
    throw schema_error("channel bundle: metadata fields must be strings");
  // The TepChannel constructor revalidates unitarity and energy preservation.
  return ChannelBundle{TepChannel(std::move(h_s), std::move(h_b),
                                  std::move(beta), std::move(u)),
                       name.get<std::string>(), target.get<std::string>()};
}

//=============================================================================
// Exact random variables and prepartitions
//=============================================================================

inline nlohmann::json rv_to_json(const DiscreteRV& x) {
  nlohmann::json atoms = nlohmann::json::array();
  for (int i = 0; i < x.size(); ++i) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int c = 0; c < x.value(i).dim(); ++c)
      coeffs.push_back(x.value(i).coeff(c).str());
    atoms.push_back({{"coeffs", std::move(coeffs)}, {"p", x.prob(i)}});
  }
  return {{"basis", x.basis()->labels}, {"atoms", std::move(atoms)}};
}

inline DiscreteRV rv_from_json(const nlohmann::json& j) {
  const char* ctx = "random variable";
  const nlohmann::json& basis_labels = detail::require_key(j, "basis", ctx);
  if (!basis_labels.is_array() || basis_labels.empty())
    throw schema_error("random variable: 'basis' must be a non-empty array");
  std::vector<std::string> labels;
  for (const auto& label : basis_labels) {
    if (!label.is_string())
      throw schema_error("random variable: basis labels must be strings");
    labels.push_back(label.get<std::string>());
  }
  const auto basis = ExactBasis::make(labels);

  const nlohmann::json& atoms = detail::require_key(j, "atoms", ctx);
  if (!atoms.is_array() || atoms.empty())
    throw schema_error("random variable: 'atoms' must be a non-empty array");
  std::vector<ExactReal> values;
  std::vector<double> probs;
  for (const auto& atom : atoms) {
    const nlohmann::json& coeffs = detail::require_key(atom, "coeffs", ctx);
    if (!coeffs.is_array() ||
        static_cast<int>(coeffs.size()) != basis->size())
      throw schema_error(
          "random variable: each atom needs one coefficient per basis element");
    std::vector<Rational> c;
    for (const auto& item : coeffs) {
      if (!item.is_string())
        throw schema_error("random variable: coefficients must be strings");
      c.push_back(parse_rational(item.get<std::string>()));
    }
    values.emplace_back(basis, std::move(c));
    probs.push_back(
        detail::require_number(detail::require_key(atom, "p", ctx), ctx));
  }
  return DiscreteRV(std::move(values), std::move(probs));
}

inline nlohmann::json prepartition_to_json(const Prepartition& p) {
  return {{"subsets", p.subsets}};
}

inline Prepartition prepartition_from_json(const nlohmann::json& j) {
  const nlohmann::json& subsets = detail::require_key(j, "subsets", "prepartition");
  if (!subsets.is_array())
    throw schema_error("prepartition: 'subsets' must be an array");
  Prepartition p;
  for (const auto& subset : subsets) {
    if (!subset.is_array())
      throw schema_error("prepartition: each subset must be an index array");
    std::vector<int> indices;
    for (const auto& idx : subset) {
      if (!idx.is_number_integer())
        throw schema_error("prepartition: indices must be integers");
      indices.push_back(idx.get<int>());
    }
    p.subsets.push_back(std::move(indices));
  }
  return p;
}

//=============================================================================
// Gate files
//=============================================================================

struct GateFile {
  GateInstance gate;
  std::vector<ExactReal> levels;  ///< exact level values, empty when undeclared
};

inline nlohmann::json gate_file_to_json(const GateInstance& g,
                                        const std::vector<ExactReal>& levels = {}) {
  nlohmann::json j{{"hamiltonian", hamiltonian_to_json(g.h_s)},
                   {"gate", matrix_to_json(g.v_s)}};
  if (!levels.empty()) {
    j["basis"] = levels.front().basis()->labels;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& level : levels) {
      nlohmann::json coeffs = nlohmann::json::array();
      for (int c = 0; c < level.dim(); ++c) coeffs.push_back(level.coeff(c).str());
      rows.push_back(std::move(coeffs));
    }
    j["levels"] = std::move(rows);
  }
  return j;
}

inline GateFile gate_file_from_json(const nlohmann::json& j) {
  const char* ctx = "gate file";
  Hamiltonian h =
      hamiltonian_from_json(detail::require_key(j, "hamiltonian", ctx));
  Matrix v = matrix_from_json(detail::require_key(j, "gate", ctx));
  GateInstance gate(std::move(h), std::move(v));

  std::vector<ExactReal> levels;
  if (j.contains("levels")) {
    if (!j.contains("basis"))
      throw schema_error("gate file: 'levels' requires a 'basis' declaration");
    std::vector<std::string> labels;
    for (const auto& label : j.at("basis")) {
      if (!label.is_string())
        throw schema_error("gate file: basis labels must be strings");
      labels.push_back(label.get<std::string>());
    }
    const auto basis = ExactBasis::make(labels);
    const nlohmann::json& rows = j.at("levels");
    if (!rows.is_array() ||
        static_cast<int>(rows.size()) != gate.h_s.level_count())
      throw schema_error(
          "gate file: need one exact value per distinct energy level");
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != basis->size())
        throw schema_error(
            "gate file: each level needs one coefficient per basis element");
      std::vector<Rational> c;
      for (const auto& item : row) {
        if (!item.is_string())
          throw schema_error("gate file: coefficients must be strings");
        c.push_back(parse_rational(item.get<std::string>()));
      }
      levels.emplace_back(basis, std::move(c));
    }
  }
  return GateFile{std::move(gate), std::move(levels)};
}

//=============================================================================
// Output tables
//=============================================================================

/** A rectangular result table; cells hold JSON scalars so integer, float,
 *  boolean, string, and missing values all render consistently. */
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> cells;
};

namespace detail {

inline std::string csv_cell(const nlohmann::json& c) {
  if (c.is_null()) return "";
  if (c.is_string()) return c.get<std::string>();
  if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
  if (c.is_number_float()) return format_double(c.get<double>());
  if (c.is_number()) return std::to_string(c.get<long long>());
  return c.dump();
}

} // namespace detail

/** CSV rendering: '#'-prefixed metadata lines (version first), a header row,
 *  then one line per table row with 12-significant-digit floats. */
inline std::string table_to_csv(const Table& t, const nlohmann::json& meta) {
  std::string out = std::string("# gatecoh ") + kVersion + "\n";
  if (meta.is_object())
    for (const auto& [key, value] : meta.items())
      out += "# " + key + " " + value.dump() + "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    out += (c ? "," : "") + t.columns[c];
  out += "\n";
  for (const auto& row : t.cells) {
    if (row.size() != t.columns.size())
      throw schema_error("table: row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c)
      out += (c ? "," : "") + detail::csv_cell(row[c]);
    out += "\n";
  }
  return out;
}

/** JSON rendering: the metadata keys, the library version, and "rows" holding
 *  one object per table row. */
inline nlohmann::json table_to_json(const Table& t, const nlohmann::json& meta) {
  nlohmann::json j = meta.is_object() ? meta : nlohmann::json::object();
  j["version"] = kVersion;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.cells) {
    if (row.size() != t.columns.size())
      throw schema_error("table: row width does not match the header");
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = row[c];
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  return j;
}

} // namespace gatecoh
