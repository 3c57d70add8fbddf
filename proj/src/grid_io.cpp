#include "polygrid/grid_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace polygrid {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& message) {
  throw Error(ErrorCode::ParseError, message);
}

Complex parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail(where + ": complex values must be [re, im] number pairs");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

ComplexMatrix parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    parse_fail(where + ": matrix must be a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  ComplexMatrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].empty()) {
      parse_fail(where + ": matrix rows must be non-empty arrays");
    }
    if (r == 0) {
      cols = j[r].size();
      m.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    } else if (j[r].size() != cols) {
      parse_fail(where + ": matrix rows have inconsistent lengths");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = parse_complex(j[r][c], where);
    }
  }
  return m;
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string describe_violations(const std::vector<std::string>& v) {
  std::string out;
  for (const std::string& s : v) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

GridModel parse_grid_file(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(e.what());
  }
  if (!doc.is_object()) parse_fail("top-level document must be an object");

  if (!doc.contains("phases") || !doc["phases"].is_number_integer()) {
    parse_fail("'phases' must be an integer");
  }
  const Index phases = doc["phases"].get<Index>();
  if (phases < 1) parse_fail("'phases' must be at least 1");
  if (!doc.contains("nodes") || !doc["nodes"].is_array() || doc["nodes"].empty()) {
    parse_fail("'nodes' must be a non-empty array");
  }

  // Structural pass first; conformance violations are collected afterwards so
  // one run reports every offending element.
  struct NodeEntry {
    std::string name;
    bool virtual_flag = false;
    ComplexMatrix shunt;
    bool has_shunt = false;
  };
  struct BranchEntry {
    std::string from, to;
    ComplexMatrix impedance;
  };
  struct TeeEntry {
    std::string from, to;
    ComplexMatrix z_primary, z_secondary, y_center;
  };

  std::vector<NodeEntry> nodes;
  for (const json& jn : doc["nodes"]) {
    if (!jn.is_object() || !jn.contains("name") || !jn["name"].is_string()) {
      parse_fail("every node needs a string 'name'");
    }
    NodeEntry entry;
    entry.name = jn["name"].get<std::string>();
    if (jn.contains("virtual")) {
      if (!jn["virtual"].is_boolean()) parse_fail("node '" + entry.name + "': 'virtual' must be a boolean");
      entry.virtual_flag = jn["virtual"].get<bool>();
    }
    if (jn.contains("shunt")) {
      entry.shunt = parse_matrix(jn["shunt"], "node '" + entry.name + "' shunt");
      entry.has_shunt = true;
    }
    nodes.push_back(std::move(entry));
  }

  std::vector<BranchEntry> branches;
  if (doc.contains("branches")) {
    if (!doc["branches"].is_array()) parse_fail("'branches' must be an array");
    for (const json& jb : doc["branches"]) {
      if (!jb.is_object() || !jb.contains("from") || !jb["from"].is_string() ||
          !jb.contains("to") || !jb["to"].is_string() || !jb.contains("impedance")) {
        parse_fail("every branch needs 'from', 'to', and 'impedance'");
      }
      BranchEntry entry;
      entry.from = jb["from"].get<std::string>();
      entry.to = jb["to"].get<std::string>();
      entry.impedance = parse_matrix(
          jb["impedance"], "branch " + entry.from + "->" + entry.to + " impedance");
      branches.push_back(std::move(entry));
    }
  }

  std::vector<TeeEntry> tees;
  if (doc.contains("tees")) {
    if (!doc["tees"].is_array()) parse_fail("'tees' must be an array");
    for (const json& jt : doc["tees"]) {
      if (!jt.is_object() || !jt.contains("from") || !jt["from"].is_string() ||
          !jt.contains("to") || !jt["to"].is_string() || !jt.contains("z_primary") ||
          !jt.contains("z_secondary") || !jt.contains("y_center")) {
        parse_fail("every tee needs 'from', 'to', 'z_primary', 'z_secondary', 'y_center'");
      }
      TeeEntry entry;
      entry.from = jt["from"].get<std::string>();
      entry.to = jt["to"].get<std::string>();
      const std::string where = "tee " + entry.from + "->" + entry.to;
      entry.z_primary = parse_matrix(jt["z_primary"], where + " z_primary");
      entry.z_secondary = parse_matrix(jt["z_secondary"], where + " z_secondary");
      entry.y_center = parse_matrix(jt["y_center"], where + " y_center");
      tees.push_back(std::move(entry));
    }
  }

  // Semantic validation: names, endpoint resolution, shapes, conformance.
  std::vector<std::string> violations;
  auto check_shape = [&](const ComplexMatrix& m, const std::string& what) {
    if (m.rows() != phases || m.cols() != phases) {
      violations.push_back(what + ": expected a " + std::to_string(phases) + "x" +
                           std::to_string(phases) + " matrix");
      return false;
    }
    return true;
  };

  std::unordered_set<std::string> seen_names;
  for (const NodeEntry& n : nodes) {
    if (!seen_names.insert(n.name).second) {
      violations.push_back("duplicate node name '" + n.name + "'");
    }
  }
  auto check_endpoint = [&](const std::string& name, const std::string& what) {
    if (!seen_names.contains(name)) {
      violations.push_back(what + ": unknown node '" + name + "'");
      return false;
    }
    return true;
  };

  for (const NodeEntry& n : nodes) {
    if (!n.has_shunt) continue;
    if (!check_shape(n.shunt, "node '" + n.name + "' shunt")) continue;
    const ShuntValidation v = validate_shunt_admittance(n.shunt);
    if (v.kind == ShuntKind::Violation) {
      violations.push_back("node '" + n.name + "' shunt: " + describe_violations(v.violations));
    }
  }
  for (const BranchEntry& b : branches) {
    const std::string what = "branch " + b.from + "->" + b.to;
    bool ok = check_endpoint(b.from, what) && check_endpoint(b.to, what);
    if (b.from == b.to) {
      violations.push_back(what + ": endpoints must differ");
      ok = false;
    }
    if (!check_shape(b.impedance, what + " impedance")) continue;
    if (!ok) continue;
    const BranchValidation v = validate_branch_impedance(b.impedance);
    if (!v.conformant) {
      violations.push_back(what + " impedance: " + describe_violations(v.violations));
    }
  }
  std::size_t tee_ordinal = 0;
  for (const TeeEntry& t : tees) {
    const std::string what = "tee " + t.from + "->" + t.to;
    check_endpoint(t.from, what);
    check_endpoint(t.to, what);
    const std::string center =
        t.from + "__" + t.to + "__T" + std::to_string(tee_ordinal++);
    if (seen_names.contains(center)) {
      violations.push_back(what + ": generated center name '" + center +
                           "' collides with an existing node");
    }
    if (check_shape(t.z_primary, what + " z_primary")) {
      const BranchValidation v = validate_branch_impedance(t.z_primary);
      if (!v.conformant) {
        violations.push_back(what + " z_primary: " + describe_violations(v.violations));
      }
    }
    if (check_shape(t.z_secondary, what + " z_secondary")) {
      const BranchValidation v = validate_branch_impedance(t.z_secondary);
      if (!v.conformant) {
        violations.push_back(what + " z_secondary: " + describe_violations(v.violations));
      }
    }
    if (check_shape(t.y_center, what + " y_center")) {
      const ShuntValidation v = validate_shunt_admittance(t.y_center);
      if (v.kind == ShuntKind::Violation) {
        violations.push_back(what + " y_center: " + describe_violations(v.violations));
      }
    }
  }
  if (!violations.empty()) {
    throw Error(ErrorCode::HypothesisViolation, describe_violations(violations));
  }

  GridModelBuilder builder(phases);
  for (NodeEntry& n : nodes) {
    CompoundShuntAdmittance shunt =
        n.has_shunt ? CompoundShuntAdmittance::from_matrix(std::move(n.shunt))
                    : CompoundShuntAdmittance::zero(phases);
    builder.add_node(std::move(n.name), std::move(shunt), n.virtual_flag);
  }
  for (BranchEntry& b : branches) {
    builder.add_branch(b.from, b.to, CompoundBranchImpedance::from_matrix(std::move(b.impedance)));
  }
  for (TeeEntry& t : tees) {
    builder.add_tee(t.from, t.to,
                    TeeSection{CompoundBranchImpedance::from_matrix(std::move(t.z_primary)),
                               CompoundBranchImpedance::from_matrix(std::move(t.z_secondary)),
                               CompoundShuntAdmittance::from_matrix(std::move(t.y_center))});
  }
  return std::move(builder).build();
}

GridModel load_grid_file(const std::filesystem::path& path) {
  return parse_grid_file(read_text_file(path));
}

std::string emit_grid_file(const GridModel& model) {
  json doc;
  doc["phases"] = model.phase_count();
  json nodes = json::array();
  for (NodeId n = 0; n < model.node_count(); ++n) {
    json jn;
    jn["name"] = model.node_name(n);
    if (model.is_virtual(n)) jn["virtual"] = true;
    const ComplexMatrix& shunt =
        model.shunt_admittances()[static_cast<std::size_t>(n)].matrix();
    if (!shunt.isZero(0.0)) jn["shunt"] = matrix_to_json(shunt);
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);

  json branches = json::array();
  const auto& edges = model.branch_graph().edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    json jb;
    jb["from"] = model.node_name(edges[i].from);
    jb["to"] = model.node_name(edges[i].to);
    jb["impedance"] = matrix_to_json(model.branch_impedances()[i].matrix());
    branches.push_back(std::move(jb));
  }
  doc["branches"] = std::move(branches);
  return doc.dump(2) + "\n";
}

std::string emit_matrix_document(const BlockMatrix& matrix,
                                 const std::vector<std::string>& node_names) {
  if (static_cast<Index>(node_names.size()) != matrix.node_count()) {
    throw Error(ErrorCode::ShapeMismatch, "node name list does not match the matrix");
  }
  json doc;
  doc["kind"] = "admittance_matrix";
  doc["phases"] = matrix.block_size();
  doc["nodes"] = node_names;
  doc["matrix"] = matrix_to_json(matrix.data());
  return doc.dump(2) + "\n";
}

std::string emit_hybrid_document(const HybridMatrix& h,
                                 const std::vector<std::string>& m_names,
                                 const std::vector<std::string>& complement_names) {
  if (m_names.size() != h.m_set.size() || complement_names.size() != h.complement.size()) {
    throw Error(ErrorCode::ShapeMismatch, "node name lists do not match the hybrid blocks");
  }
  json doc;
  doc["kind"] = "hybrid_matrix";
  doc["phases"] = h.block_size;
  doc["m_nodes"] = m_names;
  doc["complement_nodes"] = complement_names;
  doc["h_mm"] = matrix_to_json(h.h_mm);
  doc["h_mmc"] = matrix_to_json(h.h_mmc);
  doc["h_mcm"] = matrix_to_json(h.h_mcm);
  doc["h_mcmc"] = matrix_to_json(h.h_mcmc);
  return doc.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  }
  out << contents;
  if (!out) {
    throw Error(ErrorCode::IoError, "failed while writing '" + path.string() + "'");
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw Error(ErrorCode::IoError, "failed while reading '" + path.string() + "'");
  }
  return buffer.str();
}

}  // namespace polygrid
