#pragma once

#include <filesystem>
#include <string>

#include "polygrid/hybrid.hpp"
#include "polygrid/reduction.hpp"

namespace polygrid {

/**
 * Grid files are JSON documents:
 *
 *   {
 *     "phases": 3,
 *     "nodes": [ {"name": "a", "shunt": <matrix>, "virtual": false}, ... ],
 *     "branches": [ {"from": "a", "to": "b", "impedance": <matrix>}, ... ],
 *     "tees": [ {"from": "a", "to": "b",
 *                "z_primary": <matrix>, "z_secondary": <matrix>,
 *                "y_center": <matrix>}, ... ]
 *   }
 *
 * Complex scalars are two-element [re, im] arrays; a <matrix> is a row-major
 * nested array of such pairs, |P| x |P|. "shunt", "virtual", and "tees" are
 * optional. T-sections expand at parse time into a virtual center node named
 * "<from>__<to>__T<k>" plus two branches and the center shunt; emitted
 * documents therefore carry the expanded form with "virtual" markers.
 *
 * Malformed documents raise ParseError; structurally sound documents whose
 * parameters violate the conformance requirements raise HypothesisViolation
 * listing every offending node/branch.
 */
GridModel parse_grid_file(const std::string& text);

/// Reads and parses a grid file; unreadable paths raise IoError.
GridModel load_grid_file(const std::filesystem::path& path);

/// Serializes a model in the canonical expanded form. Numeric text uses the
/// shortest decimal that round-trips the double exactly, so parse(emit(m))
/// reproduces m bit for bit and emit is idempotent after one round.
std::string emit_grid_file(const GridModel& model);

/// Matrix document for an assembled or reduced admittance matrix, carrying
/// the node ordering of the rows/columns.
std::string emit_matrix_document(const BlockMatrix& matrix,
                                 const std::vector<std::string>& node_names);

/// Matrix document for the four hybrid blocks with both node orderings.
std::string emit_hybrid_document(const HybridMatrix& h,
                                 const std::vector<std::string>& m_names,
                                 const std::vector<std::string>& complement_names);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace polygrid
