#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "geograph/algebra.hpp"
#include "geograph/metrics.hpp"

namespace geograph::spacefile {

/// Input-side failure: malformed JSON, a bad rational, or a violated space
/// invariant.  Messages name the offending field and carry witnesses.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One invariant one-form of the file, entries still unresolved.
struct FormCells {
  std::string name;
  std::vector<std::string> covector;
};

/// A space-specification document.  Every rational-valued cell is kept as
/// written: either a rational literal ("3/2") or the name of a declared
/// parameter, resolved against defaults plus command-line overrides.
struct SpaceFile {
  int schema_version = 1;
  std::string name;
  algebra::LieAlgebraSpec alg;
  std::vector<int> h_indices;
  std::vector<int> m_indices;
  std::vector<std::vector<int>> blocks;
  std::vector<exact::RatMat> block_forms;
  std::map<std::string, Rat> params;  // declared defaults
  std::string family;  // "weighted_squares" | "qpower" | "randers_like"
  std::string q = "3";
  std::vector<std::vector<std::string>> metrics;
  std::vector<std::string> metric_weights;
  std::vector<FormCells> forms;
  std::vector<std::string> form_weights;
  std::vector<std::string> flags;
};

using ParamMap = std::map<std::string, Rat>;

/// "3/2" -> Rat; throws ParseError citing `field` on bad syntax or a zero
/// denominator.
Rat parse_rational(const std::string& text, const std::string& field);

/// True when the cell is a rational literal rather than a parameter name.
bool is_rational_literal(const std::string& text);

/// Declared defaults overlaid with `overrides` (values are rational strings).
/// Unknown keys and unparsable values raise ParseError.
ParamMap resolve_params(const SpaceFile& f,
                        const std::map<std::string, std::string>& overrides);

algebra::Space make_space(const SpaceFile& f);
metrics::BlockForms make_block_forms(const SpaceFile& f);
metrics::NormSpec make_norm(const SpaceFile& f, const ParamMap& values);

/// Parse and fully validate one JSON document.  `source` names the input in
/// error messages.  On return the file builds a valid Space, passes the
/// structural validation battery, and its norm spec passes validate_norm at
/// the default parameter values.
SpaceFile parse_space_text(const std::string& text, const std::string& source);
SpaceFile parse_space_path(const std::string& path);

/// Canonical JSON serialization; parse_space_text(serialize(f)) yields a file
/// that serializes to the same string.
std::string serialize(const SpaceFile& f);

// Built-in catalog ----------------------------------------------------------

std::vector<std::string> catalog_names();
bool catalog_has(const std::string& name);
/// Raw JSON document of a built-in; throws ParseError on unknown names.
const std::string& catalog_text(const std::string& name);
/// One-line summary for listings.
std::string catalog_description(const std::string& name);
/// Parsed and validated built-in.
SpaceFile catalog_file(const std::string& name);

}  // namespace geograph::spacefile
