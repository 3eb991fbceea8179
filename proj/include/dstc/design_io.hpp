#pragma once

// Design file: a JSON document with `family`, `n`, `a`, `R`,
// `cells[r][c] = {sign, var, conj}`, `groups` (four lists of labels such as "z3Q")
// and `convention`. Serialization is canonical (sorted keys, two-space indent), so
// write(parse(text)) == text for every file this module writes.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dstc/representation.hpp"

namespace dstc {

class DesignFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DesignDocument {
  SymbolicDesign design;
  std::vector<std::vector<std::size_t>> groups;
  std::string convention;
};

DesignDocument make_design_document(const SymbolicDesign& design);

nlohmann::json design_to_json(const DesignDocument& doc);
std::string serialize_design(const DesignDocument& doc);

/// Throws DesignFormatError on malformed JSON or inconsistent fields.
DesignDocument design_from_json(const nlohmann::json& j);
DesignDocument parse_design(const std::string& text);

DesignDocument load_design(const std::string& path);
void save_design(const DesignDocument& doc, const std::string& path);

}  // namespace dstc
