#include "dstc/design_io.hpp"

#include <fstream>
#include <sstream>

namespace dstc {

using nlohmann::json;

DesignDocument make_design_document(const SymbolicDesign& design) {
  return {design, partition_variables(design).groups, design_convention(design.family)};
}

json design_to_json(const DesignDocument& doc) {
  const SymbolicDesign& d = doc.design;
  json cells = json::array();
  for (std::size_t r = 0; r < d.R; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < d.R; ++c) {
      const DesignCell& cell = d.cell(r, c);
      row.push_back({{"sign", cell.sign}, {"var", cell.var}, {"conj", cell.conj}});
    }
    cells.push_back(std::move(row));
  }
  json groups = json::array();
  for (const auto& g : doc.groups) {
    json labels = json::array();
    for (std::size_t x : g) labels.push_back(real_label(x));
    groups.push_back(std::move(labels));
  }
  return {{"family", to_string(d.family)},
          {"n", d.sig.n},
          {"a", d.sig.a},
          {"R", d.R},
          {"cells", std::move(cells)},
          {"groups", std::move(groups)},
          {"convention", doc.convention}};
}

std::string serialize_design(const DesignDocument& doc) { return design_to_json(doc).dump(2) + "\n"; }

namespace {

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw DesignFormatError(std::string("design file lacks field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DesignFormatError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

DesignDocument design_from_json(const json& j) {
  if (!j.is_object()) throw DesignFormatError("design file must hold a JSON object");
  DesignDocument doc;
  SymbolicDesign& d = doc.design;
  try {
    d.family = parse_family(require<std::string>(j, "family"));
    d.sig = AlgebraSignature(require<int>(j, "n"), require<int>(j, "a"));
  } catch (const std::invalid_argument& e) {
    throw DesignFormatError(e.what());
  }
  d.R = require<std::size_t>(j, "R");
  if (d.R == 0 || d.R > 4096) throw DesignFormatError("R out of range");
  d.K = d.R;
  d.cells.assign(d.R * d.R, {});

  const json& cells = j.contains("cells") ? j.at("cells") : throw DesignFormatError("design file lacks field 'cells'");
  if (!cells.is_array() || cells.size() != d.R) throw DesignFormatError("cells must be an R x R array");
  for (std::size_t r = 0; r < d.R; ++r) {
    if (!cells[r].is_array() || cells[r].size() != d.R) throw DesignFormatError("cells must be an R x R array");
    for (std::size_t c = 0; c < d.R; ++c) {
      const json& cj = cells[r][c];
      if (!cj.is_object()) throw DesignFormatError("cell must be an object");
      DesignCell cell{require<int>(cj, "sign"), require<int>(cj, "var"), require<bool>(cj, "conj")};
      if (cell.var < 0 || static_cast<std::size_t>(cell.var) > d.K) throw DesignFormatError("cell var out of range");
      if (cell.var == 0 ? cell.sign != 0 : (cell.sign != 1 && cell.sign != -1)) {
        throw DesignFormatError("cell sign must be +-1 (0 for empty cells)");
      }
      d.cell(r, c) = cell;
    }
  }

  const json& groups = j.contains("groups") ? j.at("groups") : throw DesignFormatError("design file lacks field 'groups'");
  if (!groups.is_array()) throw DesignFormatError("groups must be an array");
  for (const json& g : groups) {
    if (!g.is_array()) throw DesignFormatError("each group must be an array of labels");
    std::vector<std::size_t> members;
    for (const json& label : g) {
      if (!label.is_string()) throw DesignFormatError("group labels must be strings");
      try {
        const std::size_t x = parse_real_label(label.get<std::string>());
        if (x >= 2 * d.K) throw DesignFormatError("group label out of range: " + label.get<std::string>());
        members.push_back(x);
      } catch (const std::invalid_argument& e) {
        throw DesignFormatError(e.what());
      }
    }
    doc.groups.push_back(std::move(members));
  }
  doc.convention = require<std::string>(j, "convention");
  return doc;
}

DesignDocument parse_design(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DesignFormatError(std::string("malformed design JSON: ") + e.what());
  }
  return design_from_json(j);
}

DesignDocument load_design(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DesignFormatError("cannot read design file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_design(buffer.str());
}

void save_design(const DesignDocument& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_design(doc);
}

}  // namespace dstc
