#include "dstc/representation.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace dstc {

std::string to_string(Family f) { return f == Family::A2 ? "A2" : "A3"; }

Family parse_family(const std::string& text) {
  if (text == "A2" || text == "a2") return Family::A2;
  if (text == "A3" || text == "a3") return Family::A3;
  throw std::invalid_argument("unknown family '" + text + "' (expected A2 or A3)");
}

AlgebraSignature signature_for(Family family, std::size_t relays) {
  if (relays == 0 || !std::has_single_bit(relays)) {
    throw std::invalid_argument("R must be a power of two");
  }
  const int log_r = std::countr_zero(relays);
  if (family == Family::A2) {
    if (relays < 2) throw std::invalid_argument("family A2 needs R >= 2");
    return AlgebraSignature(2, log_r - 1);
  }
  if (relays < 4) throw std::invalid_argument("family A3 needs R >= 4");
  return AlgebraSignature(3, log_r - 2);
}

int ComplexBasis::index_of(BasisKey key) const {
  for (std::size_t k = 0; k < elements.size(); ++k) {
    if (elements[k].key() == key) return static_cast<int>(k);
  }
  return -1;
}

namespace {

constexpr std::uint32_t kG1 = 0b001;
constexpr std::uint32_t kG2 = 0b010;
constexpr std::uint32_t kG3 = 0b100;

// Gamma parts of the complex basis, in variable order.
std::vector<std::uint32_t> gamma_parts(Family family) {
  if (family == Family::A2) return {0, kG2};
  return {0, kG2, kG3, kG2 | kG3};
}

}  // namespace

ComplexBasis build_complex_basis(const AlgebraSignature& sig, Family family) {
  if (family == Family::A2 && sig.n != 2) throw std::invalid_argument("family A2 requires n = 2");
  if (family == Family::A3 && sig.n != 3) throw std::invalid_argument("family A3 requires n = 3");

  ComplexBasis basis{sig, family, {}};
  const std::uint32_t delta_count = 1u << sig.a;
  // A2 lists the delta products under 1 and then under gamma_2; A3 keeps the four
  // gamma parts together for every delta product. Both orders reproduce the
  // printed designs.
  if (family == Family::A2) {
    for (std::uint32_t g : gamma_parts(family)) {
      for (std::uint32_t d = 0; d < delta_count; ++d) basis.elements.push_back({g, d, 1});
    }
  } else {
    for (std::uint32_t d = 0; d < delta_count; ++d) {
      for (std::uint32_t g : gamma_parts(family)) basis.elements.push_back({g, d, 1});
    }
  }
  return basis;
}

std::string format_cell(const DesignCell& cell) {
  if (cell.empty()) return "0";
  std::string out = cell.sign < 0 ? "-z" : "z";
  out += std::to_string(cell.var);
  if (cell.conj) out += "*";
  return out;
}

std::string format_design(const SymbolicDesign& design) {
  std::size_t width = 1;
  for (const auto& c : design.cells) width = std::max(width, format_cell(c).size());
  std::ostringstream os;
  for (std::size_t r = 0; r < design.R; ++r) {
    os << "[";
    for (std::size_t c = 0; c < design.R; ++c) {
      os << (c ? "  " : " ") << std::setw(static_cast<int>(width)) << format_cell(design.cell(r, c));
    }
    os << " ]\n";
  }
  return os.str();
}

std::string design_convention(Family family) {
  const std::string common =
      "gamma1 acts as i by right multiplication (x = sum_j b_j z_j); column j of L_x is the "
      "coordinate vector of x*b_j; real variables x_{2j-1}=zjI, x_{2j}=zjQ";
  if (family == Family::A2) {
    return "A2: complex basis {1,g2} x delta products (delta binary counting order, 1-part "
           "first); groups by coset of {1,g1,g2,g2g1} over the delta subgroup; " + common;
  }
  return "A3: complex basis delta products x {1,g2,g3,g2g3} (delta binary counting order, "
         "outer); groups by coset of {1,g1,g2,g3} over the subgroup generated by the deltas "
         "and g1g2g3; " + common;
}

namespace {

// Coordinate of a monomial in the complex basis: m = b_k * unit with unit in {+-1, +-i}.
std::pair<int, GaussInt> complex_coordinate(const ComplexBasis& basis, const SignedMonomial& m) {
  if (m.gamma_mask & kG1) {
    // m = s * g1 * rest = s * (-1)^{|rest|} * rest * g1
    const SignedMonomial rest{m.gamma_mask & ~kG1, m.delta_mask, 1};
    const int k = basis.index_of(rest.key());
    if (k < 0) throw std::logic_error("monomial " + m.to_string() + " not spanned by the basis");
    const int flip = (std::popcount(rest.gamma_mask) & 1) ? -1 : 1;
    return {k, GaussInt(0, m.sign * flip)};
  }
  const int k = basis.index_of(m.key());
  if (k < 0) throw std::logic_error("monomial " + m.to_string() + " not spanned by the basis");
  return {k, GaussInt(m.sign)};
}

}  // namespace

SymbolicDesign left_regular_design(const ComplexBasis& basis) {
  const std::size_t R = basis.size();
  SymbolicDesign design{basis.family, basis.sig, R, R, std::vector<DesignCell>(R * R)};
  const SignedMonomial gamma1 = SignedMonomial::gamma(1);

  for (std::size_t j = 0; j < R; ++j) {
    const SignedMonomial& bj = basis.elements[j];
    // Moving b_j past z_i conjugates it exactly when b_j anticommutes with gamma_1.
    const bool conj = anticommutes(bj, gamma1);
    for (std::size_t i = 0; i < R; ++i) {
      const SignedMonomial product = basis.elements[i] * bj;
      const auto [k, unit] = complex_coordinate(basis, product);
      if (unit.im != 0) throw std::logic_error("basis product left the real span of the basis");
      DesignCell& cell = design.cell(static_cast<std::size_t>(k), j);
      if (!cell.empty()) throw std::logic_error("variable collision in left regular design");
      cell = {static_cast<int>(unit.re), static_cast<int>(i + 1), conj};
    }
  }
  return design;
}

GaussMatrix left_multiplication_matrix(const ComplexBasis& basis, const SignedMonomial& m) {
  const std::size_t R = basis.size();
  GaussMatrix out(R);
  for (std::size_t j = 0; j < R; ++j) {
    const auto [k, unit] = complex_coordinate(basis, m * basis.elements[j]);
    out(static_cast<std::size_t>(k), j) = unit;
  }
  return out;
}

std::string real_label(std::size_t real) {
  return "z" + std::to_string(complex_var_of(real)) + (is_quadrature(real) ? "Q" : "I");
}

std::size_t parse_real_label(const std::string& label) {
  if (label.size() < 3 || label.front() != 'z' || (label.back() != 'I' && label.back() != 'Q')) {
    throw std::invalid_argument("malformed variable label '" + label + "'");
  }
  const std::string digits = label.substr(1, label.size() - 2);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit) || digits.size() > 6) {
    throw std::invalid_argument("malformed variable label '" + label + "'");
  }
  const int var = std::stoi(digits);
  if (var < 1) throw std::invalid_argument("malformed variable label '" + label + "'");
  return real_index(var, label.back() == 'Q');
}

SignedMonomial real_variable_monomial(const ComplexBasis& basis, std::size_t real) {
  const SignedMonomial& bj = basis.elements.at(real / 2);
  return is_quadrature(real) ? bj * SignedMonomial::gamma(1) : bj;
}

VariablePartition partition_variables(const SymbolicDesign& design) {
  const ComplexBasis basis = build_complex_basis(design.sig, design.family);
  const auto g1 = SignedMonomial::gamma(1);
  const auto g2 = SignedMonomial::gamma(2);

  VariablePartition part;
  std::vector<SignedMonomial> generators_extra;
  if (design.family == Family::A2) {
    part.row_transversal = {SignedMonomial::unit(), g1, g2, g2 * g1};
  } else {
    part.row_transversal = {SignedMonomial::unit(), g1, g2, SignedMonomial::gamma(3)};
    generators_extra.push_back(g1 * g2 * SignedMonomial::gamma(3));
  }
  // Column subgroup: delta products (outer, binary order) times the optional g1g2g3.
  for (std::uint32_t d = 0; d < (1u << design.sig.a); ++d) {
    const SignedMonomial delta_part{0, d, 1};
    part.column_subgroup.push_back(delta_part);
    for (const auto& extra : generators_extra) part.column_subgroup.push_back(delta_part * extra);
  }

  const std::size_t per_group = part.column_subgroup.size();
  part.groups.assign(4, std::vector<std::size_t>(per_group, SIZE_MAX));
  part.coset_signs.assign(4, std::vector<int>(per_group, 0));

  const std::size_t real_count = 2 * design.K;
  if (4 * per_group != real_count) throw std::logic_error("coset decomposition size mismatch");
  for (std::size_t x = 0; x < real_count; ++x) {
    const SignedMonomial m = real_variable_monomial(basis, x);
    bool placed = false;
    for (std::size_t t = 0; t < 4 && !placed; ++t) {
      for (std::size_t c = 0; c < per_group && !placed; ++c) {
        const SignedMonomial tc = part.row_transversal[t] * part.column_subgroup[c];
        if (tc.key() != m.key()) continue;
        if (part.groups[t][c] != SIZE_MAX) throw std::logic_error("coset decomposition is not injective");
        part.groups[t][c] = x;
        part.coset_signs[t][c] = tc.sign * m.sign;
        placed = true;
      }
    }
    if (!placed) throw std::logic_error("coset decomposition failed for " + real_label(x));
  }
  return part;
}

std::vector<int> GroupedWeightSet::group_of() const {
  std::vector<int> out(weights.size(), -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t x : groups[g]) {
      if (x < out.size()) out[x] = static_cast<int>(g);
    }
  }
  return out;
}

GaussMatrix weight_matrix(const SymbolicDesign& design, std::size_t real) {
  const int var = complex_var_of(real);
  const bool q = is_quadrature(real);
  GaussMatrix w(design.R);
  for (std::size_t r = 0; r < design.R; ++r) {
    for (std::size_t c = 0; c < design.R; ++c) {
      const DesignCell& cell = design.cell(r, c);
      if (cell.var != var) continue;
      // z = 1 for the in-phase weight, z = i for the quadrature weight (conj gives -i).
      w(r, c) = q ? GaussInt(0, cell.conj ? -cell.sign : cell.sign) : GaussInt(cell.sign);
    }
  }
  return w;
}

GroupedWeightSet extract_weight_matrices(const SymbolicDesign& design,
                                         std::vector<std::vector<std::size_t>> groups) {
  GroupedWeightSet set{design.R, {}, std::move(groups)};
  set.weights.reserve(2 * design.K);
  for (std::size_t x = 0; x < 2 * design.K; ++x) set.weights.push_back(weight_matrix(design, x));
  return set;
}

GroupedWeightSet extract_weight_matrices(const SymbolicDesign& design) {
  return extract_weight_matrices(design, partition_variables(design).groups);
}

RelayMatrixSet extract_relay_matrices(const SymbolicDesign& design) {
  RelayMatrixSet set;
  set.relays.reserve(design.R);
  for (std::size_t c = 0; c < design.R; ++c) {
    RelayMatrix relay{GaussMatrix(design.R), false};
    bool seen = false;
    for (std::size_t r = 0; r < design.R; ++r) {
      const DesignCell& cell = design.cell(r, c);
      if (cell.empty()) continue;
      if (!seen) {
        relay.conjugated = cell.conj;
        seen = true;
      } else if (cell.conj != relay.conjugated) {
        throw std::logic_error("column " + std::to_string(c + 1) +
                               " mixes conjugated and plain variables");
      }
      if (cell.var < 1 || static_cast<std::size_t>(cell.var) > design.K) {
        throw std::logic_error("variable index out of range in column " + std::to_string(c + 1));
      }
      relay.matrix(r, static_cast<std::size_t>(cell.var - 1)) += GaussInt(cell.sign);
    }
    set.relays.push_back(std::move(relay));
  }
  return set;
}

CMatrix evaluate_design(const SymbolicDesign& design, const CVector& symbols) {
  if (static_cast<std::size_t>(symbols.size()) != design.K) {
    throw std::invalid_argument("symbol vector length must equal K");
  }
  CMatrix out = CMatrix::Zero(design.R, design.R);
  for (std::size_t r = 0; r < design.R; ++r) {
    for (std::size_t c = 0; c < design.R; ++c) {
      const DesignCell& cell = design.cell(r, c);
      if (cell.empty()) continue;
      const std::complex<double> z = symbols(cell.var - 1);
      out(r, c) = static_cast<double>(cell.sign) * (cell.conj ? std::conj(z) : z);
    }
  }
  return out;
}

SymbolicDesign generate_design(Family family, std::size_t relays) {
  return left_regular_design(build_complex_basis(signature_for(family, relays), family));
}

}  // namespace dstc
