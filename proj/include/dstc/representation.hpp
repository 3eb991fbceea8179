#pragma once

// Left regular representation of A_2^L and A_3^L over C.
//
// gamma_1 plays the role of i and acts on the right: the coordinate z_j of x is
// the complex number sitting to the right of basis element b_j, x = sum_j b_j z_j.
// Column j of the design L_x is the coordinate vector of x * b_j.

#include <string>
#include <vector>

#include "dstc/clifford.hpp"
#include "dstc/gaussian.hpp"

namespace dstc {

enum class Family { A2, A3 };

std::string to_string(Family f);
Family parse_family(const std::string& text);

/// Signature that yields an R x R design for the family. Throws std::invalid_argument
/// for non-powers of two and for R below the family minimum (A2: 2, A3: 4).
AlgebraSignature signature_for(Family family, std::size_t relays);

struct ComplexBasis {
  AlgebraSignature sig;
  Family family = Family::A2;
  std::vector<SignedMonomial> elements;

  std::size_t size() const { return elements.size(); }
  /// Position of the basis element with this key, or -1.
  int index_of(BasisKey key) const;
};

ComplexBasis build_complex_basis(const AlgebraSignature& sig, Family family);

struct DesignCell {
  int sign = 0;     // +1 / -1, 0 for an empty cell
  int var = 0;      // 1-based complex variable index, 0 for an empty cell
  bool conj = false;

  bool empty() const { return var == 0; }
  friend bool operator==(const DesignCell&, const DesignCell&) = default;
};

struct SymbolicDesign {
  Family family = Family::A2;
  AlgebraSignature sig;
  std::size_t R = 0;
  std::size_t K = 0;
  std::vector<DesignCell> cells;  // row-major R x R

  DesignCell& cell(std::size_t r, std::size_t c) { return cells[r * R + c]; }
  const DesignCell& cell(std::size_t r, std::size_t c) const { return cells[r * R + c]; }

  friend bool operator==(const SymbolicDesign&, const SymbolicDesign&) = default;
};

/// Cells formatted like "-z5*"; empty cells print as "0".
std::string format_cell(const DesignCell& cell);
std::string format_design(const SymbolicDesign& design);

/// Documented basis and variable conventions recorded in the design file.
std::string design_convention(Family family);

SymbolicDesign left_regular_design(const ComplexBasis& basis);

/// Matrix of y -> m * y in the complex basis. Exact.
GaussMatrix left_multiplication_matrix(const ComplexBasis& basis, const SignedMonomial& m);

// Real variables: x_{2j-1} = z_jI and x_{2j} = z_jQ, stored 0-based as 2(j-1) and 2(j-1)+1.
inline std::size_t real_index(int var, bool quadrature) {
  return 2 * static_cast<std::size_t>(var - 1) + (quadrature ? 1 : 0);
}
inline int complex_var_of(std::size_t real) { return static_cast<int>(real / 2) + 1; }
inline bool is_quadrature(std::size_t real) { return real % 2 == 1; }
std::string real_label(std::size_t real);
/// Inverse of real_label; throws std::invalid_argument on malformed labels.
std::size_t parse_real_label(const std::string& label);

/// The algebra monomial carrying real variable `real`: b_j for z_jI and b_j*gamma_1 for z_jQ.
SignedMonomial real_variable_monomial(const ComplexBasis& basis, std::size_t real);

struct VariablePartition {
  std::vector<std::vector<std::size_t>> groups;      // real variable indices
  std::vector<SignedMonomial> row_transversal;       // one per group
  std::vector<SignedMonomial> column_subgroup;       // one per position in a group
  std::vector<std::vector<int>> coset_signs;         // monomial(x) = sign * row * column
};

VariablePartition partition_variables(const SymbolicDesign& design);

struct GroupedWeightSet {
  std::size_t R = 0;
  std::vector<GaussMatrix> weights;               // indexed by real variable
  std::vector<std::vector<std::size_t>> groups;   // partition of the real variables

  std::size_t variable_count() const { return weights.size(); }
  /// Group of every real variable; -1 if not assigned.
  std::vector<int> group_of() const;
};

/// Weight matrix of one real variable, read off the symbolic design.
GaussMatrix weight_matrix(const SymbolicDesign& design, std::size_t real);
GroupedWeightSet extract_weight_matrices(const SymbolicDesign& design);
GroupedWeightSet extract_weight_matrices(const SymbolicDesign& design,
                                         std::vector<std::vector<std::size_t>> groups);

struct RelayMatrix {
  GaussMatrix matrix;     // A_i if !conjugated, else B_i
  bool conjugated = false;
};

struct RelayMatrixSet {
  std::vector<RelayMatrix> relays;
};

/// Throws std::logic_error if a column mixes conjugated and plain variables.
RelayMatrixSet extract_relay_matrices(const SymbolicDesign& design);

/// Numeric S(X) for the complex symbol vector s = (z_1..z_K).
CMatrix evaluate_design(const SymbolicDesign& design, const CVector& symbols);

/// Generate the design for a family and relay count in one step.
SymbolicDesign generate_design(Family family, std::size_t relays);

}  // namespace dstc
