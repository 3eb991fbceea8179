#pragma once

// Exact verification of the algebraic conditions a design needs for 4-group ML
// decoding and for distributed (relay) use, plus power uniformity and an
// exhaustive or sampled rank-criterion diversity scan.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dstc/constellation.hpp"
#include "dstc/representation.hpp"

namespace dstc {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string witness;   // first counterexample, empty on pass
  double seconds = 0.0;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
  void append(const VerificationReport& other);

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// C_i^H C_j + C_j^H C_i = 0 for every unordered cross-group pair.
VerificationReport check_group_condition(const GroupedWeightSet& w);

/// C^H C = I for every weight matrix.
VerificationReport check_weight_unitarity(const GroupedWeightSet& w);

/// Arranges the weights in the 4-column array (one column per group) and checks:
/// identity head, first-row squares to -I and pairwise anticommutation, first-column
/// squares to +I and commutation with the first row and column, and that each
/// remaining entry equals +- (first-column entry) * (first-row entry).
VerificationReport check_row_column_conditions(const GroupedWeightSet& w);

/// Conjugate linearity per column, K = R, exact unitarity of the relay matrices and
/// that each relay matrix reproduces its design column.
VerificationReport check_dstc_conditions(const SymbolicDesign& design, const RelayMatrixSet& relays);

struct PowerProfile {
  std::vector<std::vector<double>> slot_power;  // [slot][relay] average power
  std::vector<double> relay_papr;               // per relay, peak over mean across slots
  double max_papr = 0.0;
};

/// Every cell holds exactly one variable with unit coefficient and every row and
/// column contains each variable exactly once. `symbol_energy` (default all ones)
/// gives E|z_j|^2 for the power table.
VerificationReport check_power_uniformity(const SymbolicDesign& design, PowerProfile* profile = nullptr,
                                          const std::vector<double>& symbol_energy = {});

struct DiversityOptions {
  std::uint64_t max_pairs = std::uint64_t{1} << 20;
  bool sample_if_too_large = false;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  double relative_threshold = 1e-9;
  unsigned threads = 1;
};

struct DiversityResult {
  bool exhaustive = true;
  std::uint64_t pairs = 0;
  std::size_t min_rank = 0;
  std::size_t full_rank = 0;
  std::size_t witness_a = 0;  // codeword indices attaining min_rank
  std::size_t witness_b = 0;
  double seconds = 0.0;

  bool full_diversity() const { return min_rank == full_rank; }
};

class DiversityCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical rank by singular values above threshold * sigma_max.
std::size_t numerical_rank(const CMatrix& m, double relative_threshold);

/// Minimum rank of S(X) - S(X') over distinct codeword pairs. Throws
/// DiversityCapExceeded when the pair count exceeds the cap and sampling is off.
DiversityResult check_full_diversity(const SymbolicDesign& design, const Codebook& codebook,
                                     const DiversityOptions& options = {});

VerificationReport diversity_report(const DiversityResult& result);

/// All exact checks on a generated design (group, unitarity, row/column, DSTC, power).
VerificationReport verify_design(const SymbolicDesign& design, const GroupedWeightSet& weights);

}  // namespace dstc
