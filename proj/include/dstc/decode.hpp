#pragma once

// Maximum-likelihood decoding at the destination for Y = theta * S(X) * h + N
// with white noise. The joint decoder scans the whole codebook; the group decoder
// splits the metric into one closest-point problem per variable group and solves
// each with a Schnorr-Euchner sphere decoder.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dstc/constellation.hpp"
#include "dstc/representation.hpp"

namespace dstc {

struct EquivalentChannel {
  CVector h;           // effective channel, length R
  CVector y;           // received vector, length R
  double theta = 1.0;  // power normalization
};

/// [Re v; Im v]
RVector stack_real(const CVector& v);

/// Column c of generator k is theta * stack_real(C_x h) for the c-th variable x of group k.
std::vector<RMatrix> build_group_generators(const GroupedWeightSet& w, const CVector& h, double theta);

/// ||y - theta * S(X) h||^2 evaluated directly from the symbolic design.
double joint_metric(const SymbolicDesign& design, const EquivalentChannel& ch, const CVector& symbols);

/// The X-independent term c(Y) in ||Y - S(X)H||^2 = sum_k m_k(X_k) + c(Y) for g groups.
double decomposition_constant(const EquivalentChannel& ch, std::size_t groups);

struct SphereOptions {
  double rank_tolerance = 1e-12;     // relative, on |R_kk|
  bool check_exhaustive = false;     // test mode: compare every call against a full scan
};

struct SphereResult {
  std::size_t index = 0;     // constellation point index
  double metric = 0.0;       // ||y - G * amplitude * point||^2
  std::size_t leaves = 0;    // distinct points whose metric was evaluated
  bool fallback = false;     // rank-deficient generator, exhaustive scan used
};

class SphereMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Exact closest point to y among {G * amplitude * p : p in constellation}; ties go to
/// the smallest point index.
SphereResult sphere_decode(const RMatrix& generator, const RVector& y, const GroupConstellation& gc,
                           double amplitude = 1.0, const SphereOptions& options = {});
SphereResult exhaustive_decode(const RMatrix& generator, const RVector& y, const GroupConstellation& gc,
                               double amplitude = 1.0);

class CodebookTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnverifiedDesign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JointDecodeResult {
  std::size_t codeword = 0;
  double metric = 0.0;
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kJointCodebookGuard = std::size_t{1} << 20;

/// Brute force over the whole codebook. Ties go to the smallest codeword index.
class JointDecoder {
 public:
  JointDecoder(const SymbolicDesign& design, const Codebook& codebook,
               std::size_t guard = kJointCodebookGuard);

  JointDecodeResult decode(const EquivalentChannel& ch) const;
  std::size_t size() const { return words_.size(); }

 private:
  const SymbolicDesign* design_;
  std::vector<CVector> words_;
};

JointDecodeResult joint_ml_decode(const SymbolicDesign& design, const Codebook& codebook,
                                  const EquivalentChannel& ch);

struct GroupDecodeResult {
  std::size_t codeword = 0;
  std::vector<std::size_t> points;   // per group
  std::vector<double> metrics;       // per group, ||y - G_k x_k||^2
  std::size_t leaves = 0;            // summed over groups
};

class GroupDecoder {
 public:
  /// Refuses (UnverifiedDesign) when the cross-group condition fails, unless forced.
  GroupDecoder(GroupedWeightSet weights, const Codebook& codebook, bool force = false,
               SphereOptions options = {});

  GroupDecodeResult decode(const EquivalentChannel& ch) const;

  const GroupedWeightSet& weights() const { return weights_; }
  std::size_t search_dimension() const;   // real dimension of one group search
  std::size_t joint_dimension() const;    // 2K

 private:
  GroupedWeightSet weights_;
  const Codebook* codebook_;
  SphereOptions options_;
};

GroupDecodeResult group_ml_decode(const GroupedWeightSet& weights, const Codebook& codebook,
                                  const EquivalentChannel& ch);

}  // namespace dstc
