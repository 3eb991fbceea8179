#pragma once

// Rotated PAM lattice constellations, one per variable group, and the mapping
// between information bits and the source vector s = (z_1..z_K).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dstc/gaussian.hpp"

namespace dstc {

/// Each real variable carries point / sqrt(2) so that E|z_j|^2 = 1.
inline const double kRealAmplitude = 0.70710678118654752440;

struct RotationSpec {
  enum class Kind { Identity, Builtin, File };
  Kind kind = Kind::Builtin;
  std::string path;

  /// "identity", "builtin", "file:<path>" or a bare path.
  static RotationSpec parse(const std::string& text);
  std::string to_string() const;
};

/// Planar rotation by atan(2)/2 for dim 2; for dim > 2 a Hadamard transform composed
/// with the DCT-IV rotation. Throws std::invalid_argument unless dim is a power of two.
RMatrix builtin_rotation(std::size_t dim);

/// Whitespace separated, row-major. Throws std::runtime_error if unreadable or not
/// dim x dim, std::invalid_argument (with the maximum deviation) if not orthogonal.
RMatrix load_rotation_file(const std::string& path, std::size_t dim);

/// max |G^T G - I|
double orthogonality_deviation(const RMatrix& g);

struct GroupConstellation {
  int m = 2;                        // points per real dimension
  std::size_t dim = 1;              // real dimensions per group
  RMatrix rotation;                 // dim x dim, orthogonal
  std::vector<double> levels;       // unit-energy PAM levels, ascending
  std::vector<RVector> points;      // rotation * (levels[l_0], .., levels[l_{dim-1}])

  int bits_per_level() const;
  std::size_t bits_per_point() const { return dim * static_cast<std::size_t>(bits_per_level()); }
  std::size_t size() const { return points.size(); }
  /// Level indices of a point, coordinate 0 most significant.
  std::vector<int> level_indices(std::size_t point) const;
};

GroupConstellation build_constellation(int m, std::size_t dim, const RotationSpec& rotation);
GroupConstellation build_constellation(int m, std::size_t dim, const RMatrix& rotation);

int gray_encode(int level_index);
int gray_decode(int label);

/// Maps bits to codewords of a grouped design: each of the groups draws one point
/// from the shared constellation; the point is scattered into the group's real
/// variables (scaled by kRealAmplitude).
class Codebook {
 public:
  Codebook(std::vector<std::vector<std::size_t>> groups, std::size_t complex_vars,
           GroupConstellation constellation);

  const GroupConstellation& constellation() const { return constellation_; }
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }
  std::size_t group_count() const { return groups_.size(); }
  std::size_t complex_vars() const { return complex_vars_; }
  std::size_t points_per_group() const { return constellation_.size(); }
  std::size_t bits_per_codeword() const { return group_count() * constellation_.bits_per_point(); }

  /// Number of codewords; saturates at SIZE_MAX.
  std::size_t size() const;
  /// log2 of the codebook size.
  double log2_size() const;

  /// Codeword index <-> per-group point indices; group 0 is most significant.
  std::vector<std::size_t> split(std::size_t codeword) const;
  std::size_t join(std::span<const std::size_t> points) const;

  RVector real_variables(std::span<const std::size_t> points) const;
  CVector symbols(std::span<const std::size_t> points) const;
  CVector symbols(std::size_t codeword) const { return symbols(split(codeword)); }

  std::vector<std::size_t> bits_to_points(std::span<const std::uint8_t> bits) const;
  std::vector<std::uint8_t> points_to_bits(std::span<const std::size_t> points) const;

 private:
  std::vector<std::vector<std::size_t>> groups_;
  std::size_t complex_vars_;
  GroupConstellation constellation_;
};

CVector bits_to_symbols(std::span<const std::uint8_t> bits, const Codebook& codebook);
std::vector<std::uint8_t> symbols_to_bits(const CVector& symbols, const Codebook& codebook);

}  // namespace dstc
