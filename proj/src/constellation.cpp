#include "dstc/constellation.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dstc {

RotationSpec RotationSpec::parse(const std::string& text) {
  if (text == "identity") return {Kind::Identity, {}};
  if (text == "builtin") return {Kind::Builtin, {}};
  if (text.rfind("file:", 0) == 0) return {Kind::File, text.substr(5)};
  if (text.empty()) throw std::invalid_argument("empty rotation spec");
  return {Kind::File, text};
}

std::string RotationSpec::to_string() const {
  switch (kind) {
    case Kind::Identity: return "identity";
    case Kind::Builtin: return "builtin";
    case Kind::File: return "file:" + path;
  }
  return {};
}

namespace {

RMatrix sylvester_hadamard(std::size_t dim) {
  RMatrix h(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) h(r, c) = (std::popcount(r & c) & 1) ? -1.0 : 1.0;
  }
  return h;
}

// Orthogonal DCT-IV; for power-of-two sizes it generates the rotated Z^n lattice
// of the maximal real subfield of Q(zeta_{4n}), which has full diversity.
RMatrix dct_iv(std::size_t dim) {
  RMatrix m(dim, dim);
  const double n = static_cast<double>(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      m(i, j) = std::sqrt(2.0 / n) *
                std::cos(std::numbers::pi * (2.0 * i + 1.0) * (2.0 * j + 1.0) / (4.0 * n));
    }
  }
  return m;
}

}  // namespace

RMatrix builtin_rotation(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("rotation dimension must be a power of two");
  }
  if (dim == 1) return RMatrix::Identity(1, 1);
  if (dim == 2) {
    const double theta = 0.5 * std::atan(2.0);
    RMatrix g(2, 2);
    g << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return g;
  }
  // Commuting unitary weights inside a group diagonalize with the Hadamard
  // characters, so the DCT-IV coordinates are pulled back through H.
  return sylvester_hadamard(dim).transpose() * dct_iv(dim) / std::sqrt(static_cast<double>(dim));
}

double orthogonality_deviation(const RMatrix& g) {
  if (g.rows() != g.cols()) return std::numeric_limits<double>::infinity();
  return (g.transpose() * g - RMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

namespace {

void require_orthogonal(const RMatrix& g) {
  const double deviation = orthogonality_deviation(g);
  if (!(deviation <= 1e-12)) {
    std::ostringstream os;
    os << "rotation is not orthogonal: max |G^T G - I| = " << deviation;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

RMatrix load_rotation_file(const std::string& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read rotation file '" + path + "'");
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw std::runtime_error("rotation file '" + path + "': bad number '" + token + "'");
    }
  }
  if (values.size() != dim * dim) {
    throw std::runtime_error("rotation file '" + path + "' holds " + std::to_string(values.size()) +
                             " values, expected " + std::to_string(dim * dim));
  }
  RMatrix g(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) g(r, c) = values[r * dim + c];
  }
  require_orthogonal(g);
  return g;
}

int gray_encode(int level_index) { return level_index ^ (level_index >> 1); }

int gray_decode(int label) {
  int out = 0;
  for (; label; label >>= 1) out ^= label;
  return out;
}

int GroupConstellation::bits_per_level() const { return std::countr_zero(static_cast<unsigned>(m)); }

std::vector<int> GroupConstellation::level_indices(std::size_t point) const {
  std::vector<int> idx(dim);
  for (std::size_t c = dim; c-- > 0;) {
    idx[c] = static_cast<int>(point % static_cast<std::size_t>(m));
    point /= static_cast<std::size_t>(m);
  }
  return idx;
}

GroupConstellation build_constellation(int m, std::size_t dim, const RMatrix& rotation) {
  if (m < 2 || !std::has_single_bit(static_cast<unsigned>(m))) {
    throw std::invalid_argument("points per real dimension must be a power of two >= 2");
  }
  if (dim == 0 || !std::has_single_bit(dim)) throw std::invalid_argument("group dimension must be a power of two");
  if (static_cast<std::size_t>(rotation.rows()) != dim || static_cast<std::size_t>(rotation.cols()) != dim) {
    throw std::invalid_argument("rotation must be " + std::to_string(dim) + " x " + std::to_string(dim));
  }
  require_orthogonal(rotation);
  const double total = std::pow(static_cast<double>(m), static_cast<double>(dim));
  if (total > 1e7) throw std::invalid_argument("constellation too large");

  GroupConstellation gc;
  gc.m = m;
  gc.dim = dim;
  gc.rotation = rotation;
  // PAM {+-1, +-3, ..} scaled to unit average energy.
  const double norm = std::sqrt((static_cast<double>(m) * m - 1.0) / 3.0);
  for (int l = 0; l < m; ++l) gc.levels.push_back((2.0 * l - (m - 1)) / norm);

  const auto count = static_cast<std::size_t>(total);
  gc.points.reserve(count);
  for (std::size_t p = 0; p < count; ++p) {
    const auto idx = gc.level_indices(p);
    RVector u(dim);
    for (std::size_t c = 0; c < dim; ++c) u(c) = gc.levels[idx[c]];
    gc.points.push_back(rotation * u);
  }
  return gc;
}

GroupConstellation build_constellation(int m, std::size_t dim, const RotationSpec& rotation) {
  switch (rotation.kind) {
    case RotationSpec::Kind::Identity: return build_constellation(m, dim, RMatrix::Identity(dim, dim));
    case RotationSpec::Kind::Builtin: return build_constellation(m, dim, builtin_rotation(dim));
    case RotationSpec::Kind::File: return build_constellation(m, dim, load_rotation_file(rotation.path, dim));
  }
  throw std::invalid_argument("unknown rotation kind");
}

// --- Codebook ---------------------------------------------------------------

Codebook::Codebook(std::vector<std::vector<std::size_t>> groups, std::size_t complex_vars,
                   GroupConstellation constellation)
    : groups_(std::move(groups)), complex_vars_(complex_vars), constellation_(std::move(constellation)) {
  if (groups_.empty()) throw std::invalid_argument("codebook needs at least one group");
  std::vector<int> seen(2 * complex_vars_, 0);
  for (const auto& g : groups_) {
    if (g.size() != constellation_.dim) {
      throw std::invalid_argument("group size " + std::to_string(g.size()) +
                                  " does not match constellation dimension " +
                                  std::to_string(constellation_.dim));
    }
    for (std::size_t x : g) {
      if (x >= seen.size() || seen[x]++) throw std::invalid_argument("groups must partition the real variables");
    }
  }
  for (int s : seen) {
    if (s != 1) throw std::invalid_argument("groups must partition the real variables");
  }
}

std::size_t Codebook::size() const {
  std::size_t total = 1;
  for (std::size_t g = 0; g < group_count(); ++g) {
    if (total > SIZE_MAX / points_per_group()) return SIZE_MAX;
    total *= points_per_group();
  }
  return total;
}

double Codebook::log2_size() const {
  return static_cast<double>(group_count()) * std::log2(static_cast<double>(points_per_group()));
}

std::vector<std::size_t> Codebook::split(std::size_t codeword) const {
  std::vector<std::size_t> points(group_count());
  for (std::size_t g = group_count(); g-- > 0;) {
    points[g] = codeword % points_per_group();
    codeword /= points_per_group();
  }
  return points;
}

std::size_t Codebook::join(std::span<const std::size_t> points) const {
  std::size_t index = 0;
  for (std::size_t p : points) index = index * points_per_group() + p;
  return index;
}

RVector Codebook::real_variables(std::span<const std::size_t> points) const {
  if (points.size() != group_count()) throw std::invalid_argument("one point per group required");
  RVector x = RVector::Zero(2 * complex_vars_);
  for (std::size_t g = 0; g < group_count(); ++g) {
    const RVector& pt = constellation_.points.at(points[g]);
    for (std::size_t c = 0; c < groups_[g].size(); ++c) x(groups_[g][c]) = kRealAmplitude * pt(c);
  }
  return x;
}

CVector Codebook::symbols(std::span<const std::size_t> points) const {
  const RVector x = real_variables(points);
  CVector s(complex_vars_);
  for (std::size_t j = 0; j < complex_vars_; ++j) s(j) = {x(2 * j), x(2 * j + 1)};
  return s;
}

std::vector<std::size_t> Codebook::bits_to_points(std::span<const std::uint8_t> bits) const {
  if (bits.size() != bits_per_codeword()) {
    throw std::invalid_argument("expected " + std::to_string(bits_per_codeword()) + " bits, got " +
                                std::to_string(bits.size()));
  }
  const int per_level = constellation_.bits_per_level();
  const auto m = static_cast<std::size_t>(constellation_.m);
  std::vector<std::size_t> points(group_count());
  std::size_t pos = 0;
  for (std::size_t g = 0; g < group_count(); ++g) {
    std::size_t point = 0;
    for (std::size_t c = 0; c < constellation_.dim; ++c) {
      int label = 0;
      for (int b = 0; b < per_level; ++b) label = (label << 1) | (bits[pos++] & 1);
      point = point * m + static_cast<std::size_t>(gray_decode(label));
    }
    points[g] = point;
  }
  return points;
}

std::vector<std::uint8_t> Codebook::points_to_bits(std::span<const std::size_t> points) const {
  const int per_level = constellation_.bits_per_level();
  std::vector<std::uint8_t> bits;
  bits.reserve(bits_per_codeword());
  for (std::size_t p : points) {
    for (int level : constellation_.level_indices(p)) {
      const int label = gray_encode(level);
      for (int b = per_level - 1; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((label >> b) & 1));
    }
  }
  return bits;
}

CVector bits_to_symbols(std::span<const std::uint8_t> bits, const Codebook& codebook) {
  return codebook.symbols(codebook.bits_to_points(bits));
}

std::vector<std::uint8_t> symbols_to_bits(const CVector& symbols, const Codebook& codebook) {
  if (static_cast<std::size_t>(symbols.size()) != codebook.complex_vars()) {
    throw std::invalid_argument("symbol vector length must equal K");
  }
  const GroupConstellation& gc = codebook.constellation();
  std::vector<std::size_t> points(codebook.group_count());
  for (std::size_t g = 0; g < codebook.group_count(); ++g) {
    RVector sub(gc.dim);
    for (std::size_t c = 0; c < gc.dim; ++c) {
      const std::size_t x = codebook.groups()[g][c];
      const auto z = symbols(x / 2);
      sub(c) = (x % 2 ? z.imag() : z.real()) / kRealAmplitude;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < gc.size(); ++p) {
      const double d = (gc.points[p] - sub).squaredNorm();
      if (d < best) {
        best = d;
        points[g] = p;
      }
    }
  }
  return codebook.points_to_bits(points);
}

}  // namespace dstc
