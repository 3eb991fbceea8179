#pragma once

// Exact symbolic arithmetic in the extended Clifford algebra A_n^L.
//
// The algebra is generated over the reals by n anticommuting gammas that square
// to -1 and a commuting deltas that square to +1 and are central. Every basis
// monomial is stored as a pair of bit masks with the gammas ordered before the
// deltas, each ascending by index; the sign lives in its own field.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace dstc {

struct AlgebraSignature {
  int n = 1;  // gamma generators
  int a = 0;  // delta generators

  AlgebraSignature() = default;
  AlgebraSignature(int n_gammas, int n_deltas);

  int L() const { return 1 << a; }
  std::size_t real_dimension() const { return std::size_t{1} << (n + a); }

  friend bool operator==(const AlgebraSignature&, const AlgebraSignature&) = default;
};

/// Unsigned basis monomial: bit k-1 of `gamma` is gamma_k, bit k-1 of `delta` is delta_k.
struct BasisKey {
  std::uint32_t gamma = 0;
  std::uint32_t delta = 0;

  friend auto operator<=>(const BasisKey&, const BasisKey&) = default;
};

struct SignedMonomial {
  std::uint32_t gamma_mask = 0;
  std::uint32_t delta_mask = 0;
  int sign = 1;

  static SignedMonomial unit() { return {}; }
  static SignedMonomial gamma(int k) { return {1u << (k - 1), 0, 1}; }
  static SignedMonomial delta(int k) { return {0, 1u << (k - 1), 1}; }

  BasisKey key() const { return {gamma_mask, delta_mask}; }
  bool is_unit() const { return gamma_mask == 0 && delta_mask == 0; }
  SignedMonomial negated() const { return {gamma_mask, delta_mask, -sign}; }

  /// e.g. "-g1g2d1", "1", "-1"
  std::string to_string() const;

  friend bool operator==(const SignedMonomial&, const SignedMonomial&) = default;
};

/// Sign rule used by monomial products. Only test code replaces the default.
using SignRule = std::function<int(const SignedMonomial&, const SignedMonomial&)>;

/// Sign contributed by reordering the gammas of `lhs * rhs` into canonical form
/// and contracting repeated gammas (each contributes -1). Deltas contribute +1.
int canonical_product_sign(std::uint32_t lhs_gamma, std::uint32_t rhs_gamma);

/// Throws std::invalid_argument when a mask uses a generator outside `sig`.
void require_in_signature(const SignedMonomial& m, const AlgebraSignature& sig);

SignedMonomial monomial_mul(const SignedMonomial& lhs, const SignedMonomial& rhs);
SignedMonomial monomial_mul(const SignedMonomial& lhs, const SignedMonomial& rhs,
                            const AlgebraSignature& sig);
SignedMonomial monomial_mul(const SignedMonomial& lhs, const SignedMonomial& rhs,
                            const SignRule& rule);

inline SignedMonomial operator*(const SignedMonomial& lhs, const SignedMonomial& rhs) {
  return monomial_mul(lhs, rhs);
}

bool commutes(const SignedMonomial& p, const SignedMonomial& q);
bool anticommutes(const SignedMonomial& p, const SignedMonomial& q);

/// All 2^(n+a) positive monomials, delta mask in the outer binary-counting loop and
/// gamma mask in the inner one.
std::vector<SignedMonomial> enumerate_r_basis(const AlgebraSignature& sig);

class AlgebraElement {
 public:
  explicit AlgebraElement(AlgebraSignature sig) : sig_(sig) {}
  AlgebraElement(AlgebraSignature sig, const SignedMonomial& m, double coefficient = 1.0);

  static AlgebraElement scalar(AlgebraSignature sig, double value);

  const AlgebraSignature& signature() const { return sig_; }
  const std::map<BasisKey, double>& coefficients() const { return coefficients_; }
  double coefficient(BasisKey key) const;
  bool is_zero() const { return coefficients_.empty(); }

  void add_term(BasisKey key, double value);

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(double scale);

  friend AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs) { return lhs += rhs; }
  friend AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs) { return lhs -= rhs; }
  friend AlgebraElement operator*(AlgebraElement lhs, double s) { return lhs *= s; }
  friend AlgebraElement operator*(double s, AlgebraElement rhs) { return rhs *= s; }
  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

  std::string to_string() const;

 private:
  AlgebraSignature sig_;
  std::map<BasisKey, double> coefficients_;
};

AlgebraElement element_mul(const AlgebraElement& x, const AlgebraElement& y);

inline AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
  return element_mul(x, y);
}

struct RelationCheck {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string witness;
};

struct RelationReport {
  AlgebraSignature sig;
  std::vector<RelationCheck> checks;

  bool all_passed() const;
  const RelationCheck* find(const std::string& name) const;
};

/// Exhaustively checks the five generator relations, associativity over every
/// basis triple and closure of the signed basis under multiplication.
RelationReport check_relations(const AlgebraSignature& sig);
RelationReport check_relations(const AlgebraSignature& sig, const SignRule& rule);

}  // namespace dstc
