#include "dstc/clifford.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace dstc {

AlgebraSignature::AlgebraSignature(int n_gammas, int n_deltas) : n(n_gammas), a(n_deltas) {
  if (n < 1 || a < 0 || n + a > 30) {
    throw std::invalid_argument("algebra signature needs n >= 1, a >= 0, n + a <= 30");
  }
}

std::string SignedMonomial::to_string() const {
  std::string out = sign < 0 ? "-" : "";
  if (is_unit()) return out + "1";
  for (int k = 0; k < 32; ++k) {
    if (gamma_mask & (1u << k)) out += "g" + std::to_string(k + 1);
  }
  for (int k = 0; k < 32; ++k) {
    if (delta_mask & (1u << k)) out += "d" + std::to_string(k + 1);
  }
  return out;
}

int canonical_product_sign(std::uint32_t lhs_gamma, std::uint32_t rhs_gamma) {
  // Moving gamma_j of the right factor past every larger gamma of the left factor
  // costs one transposition each.
  int transpositions = 0;
  for (std::uint32_t rest = rhs_gamma; rest != 0; rest &= rest - 1) {
    const std::uint32_t bit = rest & (~rest + 1);
    const std::uint32_t larger = ~((bit << 1) - 1);
    transpositions += std::popcount(lhs_gamma & larger);
  }
  transpositions += std::popcount(lhs_gamma & rhs_gamma);  // gamma_k^2 = -1
  return (transpositions & 1) ? -1 : 1;
}

namespace {

int default_sign(const SignedMonomial& lhs, const SignedMonomial& rhs) {
  return lhs.sign * rhs.sign * canonical_product_sign(lhs.gamma_mask, rhs.gamma_mask);
}

RelationCheck named_check(std::string name) {
  RelationCheck c;
  c.name = std::move(name);
  return c;
}

std::uint32_t full_mask(int bits) { return bits >= 32 ? ~0u : ((1u << bits) - 1); }

}  // namespace

void require_in_signature(const SignedMonomial& m, const AlgebraSignature& sig) {
  if ((m.gamma_mask & ~full_mask(sig.n)) || (m.delta_mask & ~full_mask(sig.a))) {
    throw std::invalid_argument("monomial " + m.to_string() + " outside signature (n=" +
                                std::to_string(sig.n) + ", a=" + std::to_string(sig.a) + ")");
  }
  if (m.sign != 1 && m.sign != -1) throw std::invalid_argument("monomial sign must be +1 or -1");
}

SignedMonomial monomial_mul(const SignedMonomial& lhs, const SignedMonomial& rhs) {
  return {lhs.gamma_mask ^ rhs.gamma_mask, lhs.delta_mask ^ rhs.delta_mask, default_sign(lhs, rhs)};
}

SignedMonomial monomial_mul(const SignedMonomial& lhs, const SignedMonomial& rhs,
                            const AlgebraSignature& sig) {
  require_in_signature(lhs, sig);
  require_in_signature(rhs, sig);
  return monomial_mul(lhs, rhs);
}

SignedMonomial monomial_mul(const SignedMonomial& lhs, const SignedMonomial& rhs,
                            const SignRule& rule) {
  return {lhs.gamma_mask ^ rhs.gamma_mask, lhs.delta_mask ^ rhs.delta_mask, rule(lhs, rhs)};
}

bool commutes(const SignedMonomial& p, const SignedMonomial& q) { return p * q == q * p; }

bool anticommutes(const SignedMonomial& p, const SignedMonomial& q) {
  return p * q == (q * p).negated();
}

std::vector<SignedMonomial> enumerate_r_basis(const AlgebraSignature& sig) {
  std::vector<SignedMonomial> basis;
  basis.reserve(sig.real_dimension());
  for (std::uint32_t d = 0; d < (1u << sig.a); ++d) {
    for (std::uint32_t g = 0; g < (1u << sig.n); ++g) basis.push_back({g, d, 1});
  }
  return basis;
}

// --- AlgebraElement ---------------------------------------------------------

AlgebraElement::AlgebraElement(AlgebraSignature sig, const SignedMonomial& m, double coefficient)
    : sig_(sig) {
  require_in_signature(m, sig_);
  add_term(m.key(), m.sign * coefficient);
}

AlgebraElement AlgebraElement::scalar(AlgebraSignature sig, double value) {
  return AlgebraElement(sig, SignedMonomial::unit(), value);
}

double AlgebraElement::coefficient(BasisKey key) const {
  auto it = coefficients_.find(key);
  return it == coefficients_.end() ? 0.0 : it->second;
}

void AlgebraElement::add_term(BasisKey key, double value) {
  if (value == 0.0) return;
  auto [it, inserted] = coefficients_.try_emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0.0) coefficients_.erase(it);
  }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  if (!(sig_ == other.sig_)) throw std::invalid_argument("algebra signature mismatch");
  for (const auto& [key, value] : other.coefficients_) add_term(key, value);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  if (!(sig_ == other.sig_)) throw std::invalid_argument("algebra signature mismatch");
  for (const auto& [key, value] : other.coefficients_) add_term(key, -value);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(double scale) {
  if (scale == 0.0) {
    coefficients_.clear();
    return *this;
  }
  for (auto& [key, value] : coefficients_) value *= scale;
  return *this;
}

std::string AlgebraElement::to_string() const {
  if (coefficients_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, value] : coefficients_) {
    if (!first) os << (value < 0 ? " - " : " + ");
    else if (value < 0) os << "-";
    first = false;
    const double mag = value < 0 ? -value : value;
    const SignedMonomial m{key.gamma, key.delta, 1};
    if (m.is_unit()) {
      os << mag;
    } else {
      if (mag != 1.0) os << mag << "*";
      os << m.to_string();
    }
  }
  return os.str();
}

AlgebraElement element_mul(const AlgebraElement& x, const AlgebraElement& y) {
  if (!(x.signature() == y.signature())) throw std::invalid_argument("algebra signature mismatch");
  AlgebraElement out(x.signature());
  for (const auto& [kx, cx] : x.coefficients()) {
    for (const auto& [ky, cy] : y.coefficients()) {
      const SignedMonomial p = SignedMonomial{kx.gamma, kx.delta, 1} * SignedMonomial{ky.gamma, ky.delta, 1};
      out.add_term(p.key(), p.sign * cx * cy);
    }
  }
  return out;
}

// --- relation checks --------------------------------------------------------

bool RelationReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const RelationCheck* RelationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

RelationReport check_relations(const AlgebraSignature& sig) {
  return check_relations(sig, default_sign);
}

RelationReport check_relations(const AlgebraSignature& sig, const SignRule& rule) {
  auto mul = [&](const SignedMonomial& p, const SignedMonomial& q) { return monomial_mul(p, q, rule); };
  const SignedMonomial one = SignedMonomial::unit();
  const SignedMonomial minus_one = one.negated();

  RelationReport report{sig, {}};
  auto record = [&](RelationCheck& c, bool ok, const std::string& witness) {
    ++c.cases;
    if (!ok && c.passed) {
      c.passed = false;
      c.witness = witness;
    }
  };

  RelationCheck gamma_square = named_check("gamma_squares_to_minus_one");
  RelationCheck gamma_anti = named_check("gammas_anticommute");
  RelationCheck delta_square = named_check("delta_squares_to_one");
  RelationCheck delta_comm = named_check("deltas_commute");
  RelationCheck delta_central = named_check("deltas_commute_with_gammas");

  for (int k = 1; k <= sig.n; ++k) {
    const auto g = SignedMonomial::gamma(k);
    record(gamma_square, mul(g, g) == minus_one, g.to_string() + "^2");
    for (int j = 1; j <= sig.n; ++j) {
      if (j == k) continue;
      const auto h = SignedMonomial::gamma(j);
      record(gamma_anti, mul(g, h) == mul(h, g).negated(), g.to_string() + "," + h.to_string());
    }
  }
  for (int k = 1; k <= sig.a; ++k) {
    const auto d = SignedMonomial::delta(k);
    record(delta_square, mul(d, d) == one, d.to_string() + "^2");
    for (int j = 1; j <= sig.a; ++j) {
      const auto e = SignedMonomial::delta(j);
      record(delta_comm, mul(d, e) == mul(e, d), d.to_string() + "," + e.to_string());
    }
    for (int j = 1; j <= sig.n; ++j) {
      const auto g = SignedMonomial::gamma(j);
      record(delta_central, mul(d, g) == mul(g, d), d.to_string() + "," + g.to_string());
    }
  }

  const auto basis = enumerate_r_basis(sig);
  RelationCheck assoc = named_check("associativity");
  RelationCheck closure = named_check("signed_basis_closure");
  for (const auto& p : basis) {
    for (const auto& q : basis) {
      const auto pq = mul(p, q);
      record(closure, pq.sign == 1 || pq.sign == -1,
             p.to_string() + "*" + q.to_string());
      for (const auto& r : basis) {
        record(assoc, mul(pq, r) == mul(p, mul(q, r)),
               "(" + p.to_string() + "," + q.to_string() + "," + r.to_string() + ")");
      }
    }
  }

  report.checks = {gamma_square, gamma_anti, delta_square, delta_comm, delta_central, assoc, closure};
  return report;
}

}  // namespace dstc
