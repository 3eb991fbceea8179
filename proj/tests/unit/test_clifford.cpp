#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "dstc/clifford.hpp"

using namespace dstc;

namespace {

// Independent oracle: multiply generator words by bubble-sorting and contracting.
// Generators are numbered gammas 1..n then deltas 101..; returns sign and the reduced word.
struct Word {
  int sign = 1;
  std::vector<int> gens;
};

Word word_of(const SignedMonomial& m) {
  Word w{m.sign, {}};
  for (int k = 0; k < 32; ++k)
    if (m.gamma_mask & (1u << k)) w.gens.push_back(k + 1);
  for (int k = 0; k < 32; ++k)
    if (m.delta_mask & (1u << k)) w.gens.push_back(101 + k);
  return w;
}

bool is_delta(int g) { return g > 100; }

Word reduce(Word w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.gens.size(); ++i) {
      const int a = w.gens[i], b = w.gens[i + 1];
      if (a == b) {
        if (!is_delta(a)) w.sign = -w.sign;
        w.gens.erase(w.gens.begin() + static_cast<long>(i), w.gens.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
      if (a > b) {
        std::swap(w.gens[i], w.gens[i + 1]);
        if (!is_delta(a) && !is_delta(b)) w.sign = -w.sign;
        changed = true;
      }
    }
  }
  return w;
}

SignedMonomial oracle_mul(const SignedMonomial& p, const SignedMonomial& q) {
  Word w = word_of(p);
  Word v = word_of(q);
  w.sign *= v.sign;
  w.gens.insert(w.gens.end(), v.gens.begin(), v.gens.end());
  w = reduce(w);
  SignedMonomial out{0, 0, w.sign};
  for (int g : w.gens) {
    if (is_delta(g)) out.delta_mask |= 1u << (g - 101);
    else out.gamma_mask |= 1u << (g - 1);
  }
  return out;
}

const SignedMonomial one = SignedMonomial::unit();
const SignedMonomial g1 = SignedMonomial::gamma(1);
const SignedMonomial g2 = SignedMonomial::gamma(2);
const SignedMonomial g3 = SignedMonomial::gamma(3);
const SignedMonomial d1 = SignedMonomial::delta(1);
const SignedMonomial d1g1{1, 1, 1};

}  // namespace

TEST_CASE("generator relations") {
  CHECK(g1 * g1 == one.negated());
  CHECK(g2 * g1 == (g1 * g2).negated());
  CHECK(d1 * d1 == one);
  CHECK(d1 * g2 == g2 * d1);
  CHECK((g1 * g2).to_string() == "g1g2");
  CHECK((g2 * g1).to_string() == "-g1g2");
}

TEST_CASE("four-element multiplication table of A_2^2") {
  // rows/cols: 1, g1, d1, d1g1
  const std::vector<SignedMonomial> b = {one, g1, d1, d1g1};
  const std::vector<std::vector<SignedMonomial>> table = {
      {one, g1, d1, d1g1},
      {g1, one.negated(), d1g1, d1.negated()},
      {d1, d1g1, one, g1},
      {d1g1, d1.negated(), g1, one.negated()},
  };
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(b[i] * b[j] == table[i][j]);
}

TEST_CASE("basis enumeration") {
  const auto basis = enumerate_r_basis({2, 0});
  REQUIRE(basis.size() == 4);
  CHECK(basis[0] == one);
  CHECK(basis[1] == g1);
  CHECK(basis[2] == g2);
  CHECK(basis[3] == g1 * g2);
  CHECK(enumerate_r_basis({2, 1}).size() == 8);
  CHECK(enumerate_r_basis({3, 2}).size() == 32);
  CHECK_THROWS_AS(AlgebraSignature(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(monomial_mul(g3, g1, AlgebraSignature(2, 0)), std::invalid_argument);
}

TEST_CASE("monomial products agree with word reduction") {
  for (auto sig : {AlgebraSignature(2, 2), AlgebraSignature(3, 2), AlgebraSignature(4, 1)}) {
    const auto basis = enumerate_r_basis(sig);
    for (const auto& p : basis)
      for (const auto& q : basis) {
        CHECK(p * q == oracle_mul(p, q));
        CHECK(p.negated() * q == oracle_mul(p, q).negated());
      }
  }
}

TEST_CASE("element products") {
  const AlgebraSignature sig(3, 0);
  const AlgebraElement a = AlgebraElement::scalar(sig, 1.0) + AlgebraElement(sig, g1);
  const AlgebraElement b = AlgebraElement::scalar(sig, 1.0) - AlgebraElement(sig, g1);
  CHECK(a * b == AlgebraElement::scalar(sig, 2.0));

  const AlgebraElement g(sig, g1 * g2 * g3);
  CHECK(g * g == AlgebraElement::scalar(sig, 1.0));
  CHECK((a - a).is_zero());
  CHECK((2.0 * a).coefficient(g1.key()) == 2.0);
}

TEST_CASE("random elements of A_2^2 against the table") {
  const AlgebraSignature sig(1, 1);  // spans 1, g1, d1, d1g1
  const std::vector<SignedMonomial> b = {one, g1, d1, d1g1};
  // (x . y) coefficients from the frozen table: table[i][j] = sign * b[idx]
  const int idx[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const int sgn[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, 1, 1}, {1, -1, 1, -1}};
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int t = 0; t < 200; ++t) {
    int x[4], y[4];
    AlgebraElement ex(sig), ey(sig);
    for (int i = 0; i < 4; ++i) {
      x[i] = coef(rng);
      y[i] = coef(rng);
      ex += AlgebraElement(sig, b[i], x[i]);
      ey += AlgebraElement(sig, b[i], y[i]);
    }
    double want[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) want[idx[i][j]] += sgn[i][j] * x[i] * y[j];
    const AlgebraElement got = ex * ey;
    for (int k = 0; k < 4; ++k) CHECK(got.coefficient(b[k].key()) == want[k]);
  }
}

TEST_CASE("relation checks") {
  for (auto sig : {AlgebraSignature(2, 1), AlgebraSignature(3, 2), AlgebraSignature(2, 2)}) {
    const auto report = check_relations(sig);
    CHECK(report.all_passed());
    const auto* assoc = report.find("associativity");
    REQUIRE(assoc != nullptr);
    CHECK(assoc->cases == sig.real_dimension() * sig.real_dimension() * sig.real_dimension());
  }

  SUBCASE("a corrupted sign rule is caught") {
    const SignRule broken = [](const SignedMonomial& l, const SignedMonomial& r) {
      int s = l.sign * r.sign * canonical_product_sign(l.gamma_mask, r.gamma_mask);
      if (l.gamma_mask == 0b01 && r.gamma_mask == 0b10 && l.delta_mask == 0 && r.delta_mask == 0) s = -s;
      return s;
    };
    const auto report = check_relations({2, 1}, broken);
    CHECK_FALSE(report.all_passed());
    CHECK_FALSE(report.find("associativity")->passed);
    CHECK_FALSE(report.find("associativity")->witness.empty());
  }
}

TEST_CASE("signed basis squares to +-1 and g1g2g3 is central in A_3^L") {
  for (auto sig : {AlgebraSignature(3, 0), AlgebraSignature(3, 1), AlgebraSignature(3, 2)}) {
    const auto basis = enumerate_r_basis(sig);
    const SignedMonomial g = g1 * g2 * g3;
    for (const auto& m : basis) {
      const auto sq = m * m;
      CHECK(sq.is_unit());
      CHECK(commutes(g, m));
    }
  }
  CHECK(anticommutes(g1, g2));
  CHECK_FALSE(anticommutes(g1, d1));
}
