#include <doctest.h>

#include <random>
#include <stdexcept>
#include <sstream>

#include "dstc/design_io.hpp"
#include "dstc/representation.hpp"

using namespace dstc;

namespace {

using Table = std::vector<std::vector<std::string>>;

void check_cells(const SymbolicDesign& d, const Table& want) {
  REQUIRE(d.R == want.size());
  for (std::size_t r = 0; r < d.R; ++r)
    for (std::size_t c = 0; c < d.R; ++c) {
      INFO("cell (" << r << "," << c << ")");
      CHECK(format_cell(d.cell(r, c)) == want[r][c]);
    }
}

std::vector<std::vector<std::string>> group_labels(const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<std::vector<std::string>> out;
  for (const auto& g : groups) {
    out.emplace_back();
    for (auto x : g) out.back().push_back(real_label(x));
  }
  return out;
}

CVector random_symbols(std::mt19937_64& rng, std::size_t K) {
  std::normal_distribution<double> n(0.0, 1.0);
  CVector s(static_cast<Eigen::Index>(K));
  for (auto& z : s) z = {n(rng), n(rng)};
  return s;
}

const Table kA2_8 = {
    {"z1", "z2", "z3", "z4", "-z5*", "-z6*", "-z7*", "-z8*"},
    {"z2", "z1", "z4", "z3", "-z6*", "-z5*", "-z8*", "-z7*"},
    {"z3", "z4", "z1", "z2", "-z7*", "-z8*", "-z5*", "-z6*"},
    {"z4", "z3", "z2", "z1", "-z8*", "-z7*", "-z6*", "-z5*"},
    {"z5", "z6", "z7", "z8", "z1*", "z2*", "z3*", "z4*"},
    {"z6", "z5", "z8", "z7", "z2*", "z1*", "z4*", "z3*"},
    {"z7", "z8", "z5", "z6", "z3*", "z4*", "z1*", "z2*"},
    {"z8", "z7", "z6", "z5", "z4*", "z3*", "z2*", "z1*"},
};

const Table kA3_4 = {
    {"z1", "-z2*", "-z3*", "-z4"},
    {"z2", "z1*", "-z4*", "z3"},
    {"z3", "z4*", "z1*", "-z2"},
    {"z4", "-z3*", "z2*", "z1"},
};

const Table kA3_8 = {
    {"z1", "-z2*", "-z3*", "-z4", "z5", "-z6*", "-z7*", "-z8"},
    {"z2", "z1*", "-z4*", "z3", "z6", "z5*", "-z8*", "z7"},
    {"z3", "z4*", "z1*", "-z2", "z7", "z8*", "z5*", "-z6"},
    {"z4", "-z3*", "z2*", "z1", "z8", "-z7*", "z6*", "z5"},
    {"z5", "-z6*", "-z7*", "-z8", "z1", "-z2*", "-z3*", "-z4"},
    {"z6", "z5*", "-z8*", "z7", "z2", "z1*", "-z4*", "z3"},
    {"z7", "z8*", "z5*", "-z6", "z3", "z4*", "z1*", "-z2"},
    {"z8", "-z7*", "z6*", "z5", "z4", "-z3*", "z2*", "z1"},
};

const std::vector<std::pair<Family, std::size_t>> kAllDesigns = {
    {Family::A2, 2}, {Family::A2, 4}, {Family::A2, 8}, {Family::A2, 16},
    {Family::A3, 4}, {Family::A3, 8}, {Family::A3, 16}};

}  // namespace

TEST_CASE("printed designs") {
  check_cells(generate_design(Family::A2, 8), kA2_8);
  check_cells(generate_design(Family::A3, 4), kA3_4);
  check_cells(generate_design(Family::A3, 8), kA3_8);
}

TEST_CASE("A2 with two relays is Alamouti") {
  check_cells(generate_design(Family::A2, 2), {{"z1", "-z2*"}, {"z2", "z1*"}});
  const auto relays = extract_relay_matrices(generate_design(Family::A2, 2));
  REQUIRE(relays.relays.size() == 2);
  CHECK_FALSE(relays.relays[0].conjugated);
  CHECK(relays.relays[0].matrix.is_identity());
  CHECK(relays.relays[1].conjugated);
  GaussMatrix b(2);
  b(0, 1) = -1;
  b(1, 0) = 1;
  CHECK(relays.relays[1].matrix == b);
  CHECK(b.is_unitary());
}

TEST_CASE("variable groups") {
  const auto p = partition_variables(generate_design(Family::A3, 8));
  const std::vector<std::vector<std::string>> want = {
      {"z1I", "z4Q", "z5I", "z8Q"},
      {"z1Q", "z4I", "z5Q", "z8I"},
      {"z2I", "z3Q", "z6I", "z7Q"},
      {"z3I", "z2Q", "z7I", "z6Q"},
  };
  CHECK(group_labels(p.groups) == want);

  const auto q = partition_variables(generate_design(Family::A2, 8));
  CHECK(group_labels(q.groups) == std::vector<std::vector<std::string>>{
                                      {"z1I", "z2I", "z3I", "z4I"},
                                      {"z1Q", "z2Q", "z3Q", "z4Q"},
                                      {"z5I", "z6I", "z7I", "z8I"},
                                      {"z5Q", "z6Q", "z7Q", "z8Q"}});

  for (auto [f, R] : kAllDesigns) {
    const auto part = partition_variables(generate_design(f, R));
    REQUIRE(part.groups.size() == 4);
    std::vector<int> seen(2 * R, 0);
    for (const auto& g : part.groups) {
      CHECK(g.size() == 2 * R / 4);
      for (auto x : g) ++seen[x];
    }
    for (int s : seen) CHECK(s == 1);
  }
}

TEST_CASE("weight matrices") {
  const auto a3 = generate_design(Family::A3, 4);
  const GaussMatrix z4i = weight_matrix(a3, real_index(4, false));
  CHECK(z4i(0, 0) == GaussInt(0));
  CHECK(z4i(0, 3) == GaussInt(-1));
  CHECK(weight_matrix(a3, 0).is_identity());

  const auto a2 = generate_design(Family::A2, 8);
  const GaussMatrix z1q = weight_matrix(a2, real_index(1, true));
  for (std::size_t k = 0; k < 8; ++k) {
    for (std::size_t c = 0; c < 8; ++c) {
      const GaussInt want = k != c ? GaussInt(0) : (k < 4 ? kImagUnit : -kImagUnit);
      CHECK(z1q(k, c) == want);
    }
  }
}

TEST_CASE("weights equal the representation of the variable's monomial") {
  for (auto [f, R] : kAllDesigns) {
    const auto sig = signature_for(f, R);
    const auto basis = build_complex_basis(sig, f);
    const auto d = left_regular_design(basis);
    for (std::size_t x = 0; x < 2 * d.K; ++x) {
      INFO(to_string(f) << " R=" << R << " " << real_label(x));
      CHECK(weight_matrix(d, x) == left_multiplication_matrix(basis, real_variable_monomial(basis, x)));
    }
  }
}

TEST_CASE("left multiplication is a homomorphism") {
  for (auto [f, R] : std::vector<std::pair<Family, std::size_t>>{{Family::A2, 8}, {Family::A3, 8}}) {
    const auto sig = signature_for(f, R);
    const auto basis = build_complex_basis(sig, f);
    for (const auto& p : enumerate_r_basis(sig))
      for (const auto& q : enumerate_r_basis(sig))
        CHECK(left_multiplication_matrix(basis, p) * left_multiplication_matrix(basis, q) ==
              left_multiplication_matrix(basis, p * q));
  }
}

TEST_CASE("design equals the weighted sum of real variables") {
  std::mt19937_64 rng(11);
  for (auto [f, R] : kAllDesigns) {
    const auto d = generate_design(f, R);
    const auto w = extract_weight_matrices(d);
    for (int t = 0; t < 10; ++t) {
      const CVector s = random_symbols(rng, d.K);
      CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(R), static_cast<Eigen::Index>(R));
      for (std::size_t j = 0; j < d.K; ++j) {
        const auto z = s(static_cast<Eigen::Index>(j));
        sum += z.real() * w.weights[2 * j].to_eigen() + z.imag() * w.weights[2 * j + 1].to_eigen();
      }
      CHECK((sum - evaluate_design(d, s)).norm() < 1e-12);
    }
  }
}

TEST_CASE("relay matrices rebuild each column") {
  std::mt19937_64 rng(5);
  for (auto [f, R] : kAllDesigns) {
    const auto d = generate_design(f, R);
    const auto relays = extract_relay_matrices(d);
    const auto sig = signature_for(f, R);
    const auto basis = build_complex_basis(sig, f);
    CHECK(d.K == R);
    for (std::size_t c = 0; c < R; ++c) {
      CHECK(relays.relays[c].matrix.is_unitary());
      CHECK(relays.relays[c].conjugated == anticommutes(basis.elements[c], SignedMonomial::gamma(1)));
    }
    for (int t = 0; t < 100; ++t) {
      const CVector s = random_symbols(rng, d.K);
      const CMatrix S = evaluate_design(d, s);
      for (std::size_t c = 0; c < R; ++c) {
        const auto& rm = relays.relays[c];
        const CVector col = rm.matrix.to_eigen() * (rm.conjugated ? CVector(s.conjugate()) : s);
        CHECK((col - S.col(static_cast<Eigen::Index>(c))).norm() < 1e-12);
      }
    }
  }
  const auto a2 = extract_relay_matrices(generate_design(Family::A2, 8));
  for (std::size_t c = 0; c < 8; ++c) CHECK(a2.relays[c].conjugated == (c >= 4));
}

TEST_CASE("invalid relay counts") {
  CHECK_THROWS_AS(signature_for(Family::A2, 3), std::invalid_argument);
  CHECK_THROWS_AS(signature_for(Family::A3, 2), std::invalid_argument);
  CHECK_THROWS_AS(signature_for(Family::A2, 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("A4"), std::invalid_argument);
}

TEST_CASE("mixed columns are rejected") {
  auto d = generate_design(Family::A2, 4);
  d.cell(0, 0).conj = !d.cell(0, 0).conj;
  CHECK_THROWS_AS(extract_relay_matrices(d), std::logic_error);
}

TEST_CASE("real labels") {
  CHECK(real_label(0) == "z1I");
  CHECK(real_label(5) == "z3Q");
  CHECK(parse_real_label("z3Q") == 5);
  CHECK(parse_real_label("z12I") == 22);
  for (auto bad : {"z0I", "3Q", "z3", "z3X", "zQ", ""}) CHECK_THROWS_AS(parse_real_label(bad), std::invalid_argument);
}

TEST_CASE("design file round trip") {
  for (auto [f, R] : kAllDesigns) {
    const auto doc = make_design_document(generate_design(f, R));
    const std::string text = serialize_design(doc);
    const auto back = parse_design(text);
    CHECK(back.design == doc.design);
    CHECK(back.groups == doc.groups);
    CHECK(serialize_design(back) == text);
  }
}

TEST_CASE("malformed design files") {
  const std::string text = serialize_design(make_design_document(generate_design(Family::A2, 4)));
  CHECK_THROWS_AS(parse_design(text.substr(0, text.size() / 2)), DesignFormatError);
  CHECK_THROWS_AS(parse_design("[]"), DesignFormatError);
  CHECK_THROWS_AS(parse_design("{}"), DesignFormatError);

  auto j = nlohmann::json::parse(text);
  j["cells"][0][0]["sign"] = 3;
  CHECK_THROWS_AS(design_from_json(j), DesignFormatError);

  j = nlohmann::json::parse(text);
  j["cells"][1][2]["var"] = 99;
  CHECK_THROWS_AS(design_from_json(j), DesignFormatError);

  j = nlohmann::json::parse(text);
  j["cells"][1].erase(0);
  CHECK_THROWS_AS(design_from_json(j), DesignFormatError);

  j = nlohmann::json::parse(text);
  j["groups"][0][0] = "z9I";
  CHECK_THROWS_AS(design_from_json(j), DesignFormatError);

  CHECK_THROWS_AS(load_design("/nonexistent/design.json"), DesignFormatError);
}
