#include "dstc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/SVD>

namespace dstc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class CheckRecorder {
 public:
  explicit CheckRecorder(std::string name) : start_(Clock::now()) { result_.name = std::move(name); }

  void record(bool ok, const std::string& witness = {}) {
    ++result_.cases;
    if (!ok && result_.passed) {
      result_.passed = false;
      result_.witness = witness;
    }
  }
  void fail(const std::string& witness) { record(false, witness); }

  CheckResult finish() {
    result_.seconds = seconds_since(start_);
    return result_;
  }

 private:
  CheckResult result_;
  Clock::time_point start_;
};

bool anticommute_adjoint(const GaussMatrix& a, const GaussMatrix& b) {
  return (a.adjoint() * b + b.adjoint() * a).is_zero();
}

std::string pair_witness(std::size_t i, std::size_t j) {
  return "(" + real_label(i) + ", " + real_label(j) + ")";
}

}  // namespace

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void VerificationReport::append(const VerificationReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json entry = {{"name", c.name}, {"passed", c.passed}, {"cases", c.cases}, {"seconds", c.seconds}};
    if (!c.passed) entry["witness"] = c.witness;
    checks_json.push_back(std::move(entry));
  }
  return {{"all_passed", all_passed()}, {"checks", std::move(checks_json)}};
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  for (const auto& c : checks) {
    os << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.name
       << "  " << std::right << std::setw(8) << c.cases << " cases";
    if (!c.passed) os << "  witness: " << c.witness;
    os << "\n";
  }
  os << (all_passed() ? "all checks passed\n" : "verification FAILED\n");
  return os.str();
}

VerificationReport check_group_condition(const GroupedWeightSet& w) {
  CheckRecorder rec("group_condition");
  const auto group = w.group_of();
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    for (std::size_t j = i + 1; j < w.weights.size(); ++j) {
      if (group[i] == group[j]) continue;
      rec.record(anticommute_adjoint(w.weights[i], w.weights[j]), pair_witness(i, j));
    }
  }
  return {{rec.finish()}};
}

VerificationReport check_weight_unitarity(const GroupedWeightSet& w) {
  CheckRecorder rec("weight_unitarity");
  for (std::size_t i = 0; i < w.weights.size(); ++i) rec.record(w.weights[i].is_unitary(), real_label(i));
  return {{rec.finish()}};
}

VerificationReport check_row_column_conditions(const GroupedWeightSet& w) {
  CheckRecorder head("row_column.identity_head");
  CheckRecorder row("row_column.first_row");
  CheckRecorder col("row_column.first_column");
  CheckRecorder product("row_column.product_rule");

  const auto& g = w.groups;
  const bool shaped = g.size() == 4 && !g[0].empty() &&
                      std::all_of(g.begin(), g.end(), [&](const auto& v) { return v.size() == g[0].size(); });
  if (!shaped) {
    const std::string why = "weights must form 4 groups of equal size";
    head.fail(why);
    row.fail(why);
    col.fail(why);
    product.fail(why);
    return {{head.finish(), row.finish(), col.finish(), product.finish()}};
  }

  const std::size_t rows = g[0].size();
  auto at = [&](std::size_t r, std::size_t c) -> const GaussMatrix& { return w.weights.at(g[c][r]); };
  auto label = [&](std::size_t r, std::size_t c) { return real_label(g[c][r]); };
  const GaussMatrix identity = GaussMatrix::identity(w.R);
  const GaussMatrix minus_identity = -identity;

  head.record(at(0, 0).is_identity(), label(0, 0) + " is not I");

  for (std::size_t c = 1; c < 4; ++c) {
    row.record(at(0, c) * at(0, c) == minus_identity, label(0, c) + "^2 != -I");
    for (std::size_t d = c + 1; d < 4; ++d) {
      row.record(at(0, c) * at(0, d) == -(at(0, d) * at(0, c)),
                 label(0, c) + " and " + label(0, d) + " do not anticommute");
    }
  }

  for (std::size_t r = 1; r < rows; ++r) {
    const GaussMatrix& a = at(r, 0);
    col.record(a * a == identity, label(r, 0) + "^2 != I");
    for (std::size_t c = 1; c < 4; ++c) {
      col.record(a * at(0, c) == at(0, c) * a, label(r, 0) + " and " + label(0, c) + " do not commute");
    }
    for (std::size_t s = 1; s < rows; ++s) {
      if (s == r) continue;
      col.record(a * at(s, 0) == at(s, 0) * a, label(r, 0) + " and " + label(s, 0) + " do not commute");
    }
  }

  // A sign flip only relabels x -> -x, so the product rule is checked up to sign.
  for (std::size_t r = 1; r < rows; ++r) {
    for (std::size_t c = 1; c < 4; ++c) {
      const GaussMatrix p = at(r, 0) * at(0, c);
      const GaussMatrix& e = at(r, c);
      product.record(e == p || e == -p, label(r, c) + " != +-" + label(r, 0) + "*" + label(0, c));
    }
  }
  return {{head.finish(), row.finish(), col.finish(), product.finish()}};
}

VerificationReport check_dstc_conditions(const SymbolicDesign& design, const RelayMatrixSet& relays) {
  CheckRecorder conj("dstc.conjugate_linearity");
  CheckRecorder kr("dstc.k_equals_r");
  CheckRecorder unitary("dstc.relay_unitarity");
  CheckRecorder recon("dstc.relay_reconstruction");

  for (std::size_t c = 0; c < design.R; ++c) {
    int mode = -1;
    bool mixed = false;
    for (std::size_t r = 0; r < design.R; ++r) {
      const DesignCell& cell = design.cell(r, c);
      if (cell.empty()) continue;
      const int m = cell.conj ? 1 : 0;
      if (mode < 0) mode = m;
      else if (mode != m) mixed = true;
    }
    conj.record(!mixed, "column " + std::to_string(c + 1) + " mixes z and z*");
  }

  kr.record(design.K == design.R,
            "K = " + std::to_string(design.K) + ", R = " + std::to_string(design.R));

  if (relays.relays.size() != design.R) {
    unitary.fail("expected " + std::to_string(design.R) + " relay matrices");
    recon.fail("relay count mismatch");
  } else {
    for (std::size_t i = 0; i < relays.relays.size(); ++i) {
      const RelayMatrix& rm = relays.relays[i];
      unitary.record(rm.matrix.size() == design.R && rm.matrix.is_unitary(),
                     "relay " + std::to_string(i + 1));
      bool same = rm.matrix.size() == design.R;
      for (std::size_t r = 0; same && r < design.R; ++r) {
        const DesignCell& cell = design.cell(r, i);
        for (std::size_t v = 0; v < design.R; ++v) {
          const GaussInt want = (!cell.empty() && static_cast<std::size_t>(cell.var) == v + 1) ? GaussInt(cell.sign) : GaussInt();
          if (rm.matrix(r, v) != want) same = false;
        }
        if (!cell.empty() && cell.conj != rm.conjugated) same = false;
      }
      recon.record(same, "relay " + std::to_string(i + 1));
    }
  }
  return {{conj.finish(), kr.finish(), unitary.finish(), recon.finish()}};
}

VerificationReport check_power_uniformity(const SymbolicDesign& design, PowerProfile* profile,
                                          const std::vector<double>& symbol_energy) {
  CheckRecorder cells("power.unit_cells");
  CheckRecorder rows("power.row_permutation");
  CheckRecorder cols("power.column_permutation");
  CheckRecorder papr("power.papr_one");

  const std::size_t R = design.R;
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < R; ++c) {
      const DesignCell& cell = design.cell(r, c);
      cells.record(!cell.empty() && (cell.sign == 1 || cell.sign == -1),
                   "cell (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")");
    }
  }
  auto covers_all = [&](auto get) {
    std::vector<int> seen(design.K + 1, 0);
    for (std::size_t k = 0; k < R; ++k) {
      const DesignCell& cell = get(k);
      if (cell.empty() || static_cast<std::size_t>(cell.var) > design.K) return false;
      if (seen[cell.var]++) return false;
    }
    return R == design.K;
  };
  for (std::size_t r = 0; r < R; ++r) {
    rows.record(covers_all([&](std::size_t c) -> const DesignCell& { return design.cell(r, c); }),
                "row " + std::to_string(r + 1));
  }
  for (std::size_t c = 0; c < R; ++c) {
    cols.record(covers_all([&](std::size_t r) -> const DesignCell& { return design.cell(r, c); }),
                "column " + std::to_string(c + 1));
  }

  PowerProfile local;
  PowerProfile& prof = profile ? *profile : local;
  prof.slot_power.assign(R, std::vector<double>(R, 0.0));
  prof.relay_papr.assign(R, 0.0);
  prof.max_papr = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < R; ++c) {
      const DesignCell& cell = design.cell(r, c);
      if (cell.empty()) continue;
      const auto v = static_cast<std::size_t>(cell.var - 1);
      prof.slot_power[r][c] = v < symbol_energy.size() ? symbol_energy[v] : 1.0;
    }
  }
  for (std::size_t c = 0; c < R; ++c) {
    double peak = 0.0, mean = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      peak = std::max(peak, prof.slot_power[r][c]);
      mean += prof.slot_power[r][c] / static_cast<double>(R);
    }
    prof.relay_papr[c] = mean > 0 ? peak / mean : std::numeric_limits<double>::infinity();
    prof.max_papr = std::max(prof.max_papr, prof.relay_papr[c]);
    papr.record(prof.relay_papr[c] == 1.0, "relay " + std::to_string(c + 1));
  }
  return {{cells.finish(), rows.finish(), cols.finish(), papr.finish()}};
}

std::size_t numerical_rank(const CMatrix& m, double relative_threshold) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = relative_threshold * sv(0);
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cut) ++rank;
  }
  return rank;
}

namespace {

struct RankHit {
  std::size_t rank = SIZE_MAX;
  std::size_t a = 0, b = 0;

  void offer(std::size_t r, std::size_t i, std::size_t j) {
    if (r < rank || (r == rank && std::pair(i, j) < std::pair(a, b))) {
      rank = r;
      a = i;
      b = j;
    }
  }
};

}  // namespace

DiversityResult check_full_diversity(const SymbolicDesign& design, const Codebook& codebook,
                                     const DiversityOptions& options) {
  const auto start = Clock::now();
  const std::size_t n = codebook.size();
  if (n < 2 || n == SIZE_MAX || codebook.log2_size() > 40) {
    throw DiversityCapExceeded("codebook too large for a pairwise scan");
  }
  const std::uint64_t total_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  DiversityResult result;
  result.full_rank = design.R;
  result.exhaustive = total_pairs <= options.max_pairs;
  if (!result.exhaustive && !options.sample_if_too_large) {
    throw DiversityCapExceeded(std::to_string(total_pairs) + " codeword pairs exceed the cap of " +
                               std::to_string(options.max_pairs) +
                               "; use sampling mode (probabilistic evidence only)");
  }

  std::vector<CVector> words;
  if (result.exhaustive) {
    words.reserve(n);
    for (std::size_t k = 0; k < n; ++k) words.push_back(codebook.symbols(k));
  }

  const unsigned threads = std::max(1u, options.threads);
  std::vector<RankHit> hits(threads);
  auto worker = [&](unsigned t) {
    RankHit& hit = hits[t];
    if (result.exhaustive) {
      for (std::size_t i = t; i < n; i += threads) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const CMatrix delta = evaluate_design(design, words[i] - words[j]);
          hit.offer(numerical_rank(delta, options.relative_threshold), i, j);
        }
      }
    } else {
      for (std::uint64_t s = t; s < options.samples; s += threads) {
        std::mt19937_64 rng(options.seed ^ (0x9E3779B97F4A7C15ull * (s + 1)));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::size_t i = pick(rng), j = pick(rng);
        while (j == i) j = pick(rng);
        if (j < i) std::swap(i, j);
        const CMatrix delta = evaluate_design(design, codebook.symbols(i) - codebook.symbols(j));
        hit.offer(numerical_rank(delta, options.relative_threshold), i, j);
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  RankHit best;
  for (const auto& h : hits) best.offer(h.rank, h.a, h.b);
  result.pairs = result.exhaustive ? total_pairs : options.samples;
  result.min_rank = best.rank == SIZE_MAX ? 0 : best.rank;
  result.witness_a = best.a;
  result.witness_b = best.b;
  result.seconds = seconds_since(start);
  return result;
}

VerificationReport diversity_report(const DiversityResult& result) {
  CheckResult c;
  c.name = result.exhaustive ? "diversity.exhaustive" : "diversity.sampled";
  c.cases = result.pairs;
  c.passed = result.full_diversity();
  c.seconds = result.seconds;
  if (!c.passed) {
    c.witness = "codewords " + std::to_string(result.witness_a) + " and " + std::to_string(result.witness_b) +
                " differ by rank " + std::to_string(result.min_rank) + " < " + std::to_string(result.full_rank);
  }
  return {{c}};
}

namespace {

// Like extract_relay_matrices but never throws, so mixed columns reach the checks.
RelayMatrixSet lenient_relays(const SymbolicDesign& design) {
  RelayMatrixSet set;
  for (std::size_t c = 0; c < design.R; ++c) {
    RelayMatrix relay{GaussMatrix(design.R), false};
    bool seen = false;
    for (std::size_t r = 0; r < design.R; ++r) {
      const DesignCell& cell = design.cell(r, c);
      if (cell.empty() || static_cast<std::size_t>(cell.var) > design.K) continue;
      if (!seen) relay.conjugated = cell.conj;
      seen = true;
      relay.matrix(r, static_cast<std::size_t>(cell.var - 1)) += GaussInt(cell.sign);
    }
    set.relays.push_back(std::move(relay));
  }
  return set;
}

}  // namespace

VerificationReport verify_design(const SymbolicDesign& design, const GroupedWeightSet& weights) {
  VerificationReport report;
  report.append(check_group_condition(weights));
  report.append(check_weight_unitarity(weights));
  report.append(check_row_column_conditions(weights));
  report.append(check_dstc_conditions(design, lenient_relays(design)));
  report.append(check_power_uniformity(design));
  return report;
}

}  // namespace dstc
