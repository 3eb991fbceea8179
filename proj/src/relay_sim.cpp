#include "dstc/relay_sim.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "dstc/verify.hpp"

namespace dstc {

std::string SimResult::to_csv() const {
  std::ostringstream os;
  os << "snr_db,trials,symbol_errors,bit_errors,ser,ber\n";
  os << std::setprecision(12);
  for (const auto& p : points) {
    os << p.snr_db << ',' << p.trials << ',' << p.symbol_errors << ',' << p.bit_errors << ',' << p.ser() << ','
       << p.ber() << '\n';
  }
  return os.str();
}

std::string SimResult::to_gnuplot(bool ber) const {
  std::ostringstream os;
  os << "# snr_db " << (ber ? "ber" : "ser") << '\n' << std::setprecision(12);
  for (const auto& p : points) os << p.snr_db << ' ' << (ber ? p.ber() : p.ser()) << '\n';
  return os.str();
}

nlohmann::json SimResult::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : points) {
    rows.push_back({{"snr_db", p.snr_db},
                    {"trials", p.trials},
                    {"symbol_errors", p.symbol_errors},
                    {"bit_errors", p.bit_errors},
                    {"codeword_errors", p.codeword_errors},
                    {"ser", p.ser()},
                    {"ber", p.ber()}});
  }
  return {{"points", rows}};
}

SimSetup SimSetup::from_design(const SymbolicDesign& design, std::vector<std::vector<std::size_t>> groups,
                               GroupConstellation constellation) {
  GroupedWeightSet weights = extract_weight_matrices(design, groups);
  RelayMatrixSet relays = extract_relay_matrices(design);
  const auto dstc_report = check_dstc_conditions(design, relays);
  if (!dstc_report.all_passed()) {
    throw UnverifiedDesign("design is not usable by relays: " + dstc_report.to_text());
  }
  Codebook codebook(groups, design.K, std::move(constellation));
  return {design, std::move(weights), std::move(relays), std::move(codebook)};
}

double PowerSplit::theta() const { return std::sqrt(p1 * p2 / (p1 + 1.0)); }
double PowerSplit::relay_gain() const { return std::sqrt(p2 / (p1 + 1.0)); }

PowerSplit power_split(double snr_db, double p1_fraction) {
  if (!(p1_fraction > 0.0 && p1_fraction < 1.0)) throw std::invalid_argument("p1 fraction must lie in (0, 1)");
  const double total = std::pow(10.0, snr_db / 10.0);
  return {p1_fraction * total, (1.0 - p1_fraction) * total};
}

CVector two_phase_receive(const RelayMatrixSet& relays, const CVector& s, const CVector& f, const CVector& g,
                          const CMatrix& relay_noise, const CVector& w, const PowerSplit& power) {
  const auto R = static_cast<Eigen::Index>(relays.relays.size());
  CVector y = w;
  const double sqrt_p1 = std::sqrt(power.p1);
  const double gain = power.relay_gain();
  for (Eigen::Index i = 0; i < R; ++i) {
    const CVector received = sqrt_p1 * f(i) * s + relay_noise.col(i);
    const RelayMatrix& relay = relays.relays[static_cast<std::size_t>(i)];
    const CMatrix m = relay.matrix.to_eigen();
    const CVector sent = gain * (relay.conjugated ? CVector(m * received.conjugate()) : CVector(m * received));
    y += g(i) * sent;
  }
  return y;
}

CVector effective_channel(const RelayMatrixSet& relays, const CVector& f, const CVector& g) {
  CVector h(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    h(i) = (relays.relays[static_cast<std::size_t>(i)].conjugated ? std::conj(f(i)) : f(i)) * g(i);
  }
  return h;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t snr_index, std::size_t trial) {
  // splitmix64 over the (seed, snr, trial) triple
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  const std::uint64_t key = mix(mix(mix(seed) ^ static_cast<std::uint64_t>(snr_index)) ^ static_cast<std::uint64_t>(trial));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  return std::mt19937_64(seq);
}

namespace {

enum class ChannelModel { RelayByRelay, Equivalent };

CVector complex_gaussian(std::mt19937_64& rng, Eigen::Index n, double variance) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  CVector v(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(k) = {re, im};
  }
  return v;
}

struct TrialCounts {
  std::size_t symbol_errors = 0;
  std::size_t bit_errors = 0;
  std::size_t codeword_errors = 0;

  TrialCounts& operator+=(const TrialCounts& o) {
    symbol_errors += o.symbol_errors;
    bit_errors += o.bit_errors;
    codeword_errors += o.codeword_errors;
    return *this;
  }
};

TrialCounts run_trial(const SimSetup& setup, const GroupDecoder& decoder, const PowerSplit& power, bool noise,
                      ChannelModel model, std::mt19937_64& rng) {
  const Codebook& cb = setup.codebook;
  const auto R = static_cast<Eigen::Index>(setup.design.R);

  std::vector<std::uint8_t> bits(cb.bits_per_codeword());
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
  const auto sent_points = cb.bits_to_points(bits);
  const CVector s = cb.symbols(sent_points);

  const CVector f = complex_gaussian(rng, R, 1.0);
  const CVector g = complex_gaussian(rng, R, 1.0);
  const CVector h = effective_channel(setup.relays, f, g);

  EquivalentChannel ch{h, CVector(), power.theta()};
  if (model == ChannelModel::RelayByRelay) {
    CMatrix v = CMatrix::Zero(R, R);
    CVector w = CVector::Zero(R);
    if (noise) {
      for (Eigen::Index i = 0; i < R; ++i) v.col(i) = complex_gaussian(rng, R, 1.0);
      w = complex_gaussian(rng, R, 1.0);
    }
    ch.y = two_phase_receive(setup.relays, s, f, g, v, w, power);
  } else {
    // Unitary relay matrices keep the forwarded relay noise white.
    const double gain = power.relay_gain();
    const double variance = 1.0 + gain * gain * g.squaredNorm();
    const CVector n = noise ? complex_gaussian(rng, R, variance) : CVector(CVector::Zero(R));
    ch.y = ch.theta * evaluate_design(setup.design, s) * h + n;
  }

  const GroupDecodeResult decoded = decoder.decode(ch);
  TrialCounts counts;
  if (decoded.points != sent_points) {
    counts.codeword_errors = 1;
    const RVector x_sent = cb.real_variables(sent_points);
    const RVector x_got = cb.real_variables(decoded.points);
    for (std::size_t j = 0; j < cb.complex_vars(); ++j) {
      if (x_sent(2 * j) != x_got(2 * j) || x_sent(2 * j + 1) != x_got(2 * j + 1)) ++counts.symbol_errors;
    }
    const auto got_bits = cb.points_to_bits(decoded.points);
    for (std::size_t k = 0; k < bits.size(); ++k) counts.bit_errors += bits[k] != got_bits[k];
  }
  return counts;
}

SimResult run_simulation(const SimSetup& setup, const SimConfig& config, ChannelModel model) {
  if (config.trials == 0) throw std::invalid_argument("trials must be >= 1");
  for (double snr : config.snr_db) {
    if (!std::isfinite(snr)) throw std::invalid_argument("SNR grid must be finite");
  }
  // The relay matrices may differ from the design (mutation runs), so the decoder
  // is forced; the weights themselves were verified when the setup was built.
  const GroupDecoder decoder(setup.weights, setup.codebook, /*force=*/true);

  SimResult result;
  for (std::size_t si = 0; si < config.snr_db.size(); ++si) {
    const PowerSplit power = power_split(config.snr_db[si], config.p1_fraction);
    const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials)));
    std::vector<TrialCounts> partial(threads);
    auto worker = [&](unsigned t) {
      for (std::size_t trial = t; trial < config.trials; trial += threads) {
        auto rng = trial_rng(config.seed, si, trial);
        partial[t] += run_trial(setup, decoder, power, config.noise, model, rng);
      }
    };
    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
      for (auto& th : pool) th.join();
    }
    TrialCounts total;
    for (const auto& p : partial) total += p;

    SnrPoint point;
    point.snr_db = config.snr_db[si];
    point.trials = config.trials;
    point.symbol_errors = total.symbol_errors;
    point.bit_errors = total.bit_errors;
    point.codeword_errors = total.codeword_errors;
    point.symbols = config.trials * setup.codebook.complex_vars();
    point.bits = config.trials * setup.codebook.bits_per_codeword();
    result.points.push_back(point);
  }
  return result;
}

}  // namespace

SimResult simulate_two_phase(const SimSetup& setup, const SimConfig& config) {
  return run_simulation(setup, config, ChannelModel::RelayByRelay);
}

SimResult equivalent_channel_sim(const SimSetup& setup, const SimConfig& config) {
  return run_simulation(setup, config, ChannelModel::Equivalent);
}

double rate_difference_bound(double p_a, std::size_t n_a, double p_b, std::size_t n_b) {
  // A per-trial error fraction lies in [0, 1], so its variance is at most p(1 - p).
  const double var = p_a * (1.0 - p_a) / static_cast<double>(n_a) + p_b * (1.0 - p_b) / static_cast<double>(n_b);
  return 1.96 * std::sqrt(var);
}

}  // namespace dstc
