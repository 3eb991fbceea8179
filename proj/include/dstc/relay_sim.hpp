#pragma once

// Monte Carlo simulation of the two-phase amplify-and-forward protocol.
//
// Phase 1: relay i receives r_i = sqrt(P1) f_i s + v_i.
// Phase 2: relay i sends t_i = sqrt(P2 / (P1 + 1)) (A_i r_i) or (B_i r_i^*).
// Destination: y = sum_i g_i t_i + w = theta S(X) h + n with
// theta = sqrt(P1 P2 / (P1 + 1)) and h_i = f_i g_i (f_i^* g_i for conjugated columns).
//
// Every trial draws from its own generator seeded by (seed, snr index, trial), so
// results do not depend on the thread count.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "dstc/constellation.hpp"
#include "dstc/decode.hpp"
#include "dstc/representation.hpp"

namespace dstc {

struct SimConfig {
  std::vector<double> snr_db;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double p1_fraction = 0.5;   // P1 = p1_fraction * P, P2 = (1 - p1_fraction) * P
  bool noise = true;          // false: v_i = w = 0
  unsigned threads = 1;
};

struct SnrPoint {
  double snr_db = 0.0;
  std::size_t trials = 0;
  std::size_t symbol_errors = 0;
  std::size_t bit_errors = 0;
  std::size_t codeword_errors = 0;
  std::size_t symbols = 0;   // complex symbols sent
  std::size_t bits = 0;

  double ser() const { return symbols ? static_cast<double>(symbol_errors) / symbols : 0.0; }
  double ber() const { return bits ? static_cast<double>(bit_errors) / bits : 0.0; }
};

struct SimResult {
  std::vector<SnrPoint> points;

  /// snr_db,trials,symbol_errors,bit_errors,ser,ber
  std::string to_csv() const;
  /// Two whitespace separated columns: snr_db and the chosen rate.
  std::string to_gnuplot(bool ber = false) const;
  nlohmann::json to_json() const;
};

/// Everything a simulation needs about the code; the relay matrices may be replaced
/// to model a misconfigured network.
struct SimSetup {
  SymbolicDesign design;
  GroupedWeightSet weights;
  RelayMatrixSet relays;
  Codebook codebook;

  /// Refuses designs that fail the DSTC or cross-group conditions.
  static SimSetup from_design(const SymbolicDesign& design, std::vector<std::vector<std::size_t>> groups,
                              GroupConstellation constellation);
};

struct PowerSplit {
  double p1 = 0.0;
  double p2 = 0.0;
  double theta() const;
  double relay_gain() const;  // sqrt(P2 / (P1 + 1))
};

PowerSplit power_split(double snr_db, double p1_fraction);

/// Destination vector computed relay by relay. `relay_noise` holds v_i as columns.
CVector two_phase_receive(const RelayMatrixSet& relays, const CVector& s, const CVector& f, const CVector& g,
                          const CMatrix& relay_noise, const CVector& w, const PowerSplit& power);

/// h_i = f_i g_i, or f_i^* g_i when relay i conjugates.
CVector effective_channel(const RelayMatrixSet& relays, const CVector& f, const CVector& g);

/// Deterministic per-trial generator.
std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t snr_index, std::size_t trial);

SimResult simulate_two_phase(const SimSetup& setup, const SimConfig& config);

/// Draws h directly and adds white noise of the matching variance; used to cross-check
/// simulate_two_phase.
SimResult equivalent_channel_sim(const SimSetup& setup, const SimConfig& config);

/// Half-width of the normal-approximation 95% interval for the difference of two
/// error rates, treating each trial as one bounded observation.
double rate_difference_bound(double p_a, std::size_t n_a, double p_b, std::size_t n_b);

}  // namespace dstc
