#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "dstc/constellation.hpp"
#include "dstc/decode.hpp"
#include "dstc/design_io.hpp"
#include "dstc/relay_sim.hpp"
#include "dstc/representation.hpp"
#include "dstc/verify.hpp"

namespace dstc::cli {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

// Errors that map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << content;
}

void write_manifest(const std::string& output, const std::string& command, const json& config, std::uint64_t seed,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                    double seconds) {
  json in = json::object(), out = json::object();
  for (const auto& p : inputs) in[p] = file_digest(p);
  for (const auto& p : outputs) out[p] = file_digest(p);
  const json manifest = {{"command", command},
                         {"config", config},
                         {"tool_version", kToolVersion},
                         {"seed", seed},
                         {"inputs", in},
                         {"outputs", out},
                         {"digest_algorithm", "sha256"},
                         {"timings", {{"wall_seconds", seconds}}}};
  write_file(output + ".manifest.json", manifest.dump(2) + "\n");
}

DesignDocument load_design_or_usage(const std::string& path) {
  try {
    return load_design(path);
  } catch (const DesignFormatError& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> parse_snr_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("bad SNR value '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("SNR list is empty");
  return out;
}

GroupConstellation constellation_for(const DesignDocument& doc, int m, const std::string& rotation) {
  if (doc.groups.empty() || doc.groups[0].empty()) throw UsageError("design file has no variable groups");
  try {
    return build_constellation(m, doc.groups[0].size(), RotationSpec::parse(rotation));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

// --- generate ----------------------------------------------------------------

struct GenerateArgs {
  std::string family = "A2";
  std::size_t relays = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  SymbolicDesign design;
  try {
    design = generate_design(parse_family(a.family), a.relays);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const DesignDocument doc = make_design_document(design);
  out << "family " << to_string(design.family) << "  n=" << design.sig.n << " a=" << design.sig.a
      << "  R=" << design.R << "\n"
      << format_design(design) << "groups:\n";
  for (std::size_t g = 0; g < doc.groups.size(); ++g) {
    out << "  L" << g + 1 << " = {";
    for (std::size_t k = 0; k < doc.groups[g].size(); ++k) out << (k ? ", " : "") << real_label(doc.groups[g][k]);
    out << "}\n";
  }
  if (!a.out.empty()) {
    write_file(a.out, serialize_design(doc));
    write_manifest(a.out, "generate", {{"family", a.family}, {"relays", a.relays}}, 0, {}, {a.out},
                   seconds_since(start));
    out << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

// --- verify ------------------------------------------------------------------

struct VerifyArgs {
  std::string design;
  std::string json_out;
  bool diversity = true;
  int m = 2;
  std::string rotation = "builtin";
  bool exhaustive = false;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const DesignDocument doc = load_design_or_usage(a.design);
  const SymbolicDesign& design = doc.design;
  const GroupedWeightSet weights = extract_weight_matrices(design, doc.groups);

  VerificationReport report = verify_design(design, weights);

  CheckResult partition{"groups.partition"};
  std::unique_ptr<Codebook> codebook;
  partition.cases = 1;
  try {
    codebook = std::make_unique<Codebook>(doc.groups, design.K, constellation_for(doc, a.m, a.rotation));
  } catch (const std::invalid_argument& e) {
    partition.passed = false;
    partition.witness = e.what();
  }
  report.checks.push_back(partition);

  std::optional<DiversityResult> diversity;
  if (a.diversity && codebook) {
    DiversityOptions opt;
    // Exhaustive up to R = 4 by default; larger designs are sampled unless forced.
    opt.sample_if_too_large = !a.exhaustive;
    opt.max_pairs = a.exhaustive ? UINT64_MAX : (design.R <= 4 ? std::uint64_t{1} << 20 : 0);
    opt.samples = a.samples;
    opt.seed = a.seed;
    opt.threads = a.threads;
    try {
      diversity = check_full_diversity(design, *codebook, opt);
      report.append(diversity_report(*diversity));
    } catch (const DiversityCapExceeded& e) {
      CheckResult c{"diversity", false, 0, e.what()};
      report.checks.push_back(c);
    }
  }

  out << "design " << a.design << ": family " << to_string(design.family) << ", R=" << design.R << "\n";
  out << report.to_text();
  if (diversity) {
    out << "diversity: min rank " << diversity->min_rank << " of " << diversity->full_rank << " over "
        << diversity->pairs << (diversity->exhaustive ? " pairs (exhaustive)" : " sampled pairs (probabilistic)")
        << "\n";
  }
  if (!a.json_out.empty()) {
    json j = report.to_json();
    j["design"] = a.design;
    if (diversity) {
      j["diversity"] = {{"exhaustive", diversity->exhaustive},
                        {"pairs", diversity->pairs},
                        {"min_rank", diversity->min_rank},
                        {"full_rank", diversity->full_rank}};
    }
    write_file(a.json_out, j.dump(2) + "\n");
  }
  return report.all_passed() ? kExitOk : kExitCheckFailed;
}

// --- decode-bench ------------------------------------------------------------

struct BenchArgs {
  std::string design;
  int m = 2;
  std::string rotation = "builtin";
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double snr_db = 10.0;
  std::string out;
  bool force = false;
};

int cmd_decode_bench(const BenchArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const DesignDocument doc = load_design_or_usage(a.design);
  const SymbolicDesign& design = doc.design;
  const Codebook codebook(doc.groups, design.K, constellation_for(doc, a.m, a.rotation));
  std::unique_ptr<GroupDecoder> group;
  try {
    group = std::make_unique<GroupDecoder>(extract_weight_matrices(design, doc.groups), codebook, a.force);
  } catch (const UnverifiedDesign& e) {
    out << "refusing to group-decode: " << e.what() << " (use --force)\n";
    return kExitCheckFailed;
  }
  std::unique_ptr<JointDecoder> joint;
  try {
    joint = std::make_unique<JointDecoder>(design, codebook);
  } catch (const CodebookTooLarge&) {
  }

  const RelayMatrixSet relays = extract_relay_matrices(design);
  const PowerSplit power = power_split(a.snr_db, 0.5);
  const double noise_var_scale = power.relay_gain() * power.relay_gain();

  std::size_t agree = 0, hard_mismatch = 0, group_leaves = 0, joint_evals = 0;
  double group_seconds = 0.0, joint_seconds = 0.0, max_residual = 0.0;
  for (std::size_t t = 0; t < a.trials; ++t) {
    auto rng = trial_rng(a.seed, 0, t);
    std::uniform_int_distribution<std::size_t> pick(0, codebook.points_per_group() - 1);
    std::vector<std::size_t> sent(codebook.group_count());
    for (auto& p : sent) p = pick(rng);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    auto cgauss = [&](double var) {
      const double s = std::sqrt(var);
      const double re = normal(rng), im = normal(rng);
      return std::complex<double>(s * re, s * im);
    };
    CVector f(design.R), g(design.R), n(design.R);
    for (std::size_t i = 0; i < design.R; ++i) f(i) = cgauss(1.0);
    for (std::size_t i = 0; i < design.R; ++i) g(i) = cgauss(1.0);
    const double var = 1.0 + noise_var_scale * g.squaredNorm();
    for (std::size_t i = 0; i < design.R; ++i) n(i) = cgauss(var);
    const CVector h = effective_channel(relays, f, g);
    const CVector s = codebook.symbols(sent);
    EquivalentChannel ch{h, power.theta() * evaluate_design(design, s) * h + n, power.theta()};

    auto t0 = Clock::now();
    const GroupDecodeResult gr = group->decode(ch);
    group_seconds += seconds_since(t0);
    group_leaves += gr.leaves;

    if (joint) {
      t0 = Clock::now();
      const JointDecodeResult jr = joint->decode(ch);
      joint_seconds += seconds_since(t0);
      joint_evals += jr.evaluations;
      if (jr.codeword == gr.codeword) {
        ++agree;
      } else {
        const double group_metric = joint_metric(design, ch, codebook.symbols(gr.codeword));
        if (std::abs(group_metric - jr.metric) > 1e-9 * (1.0 + jr.metric)) ++hard_mismatch;
      }
      double sum = decomposition_constant(ch, gr.metrics.size());
      for (double mk : gr.metrics) sum += mk;
      const double direct = joint_metric(design, ch, codebook.symbols(gr.codeword));
      max_residual = std::max(max_residual, std::abs(direct - sum) / std::max(1.0, ch.y.squaredNorm()));
    }
  }

  const std::size_t group_dim = group->search_dimension();
  const std::size_t joint_dim = group->joint_dimension();
  const double trials = static_cast<double>(a.trials);
  std::ostringstream csv;
  csv << std::setprecision(10);
  csv << "family,R,m,trials,group_search_dim,joint_search_dim,dim_ratio,codebook_size,joint_status,agreement,"
         "hard_mismatches,joint_metrics_per_trial,group_leaves_per_trial,group_leaf_bound,evaluation_ratio,"
         "max_decomposition_residual,joint_seconds,group_seconds\n";
  const std::size_t leaf_bound = codebook.group_count() * codebook.points_per_group();
  const double gl = static_cast<double>(group_leaves) / trials;
  csv << to_string(design.family) << ',' << design.R << ',' << a.m << ',' << a.trials << ',' << group_dim << ','
      << joint_dim << ',' << static_cast<double>(joint_dim) / static_cast<double>(group_dim) << ','
      << codebook.size() << ',' << (joint ? "ran" : "skipped") << ',';
  if (joint) {
    const double jm = static_cast<double>(joint_evals) / trials;
    csv << static_cast<double>(agree) / trials << ',' << hard_mismatch << ',' << jm << ',' << gl << ','
        << leaf_bound << ',' << jm / gl << ',' << max_residual << ',' << joint_seconds << ',' << group_seconds
        << '\n';
  } else {
    csv << ",," << codebook.size() << ',' << gl << ',' << leaf_bound << ",,," << ',' << group_seconds << '\n';
  }

  out << "design " << a.design << " (" << to_string(design.family) << ", R=" << design.R << "), m=" << a.m
      << ", " << a.trials << " trials at " << a.snr_db << " dB\n";
  out << "  search dimension: group " << group_dim << " vs joint " << joint_dim << " (ratio "
      << joint_dim / group_dim << ")\n";
  out << "  group leaves/trial: " << gl << " (bound " << leaf_bound << ")\n";
  if (joint) {
    out << "  joint metrics/trial: " << static_cast<double>(joint_evals) / trials << "\n";
    out << "  agreement: " << agree << "/" << a.trials << ", hard mismatches: " << hard_mismatch << "\n";
  } else {
    out << "  joint decoding skipped: " << codebook.size() << " codewords exceed the guard of "
        << kJointCodebookGuard << "\n";
  }
  if (!a.out.empty()) {
    write_file(a.out, csv.str());
    write_manifest(a.out, "decode-bench",
                   {{"design", a.design}, {"m", a.m}, {"rotation", a.rotation}, {"trials", a.trials},
                    {"snr_db", a.snr_db}, {"force", a.force}},
                   a.seed, {a.design}, {a.out}, seconds_since(start));
  } else {
    out << csv.str();
  }
  return (joint && hard_mismatch > 0) ? kExitCheckFailed : kExitOk;
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string design;
  int m = 2;
  std::string rotation = "builtin";
  std::string snr = "0,5,10,15,20";
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double p1_fraction = 0.5;
  unsigned threads = 1;
  std::string out;
  bool json_out = false;
  bool gnuplot = false;
  bool gnuplot_ber = false;
  bool equivalent = false;
  bool no_noise = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const DesignDocument doc = load_design_or_usage(a.design);
  SimConfig cfg;
  cfg.snr_db = parse_snr_list(a.snr);
  if (a.trials == 0) throw UsageError("--trials must be >= 1");
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.p1_fraction = a.p1_fraction;
  cfg.threads = a.threads;
  cfg.noise = !a.no_noise;

  SimSetup setup = [&] {
    try {
      return SimSetup::from_design(doc.design, doc.groups, constellation_for(doc, a.m, a.rotation));
    } catch (const UnverifiedDesign& e) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  {
    const auto group_report = check_group_condition(setup.weights);
    if (!group_report.all_passed()) throw UnverifiedDesign("design fails the cross-group condition");
  }
  const SimResult result = a.equivalent ? equivalent_channel_sim(setup, cfg) : simulate_two_phase(setup, cfg);

  std::string body;
  if (a.gnuplot || a.gnuplot_ber) body = result.to_gnuplot(a.gnuplot_ber);
  else if (a.json_out) body = result.to_json().dump(2) + "\n";
  else body = result.to_csv();

  if (a.out.empty()) {
    out << body;
  } else {
    write_file(a.out, body);
    write_manifest(a.out, "simulate",
                   {{"design", a.design}, {"m", a.m}, {"rotation", a.rotation}, {"snr_db", cfg.snr_db},
                    {"trials", a.trials}, {"p1_fraction", a.p1_fraction}, {"noise", cfg.noise},
                    {"model", a.equivalent ? "equivalent" : "two_phase"}},
                   a.seed, {a.design}, {a.out}, seconds_since(start));
    out << result.to_csv() << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

}  // namespace

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed space-time codes from extended Clifford algebras"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Build a design by left regular representation");
  generate->add_option("--family", gen.family, "A2 or A3")->capture_default_str();
  generate->add_option("--relays", gen.relays, "number of relays R (power of two)")->required();
  generate->add_option("--out", gen.out, "design JSON to write");

  VerifyArgs ver;
  bool no_diversity = false;
  auto* verify = app.add_subcommand("verify", "Run every exact check on a design file");
  verify->add_option("design", ver.design, "design JSON")->required();
  verify->add_option("--json", ver.json_out, "write the report as JSON");
  verify->add_flag("--no-diversity", no_diversity, "skip the rank-criterion scan");
  verify->add_option("--m", ver.m, "points per real dimension for the diversity scan")->capture_default_str();
  verify->add_option("--rotation", ver.rotation, "identity | builtin | file:<path>")->capture_default_str();
  verify->add_flag("--exhaustive", ver.exhaustive, "scan every codeword pair regardless of size");
  verify->add_option("--samples", ver.samples, "random pairs when sampling")->capture_default_str();
  verify->add_option("--seed", ver.seed, "sampling seed")->capture_default_str();
  verify->add_option("--threads", ver.threads, "worker threads")->capture_default_str();

  BenchArgs bench;
  auto* decode_bench = app.add_subcommand("decode-bench", "Compare group and joint ML decoding");
  decode_bench->add_option("design", bench.design, "design JSON")->required();
  decode_bench->add_option("--m", bench.m, "points per real dimension")->capture_default_str();
  decode_bench->add_option("--rotation", bench.rotation, "identity | builtin | file:<path>")->capture_default_str();
  decode_bench->add_option("--trials", bench.trials, "random channel/noise trials")->capture_default_str();
  decode_bench->add_option("--seed", bench.seed, "seed")->capture_default_str();
  decode_bench->add_option("--snr", bench.snr_db, "SNR in dB")->capture_default_str();
  decode_bench->add_option("--out", bench.out, "CSV to write");
  decode_bench->add_flag("--force", bench.force, "group-decode even if the design fails verification");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Two-phase amplify-and-forward Monte Carlo");
  simulate->add_option("design", sim.design, "design JSON")->required();
  simulate->add_option("--m", sim.m, "points per real dimension")->capture_default_str();
  simulate->add_option("--rotation", sim.rotation, "identity | builtin | file:<path>")->capture_default_str();
  simulate->add_option("--snr", sim.snr, "comma separated SNR grid in dB")->capture_default_str();
  simulate->add_option("--trials", sim.trials, "trials per SNR point")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "seed")->capture_default_str();
  simulate->add_option("--p1-fraction", sim.p1_fraction, "share of power used by the source")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "worker threads")->capture_default_str();
  simulate->add_option("--out", sim.out, "results file");
  simulate->add_flag("--json", sim.json_out, "emit JSON instead of CSV");
  simulate->add_flag("--gnuplot", sim.gnuplot, "emit two columns: snr_db ser");
  simulate->add_flag("--gnuplot-ber", sim.gnuplot_ber, "emit two columns: snr_db ber");
  simulate->add_flag("--equivalent", sim.equivalent, "use the equivalent-channel model");
  simulate->add_flag("--no-noise", sim.no_noise, "disable relay and destination noise");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (verify->parsed()) {
      ver.diversity = !no_diversity;
      return cmd_verify(ver, out);
    }
    if (decode_bench->parsed()) return cmd_decode_bench(bench, out);
    if (simulate->parsed()) return cmd_simulate(sim, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnverifiedDesign& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dstc::cli
