#include "dstc/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/QR>

#include "dstc/verify.hpp"

namespace dstc {

RVector stack_real(const CVector& v) {
  RVector out(2 * v.size());
  out.head(v.size()) = v.real();
  out.tail(v.size()) = v.imag();
  return out;
}

std::vector<RMatrix> build_group_generators(const GroupedWeightSet& w, const CVector& h, double theta) {
  const auto rows = static_cast<Eigen::Index>(2 * w.R);
  std::vector<RMatrix> out;
  out.reserve(w.groups.size());
  for (const auto& group : w.groups) {
    RMatrix g(rows, static_cast<Eigen::Index>(group.size()));
    for (std::size_t c = 0; c < group.size(); ++c) {
      g.col(static_cast<Eigen::Index>(c)) = theta * stack_real(w.weights.at(group[c]).to_eigen() * h);
    }
    out.push_back(std::move(g));
  }
  return out;
}

double joint_metric(const SymbolicDesign& design, const EquivalentChannel& ch, const CVector& symbols) {
  double metric = 0.0;
  for (std::size_t r = 0; r < design.R; ++r) {
    std::complex<double> acc = 0.0;
    for (std::size_t c = 0; c < design.R; ++c) {
      const DesignCell& cell = design.cell(r, c);
      if (cell.empty()) continue;
      const std::complex<double> z = symbols(cell.var - 1);
      acc += static_cast<double>(cell.sign) * (cell.conj ? std::conj(z) : z) * ch.h(c);
    }
    metric += std::norm(ch.y(r) - ch.theta * acc);
  }
  return metric;
}

double decomposition_constant(const EquivalentChannel& ch, std::size_t groups) {
  return -static_cast<double>(groups - 1) * ch.y.squaredNorm();
}

// --- sphere decoding --------------------------------------------------------

namespace {

double leaf_metric(const RMatrix& generator, const RVector& y, const RVector& point, double amplitude) {
  return (y - generator * (amplitude * point)).squaredNorm();
}

class SchnorrEuchner {
 public:
  SchnorrEuchner(const RMatrix& generator, const RVector& y, const GroupConstellation& gc, double amplitude)
      : generator_(generator), y_(y), gc_(gc), amplitude_(amplitude), dim_(gc.dim) {}

  // Returns false if the generator is numerically rank deficient.
  bool run(double rank_tolerance, SphereResult& out) {
    const RMatrix basis = amplitude_ * generator_ * gc_.rotation;
    Eigen::HouseholderQR<RMatrix> qr(basis);
    const RMatrix full_r = qr.matrixQR().triangularView<Eigen::Upper>();
    upper_ = full_r.topRows(static_cast<Eigen::Index>(dim_));
    const double scale = upper_.diagonal().cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) return false;
    for (std::size_t k = 0; k < dim_; ++k) {
      if (std::abs(upper_(k, k)) <= rank_tolerance * scale) return false;
    }
    const RVector qty = qr.householderQ().transpose() * y_;
    z_ = qty.head(static_cast<Eigen::Index>(dim_));
    perp_ = qty.tail(qty.size() - static_cast<Eigen::Index>(dim_)).squaredNorm();

    // Initial radius from the zero-forcing solution rounded to the nearest levels.
    const RVector zf = upper_.triangularView<Eigen::Upper>().solve(z_);
    std::vector<int> start(dim_);
    for (std::size_t k = 0; k < dim_; ++k) start[k] = nearest_level(zf(k));
    best_index_ = point_index(start);
    best_metric_ = evaluate(best_index_);
    start_index_ = best_index_;
    leaves_ = 1;

    levels_.assign(dim_, 0);
    search(static_cast<int>(dim_) - 1, 0.0);

    out.index = best_index_;
    out.metric = best_metric_;
    out.leaves = leaves_;
    out.fallback = false;
    return true;
  }

 private:
  int nearest_level(double v) const {
    int best = 0;
    for (int l = 1; l < gc_.m; ++l) {
      if (std::abs(gc_.levels[l] - v) < std::abs(gc_.levels[best] - v)) best = l;
    }
    return best;
  }

  std::size_t point_index(const std::vector<int>& levels) const {
    std::size_t index = 0;
    for (int l : levels) index = index * static_cast<std::size_t>(gc_.m) + static_cast<std::size_t>(l);
    return index;
  }

  double evaluate(std::size_t index) const { return leaf_metric(generator_, y_, gc_.points[index], amplitude_); }

  double radius() const {
    // Partial distances come from a QR factorization, so pruning keeps a little
    // slack; leaves are always compared on the directly evaluated metric.
    return best_metric_ * (1.0 + 1e-9) + 1e-12 * (1.0 + y_.squaredNorm());
  }

  void search(int k, double partial) {
    double center = z_(k);
    for (int j = k + 1; j < static_cast<int>(dim_); ++j) center -= upper_(k, j) * gc_.levels[levels_[j]];
    center /= upper_(k, k);

    std::vector<int> order(gc_.m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(gc_.levels[a] - center) < std::abs(gc_.levels[b] - center);
    });

    const double rkk2 = upper_(k, k) * upper_(k, k);
    for (int l : order) {
      const double d = gc_.levels[l] - center;
      const double pd = partial + rkk2 * d * d;
      if (pd + perp_ > radius()) break;
      levels_[k] = l;
      if (k == 0) {
        const std::size_t idx = point_index(levels_);
        if (idx == start_index_) continue;
        ++leaves_;
        const double metric = evaluate(idx);
        if (metric < best_metric_ || (metric == best_metric_ && idx < best_index_)) {
          best_metric_ = metric;
          best_index_ = idx;
        }
      } else {
        search(k - 1, pd);
      }
    }
  }

  const RMatrix& generator_;
  const RVector& y_;
  const GroupConstellation& gc_;
  double amplitude_;
  std::size_t dim_;

  RMatrix upper_;
  RVector z_;
  double perp_ = 0.0;
  std::vector<int> levels_;
  std::size_t best_index_ = 0;
  std::size_t start_index_ = 0;
  double best_metric_ = std::numeric_limits<double>::infinity();
  std::size_t leaves_ = 0;
};

}  // namespace

SphereResult exhaustive_decode(const RMatrix& generator, const RVector& y, const GroupConstellation& gc,
                               double amplitude) {
  SphereResult out;
  out.metric = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < gc.size(); ++p) {
    const double metric = leaf_metric(generator, y, gc.points[p], amplitude);
    if (metric < out.metric) {
      out.metric = metric;
      out.index = p;
    }
  }
  out.leaves = gc.size();
  out.fallback = true;
  return out;
}

SphereResult sphere_decode(const RMatrix& generator, const RVector& y, const GroupConstellation& gc,
                           double amplitude, const SphereOptions& options) {
  if (static_cast<std::size_t>(generator.cols()) != gc.dim || generator.rows() != y.size()) {
    throw std::invalid_argument("generator / observation / constellation dimensions disagree");
  }
  SphereResult out;
  if (generator.rows() < generator.cols() || !SchnorrEuchner(generator, y, gc, amplitude).run(options.rank_tolerance, out)) {
    out = exhaustive_decode(generator, y, gc, amplitude);
  }
  if (options.check_exhaustive) {
    const SphereResult ref = exhaustive_decode(generator, y, gc, amplitude);
    if (ref.index != out.index && std::abs(ref.metric - out.metric) > 1e-9 * (1.0 + ref.metric)) {
      throw SphereMismatch("sphere decoder returned point " + std::to_string(out.index) +
                           " but the exhaustive scan found " + std::to_string(ref.index));
    }
  }
  return out;
}

// --- joint ------------------------------------------------------------------

JointDecoder::JointDecoder(const SymbolicDesign& design, const Codebook& codebook, std::size_t guard)
    : design_(&design) {
  const std::size_t n = codebook.size();
  if (n > guard) {
    throw CodebookTooLarge("joint decoding needs " + std::to_string(n) + " codewords, guard is " +
                           std::to_string(guard));
  }
  words_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) words_.push_back(codebook.symbols(k));
}

JointDecodeResult JointDecoder::decode(const EquivalentChannel& ch) const {
  JointDecodeResult out;
  out.metric = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < words_.size(); ++k) {
    const double metric = joint_metric(*design_, ch, words_[k]);
    if (metric < out.metric) {
      out.metric = metric;
      out.codeword = k;
    }
  }
  out.evaluations = words_.size();
  return out;
}

JointDecodeResult joint_ml_decode(const SymbolicDesign& design, const Codebook& codebook,
                                  const EquivalentChannel& ch) {
  return JointDecoder(design, codebook).decode(ch);
}

// --- group ------------------------------------------------------------------

GroupDecoder::GroupDecoder(GroupedWeightSet weights, const Codebook& codebook, bool force, SphereOptions options)
    : weights_(std::move(weights)), codebook_(&codebook), options_(options) {
  if (weights_.groups != codebook.groups()) {
    throw std::invalid_argument("codebook groups differ from the weight set groups");
  }
  if (!force) {
    const auto report = check_group_condition(weights_);
    if (!report.all_passed()) {
      throw UnverifiedDesign("design fails the cross-group condition (" + report.checks.front().witness +
                             "); group decoding would not be ML");
    }
  }
}

std::size_t GroupDecoder::search_dimension() const { return codebook_->constellation().dim; }

std::size_t GroupDecoder::joint_dimension() const { return weights_.weights.size(); }

GroupDecodeResult GroupDecoder::decode(const EquivalentChannel& ch) const {
  const auto generators = build_group_generators(weights_, ch.h, ch.theta);
  const RVector y = stack_real(ch.y);
  GroupDecodeResult out;
  for (const RMatrix& g : generators) {
    const SphereResult r = sphere_decode(g, y, codebook_->constellation(), kRealAmplitude, options_);
    out.points.push_back(r.index);
    out.metrics.push_back(r.metric);
    out.leaves += r.leaves;
  }
  out.codeword = codebook_->join(out.points);
  return out;
}

GroupDecodeResult group_ml_decode(const GroupedWeightSet& weights, const Codebook& codebook,
                                  const EquivalentChannel& ch) {
  return GroupDecoder(weights, codebook).decode(ch);
}

}  // namespace dstc
