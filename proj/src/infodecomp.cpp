#include "pidpoker/infodecomp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pidpoker::info {

const char* to_string(InfoErrc code) {
  switch (code) {
    case InfoErrc::NonNormalized: return "NonNormalized";
    case InfoErrc::NegativeProbability: return "NegativeProbability";
    case InfoErrc::ZeroProbabilityState: return "ZeroProbabilityState";
    case InfoErrc::ZeroEntropyOutput: return "ZeroEntropyOutput";
    case InfoErrc::InconsistentJoint: return "InconsistentJoint";
    case InfoErrc::InvalidShape: return "InvalidShape";
    case InfoErrc::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

InfoError::InfoError(InfoErrc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code) {}

namespace {

void validate_pmf(std::span<const double> pmf) {
  double sum = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0)) {
      throw InfoError(InfoErrc::NegativeProbability,
                      "probability " + std::to_string(p) + " is negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    throw InfoError(InfoErrc::NonNormalized,
                    "probabilities sum to " + std::to_string(sum));
  }
}

std::vector<double> normalize_counts(std::span<const std::uint64_t> counts) {
  const std::uint64_t total =
      std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) {
    throw InfoError(InfoErrc::NonNormalized, "count table is empty");
  }
  std::vector<double> pmf(counts.size());
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    pmf[i] = static_cast<double>(counts[i]) * inv;
  }
  return pmf;
}

void check_shape(std::size_t cells, std::size_t expected) {
  if (expected == 0 || cells != expected) {
    throw InfoError(InfoErrc::InvalidShape,
                    "expected " + std::to_string(expected) + " cells, got " +
                        std::to_string(cells));
  }
}

// Sum over y of p(x,y)/p(x) * log2(p(x,y) / (p(x) p(y))), given the row for x.
double relative_entropy_row(std::span<const double> row, double px,
                            std::span<const double> py) {
  double acc = 0.0;
  for (std::size_t y = 0; y < row.size(); ++y) {
    const double pxy = row[y];
    if (pxy <= 0.0) continue;
    if (py[y] <= 0.0) {
      throw InfoError(InfoErrc::InconsistentJoint,
                      "p(y|x) > 0 where p(y) = 0");
    }
    const double cond = pxy / px;
    acc += cond * std::log2(cond / py[y]);
  }
  return acc;
}

// Specific information of every output state with p(x) > 0; zero-mass
// states get 0 and are skipped by callers through the weight.
std::vector<double> specific_all(const Joint2& joint,
                                 std::span<const double> px,
                                 std::span<const double> py) {
  std::vector<double> out(joint.nx(), 0.0);
  const auto pmf = joint.probabilities();
  for (std::size_t x = 0; x < joint.nx(); ++x) {
    if (px[x] <= 0.0) continue;
    out[x] = relative_entropy_row(pmf.subspan(x * joint.ny(), joint.ny()),
                                  px[x], py);
  }
  return out;
}

struct SpecificTerms {
  std::vector<double> px;
  std::vector<double> y1;
  std::vector<double> y2;
  std::vector<double> y12;
};

SpecificTerms specific_terms(const JointDistribution3& dist) {
  const Joint2 j1 = dist.x_y1();
  const Joint2 j2 = dist.x_y2();
  const Joint2 j12 = dist.x_y12();
  SpecificTerms t;
  t.px = dist.marginal_x();
  t.y1 = specific_all(j1, t.px, j1.marginal_y());
  t.y2 = specific_all(j2, t.px, j2.marginal_y());
  t.y12 = specific_all(j12, t.px, j12.marginal_y());
  return t;
}

}  // namespace

// --- Joint2 ---------------------------------------------------------------

Joint2 Joint2::from_probabilities(std::size_t nx, std::size_t ny,
                                  std::vector<double> pmf) {
  check_shape(pmf.size(), nx * ny);
  validate_pmf(pmf);
  return Joint2(nx, ny, std::move(pmf));
}

Joint2 Joint2::from_counts(std::size_t nx, std::size_t ny,
                           std::span<const std::uint64_t> counts) {
  check_shape(counts.size(), nx * ny);
  return Joint2(nx, ny, normalize_counts(counts));
}

std::vector<double> Joint2::marginal_x() const {
  std::vector<double> m(nx_, 0.0);
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t y = 0; y < ny_; ++y) m[x] += at(x, y);
  return m;
}

std::vector<double> Joint2::marginal_y() const {
  std::vector<double> m(ny_, 0.0);
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t y = 0; y < ny_; ++y) m[y] += at(x, y);
  return m;
}

// --- JointDistribution3 ---------------------------------------------------

JointDistribution3 JointDistribution3::from_probabilities(
    std::size_t nx, std::size_t ny1, std::size_t ny2, std::vector<double> pmf) {
  check_shape(pmf.size(), nx * ny1 * ny2);
  validate_pmf(pmf);
  return JointDistribution3(nx, ny1, ny2, std::move(pmf));
}

JointDistribution3 JointDistribution3::from_counts(
    std::size_t nx, std::size_t ny1, std::size_t ny2,
    std::span<const std::uint64_t> counts) {
  check_shape(counts.size(), nx * ny1 * ny2);
  return JointDistribution3(nx, ny1, ny2, normalize_counts(counts));
}

std::vector<double> JointDistribution3::marginal_x() const {
  std::vector<double> m(nx_, 0.0);
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t a = 0; a < ny1_; ++a)
      for (std::size_t b = 0; b < ny2_; ++b) m[x] += at(x, a, b);
  return m;
}

std::vector<double> JointDistribution3::marginal_y1() const {
  return x_y1().marginal_y();
}

std::vector<double> JointDistribution3::marginal_y2() const {
  return x_y2().marginal_y();
}

Joint2 JointDistribution3::x_y1() const {
  std::vector<double> p(nx_ * ny1_, 0.0);
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t a = 0; a < ny1_; ++a)
      for (std::size_t b = 0; b < ny2_; ++b) p[x * ny1_ + a] += at(x, a, b);
  return Joint2(nx_, ny1_, std::move(p));
}

Joint2 JointDistribution3::x_y2() const {
  std::vector<double> p(nx_ * ny2_, 0.0);
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t a = 0; a < ny1_; ++a)
      for (std::size_t b = 0; b < ny2_; ++b) p[x * ny2_ + b] += at(x, a, b);
  return Joint2(nx_, ny2_, std::move(p));
}

Joint2 JointDistribution3::x_y12() const {
  return Joint2(nx_, ny1_ * ny2_, pmf_);
}

const SpecificComponents* SpecificDecomposition::find(std::size_t state) const {
  for (const auto& s : states)
    if (s.state == state) return &s;
  return nullptr;
}

// --- measures -------------------------------------------------------------

double entropy(std::span<const double> pmf) {
  validate_pmf(pmf);
  double h = 0.0;
  for (double p : pmf)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double mutual_information(const Joint2& joint) {
  const auto px = joint.marginal_x();
  const auto py = joint.marginal_y();
  const double mi = entropy(px) + entropy(py) - entropy(joint.probabilities());
  return std::max(mi, 0.0);
}

double specific_information(const Joint2& joint, std::size_t x) {
  if (x >= joint.nx()) {
    throw InfoError(InfoErrc::InvalidShape, "state out of range");
  }
  const auto px = joint.marginal_x();
  if (px[x] <= 0.0) {
    throw InfoError(InfoErrc::ZeroProbabilityState,
                    "p(x) = 0 for state " + std::to_string(x));
  }
  const auto py = joint.marginal_y();
  return relative_entropy_row(
      joint.probabilities().subspan(x * joint.ny(), joint.ny()), px[x], py);
}

double total_information(const JointDistribution3& dist) {
  return mutual_information(dist.x_y12());
}

double redundancy(const JointDistribution3& dist) {
  const auto t = specific_terms(dist);
  double rdn = 0.0;
  for (std::size_t x = 0; x < t.px.size(); ++x) {
    if (t.px[x] > 0.0) rdn += t.px[x] * std::min(t.y1[x], t.y2[x]);
  }
  return rdn;
}

// Every global term is the p(x)-weighted average of its specific term, so
// the averaging identities hold to round-off.
PartialDecomposition decompose(const JointDistribution3& dist) {
  const auto t = specific_terms(dist);
  PartialDecomposition d;
  for (std::size_t x = 0; x < t.px.size(); ++x) {
    const double w = t.px[x];
    if (w <= 0.0) continue;
    d.total += w * t.y12[x];
    d.mi_y1 += w * t.y1[x];
    d.mi_y2 += w * t.y2[x];
    d.redundancy += w * std::min(t.y1[x], t.y2[x]);
  }
  d.unique_y1 = d.mi_y1 - d.redundancy;
  d.unique_y2 = d.mi_y2 - d.redundancy;
  d.synergy = d.total - d.unique_y1 - d.unique_y2 - d.redundancy;
  d.interaction_info = d.total - d.mi_y1 - d.mi_y2;
  return d;
}

SpecificDecomposition specific_decompose(const JointDistribution3& dist) {
  const auto t = specific_terms(dist);
  SpecificDecomposition out;
  for (std::size_t x = 0; x < t.px.size(); ++x) {
    if (t.px[x] <= 0.0) continue;
    SpecificComponents c;
    c.state = x;
    c.weight = t.px[x];
    c.total = t.y12[x];
    c.redundancy = std::min(t.y1[x], t.y2[x]);
    c.unique_y1 = t.y1[x] - c.redundancy;
    c.unique_y2 = t.y2[x] - c.redundancy;
    c.synergy = c.total - c.unique_y1 - c.unique_y2 - c.redundancy;
    out.states.push_back(c);
  }
  return out;
}

double normalized_total(const JointDistribution3& dist) {
  const double hx = entropy(dist.marginal_x());
  if (hx <= 0.0) {
    throw InfoError(InfoErrc::ZeroEntropyOutput, "output variable is constant");
  }
  return total_information(dist) / hx;
}

}  // namespace pidpoker::info
