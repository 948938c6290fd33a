#pragma once

// Plug-in information measures and the two-predictor partial information
// decomposition (Imin redundancy) over discrete distributions. All results
// are in bits.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pidpoker::info {

enum class InfoErrc {
  NonNormalized,
  NegativeProbability,
  ZeroProbabilityState,
  ZeroEntropyOutput,
  InconsistentJoint,
  InvalidShape,
  MalformedInput,
};

const char* to_string(InfoErrc code);

class InfoError : public std::runtime_error {
 public:
  InfoError(InfoErrc code, const std::string& detail);
  InfoErrc code() const noexcept { return code_; }

 private:
  InfoErrc code_;
};

// Accepted deviation of an input pmf's total mass from 1.
inline constexpr double kNormalizationTolerance = 1e-9;

class JointDistribution3;

// Joint pmf over (X, Y), stored row-major by x.
class Joint2 {
 public:
  static Joint2 from_probabilities(std::size_t nx, std::size_t ny,
                                   std::vector<double> pmf);
  static Joint2 from_counts(std::size_t nx, std::size_t ny,
                            std::span<const std::uint64_t> counts);

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double at(std::size_t x, std::size_t y) const { return pmf_[x * ny_ + y]; }
  std::span<const double> probabilities() const { return pmf_; }

  std::vector<double> marginal_x() const;
  std::vector<double> marginal_y() const;

 private:
  friend class JointDistribution3;
  Joint2(std::size_t nx, std::size_t ny, std::vector<double> pmf)
      : nx_(nx), ny_(ny), pmf_(std::move(pmf)) {}

  std::size_t nx_;
  std::size_t ny_;
  std::vector<double> pmf_;
};

// Joint pmf over (X, Y1, Y2) with finite alphabets. X is the output
// variable; Y1 and Y2 are the two predictors.
class JointDistribution3 {
 public:
  static JointDistribution3 from_probabilities(std::size_t nx, std::size_t ny1,
                                               std::size_t ny2,
                                               std::vector<double> pmf);
  static JointDistribution3 from_counts(std::size_t nx, std::size_t ny1,
                                        std::size_t ny2,
                                        std::span<const std::uint64_t> counts);

  std::size_t nx() const { return nx_; }
  std::size_t ny1() const { return ny1_; }
  std::size_t ny2() const { return ny2_; }
  std::size_t index(std::size_t x, std::size_t y1, std::size_t y2) const {
    return (x * ny1_ + y1) * ny2_ + y2;
  }
  double at(std::size_t x, std::size_t y1, std::size_t y2) const {
    return pmf_[index(x, y1, y2)];
  }
  std::span<const double> probabilities() const { return pmf_; }

  std::vector<double> marginal_x() const;
  std::vector<double> marginal_y1() const;
  std::vector<double> marginal_y2() const;

  Joint2 x_y1() const;
  Joint2 x_y2() const;
  // Pairs (y1, y2) flattened as y1 * ny2 + y2.
  Joint2 x_y12() const;

  bool operator==(const JointDistribution3&) const = default;

 private:
  JointDistribution3(std::size_t nx, std::size_t ny1, std::size_t ny2,
                     std::vector<double> pmf)
      : nx_(nx), ny1_(ny1), ny2_(ny2), pmf_(std::move(pmf)) {}

  std::size_t nx_;
  std::size_t ny1_;
  std::size_t ny2_;
  std::vector<double> pmf_;
};

struct PartialDecomposition {
  double total = 0.0;
  double redundancy = 0.0;
  double unique_y1 = 0.0;
  double unique_y2 = 0.0;
  double synergy = 0.0;
  double interaction_info = 0.0;  // total - mi_y1 - mi_y2; may be negative
  double mi_y1 = 0.0;
  double mi_y2 = 0.0;
};

struct SpecificComponents {
  std::size_t state = 0;
  double weight = 0.0;  // p(x)
  double total = 0.0;
  double redundancy = 0.0;
  double unique_y1 = 0.0;
  double unique_y2 = 0.0;
  double synergy = 0.0;
};

// One entry per output state with p(x) > 0, in ascending state order.
struct SpecificDecomposition {
  std::vector<SpecificComponents> states;

  const SpecificComponents* find(std::size_t state) const;
};

double entropy(std::span<const double> pmf);
double mutual_information(const Joint2& joint);
// Relative entropy of p(y|x) against p(y). Throws ZeroProbabilityState when
// p(x) = 0.
double specific_information(const Joint2& joint, std::size_t x);

double total_information(const JointDistribution3& dist);
double redundancy(const JointDistribution3& dist);
PartialDecomposition decompose(const JointDistribution3& dist);
SpecificDecomposition specific_decompose(const JointDistribution3& dist);
// total_information / H(X); throws ZeroEntropyOutput for a constant X.
double normalized_total(const JointDistribution3& dist);

// Plain-text exchange format: one line per nonzero cell, "x y1 y2 p",
// whitespace separated, 0-based states. Blank lines and lines starting with
// '#' are ignored. Alphabet sizes are one past the largest state seen.
JointDistribution3 read_distribution(std::istream& in);
void write_distribution(std::ostream& out, const JointDistribution3& dist);

}  // namespace pidpoker::info
