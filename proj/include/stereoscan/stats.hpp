#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stereoscan/framework.hpp"

namespace stereoscan::stats {

class StatsError : public std::runtime_error {
 public:
  enum class Kind { EmptyInput, UnbalancedRaters, TooFewRaters };
  StatsError(Kind kind, const std::string& detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// How Likert 0 (not applicable) enters the means. The default drops it;
// AsMidpoint maps it to the scale midpoint 3.
enum class NaPolicy { Exclude, AsMidpoint };

std::string to_string(NaPolicy policy);

struct CriterionMean {
  double mean = 0;            // in [1, 5]
  std::size_t n_applicable = 0;
  std::size_t n_na = 0;
};

// Keyed by criterion id; a criterion with zero applicable scores is absent.
using CriterionMeans = std::map<std::string, CriterionMean>;

struct FrameworkScore {
  double sigma = 0;  // flat mean over all applicable (criterion, rater) scores
  std::size_t n_scores = 0;
};

struct VerdictTally {
  std::size_t boys = 0;
  std::size_t girls = 0;
  std::size_t inclusive = 0;
  bool gendered_flag = false;  // at least one non-inclusive verdict
  std::optional<framework::Verdict> majority;  // ties -> nullopt

  std::size_t total() const { return boys + girls + inclusive; }
};

CriterionMeans criterion_means(std::span<const framework::RatingSheet> sheets,
                               NaPolicy policy = NaPolicy::Exclude);

FrameworkScore framework_score(std::span<const framework::RatingSheet> sheets,
                               NaPolicy policy = NaPolicy::Exclude);

VerdictTally verdict_tally(std::span<const framework::RatingSheet> sheets);

// Fleiss' kappa over a matrix of categorical ratings: labels[item][rater].
// Category codes are arbitrary integers. Every item must carry the same
// number of raters (>= 2). Returns 1.0 when expected agreement is 1.
double fleiss_kappa(const std::vector<std::vector<int>>& labels);

struct MannWhitneyResult {
  double u = 0;            // min(U_a, U_b), midranks for ties
  double p_two_sided = 1;
  bool exact = false;      // full enumeration (tie-free, |a|+|b| <= 16)
};

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

}  // namespace stereoscan::stats
