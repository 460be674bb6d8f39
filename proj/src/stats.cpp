#include "stereoscan/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace stereoscan::stats {

using framework::RatingSheet;
using framework::Verdict;

StatsError::StatsError(Kind kind, const std::string& detail)
    : std::runtime_error([&] {
        switch (kind) {
          case Kind::EmptyInput: return "EmptyInput: " + detail;
          case Kind::UnbalancedRaters: return "UnbalancedRaters: " + detail;
          case Kind::TooFewRaters: return "TooFewRaters: " + detail;
        }
        return "StatsError: " + detail;
      }()),
      kind_(kind) {}

std::string to_string(NaPolicy policy) {
  return policy == NaPolicy::Exclude ? "exclude" : "as_midpoint";
}

namespace {

std::optional<int> effective_score(const framework::LikertScore& score, NaPolicy policy) {
  if (!score.is_na()) return score.value;
  if (policy == NaPolicy::AsMidpoint) return 3;
  return std::nullopt;
}

}  // namespace

CriterionMeans criterion_means(std::span<const RatingSheet> sheets, NaPolicy policy) {
  if (sheets.empty()) throw StatsError(StatsError::Kind::EmptyInput, "no rating sheets");
  struct Acc {
    double sum = 0;
    std::size_t n = 0;
    std::size_t n_na = 0;
  };
  std::map<std::string, Acc> acc;
  for (const RatingSheet& sheet : sheets) {
    for (const auto& [id, score] : sheet.scores) {
      Acc& a = acc[id];
      if (score.is_na()) ++a.n_na;
      if (auto v = effective_score(score, policy)) {
        a.sum += *v;
        ++a.n;
      }
    }
  }
  CriterionMeans means;
  for (const auto& [id, a] : acc) {
    if (a.n == 0) continue;
    means[id] = CriterionMean{a.sum / static_cast<double>(a.n), a.n, a.n_na};
  }
  return means;
}

FrameworkScore framework_score(std::span<const RatingSheet> sheets, NaPolicy policy) {
  if (sheets.empty()) throw StatsError(StatsError::Kind::EmptyInput, "no rating sheets");
  double sum = 0;
  std::size_t n = 0;
  for (const RatingSheet& sheet : sheets) {
    for (const auto& [id, score] : sheet.scores) {
      if (auto v = effective_score(score, policy)) {
        sum += *v;
        ++n;
      }
    }
  }
  if (n == 0) throw StatsError(StatsError::Kind::EmptyInput, "all scores are N/A");
  return FrameworkScore{sum / static_cast<double>(n), n};
}

VerdictTally verdict_tally(std::span<const RatingSheet> sheets) {
  if (sheets.empty()) throw StatsError(StatsError::Kind::EmptyInput, "no rating sheets");
  VerdictTally tally;
  for (const RatingSheet& sheet : sheets) {
    switch (sheet.verdict) {
      case Verdict::Boy: ++tally.boys; break;
      case Verdict::Girl: ++tally.girls; break;
      case Verdict::Inclusive: ++tally.inclusive; break;
    }
  }
  tally.gendered_flag = tally.boys + tally.girls >= 1;
  std::size_t top = std::max({tally.boys, tally.girls, tally.inclusive});
  int winners = (tally.boys == top) + (tally.girls == top) + (tally.inclusive == top);
  if (winners == 1) {
    if (tally.boys == top) tally.majority = Verdict::Boy;
    else if (tally.girls == top) tally.majority = Verdict::Girl;
    else tally.majority = Verdict::Inclusive;
  }
  return tally;
}

double fleiss_kappa(const std::vector<std::vector<int>>& labels) {
  if (labels.empty()) throw StatsError(StatsError::Kind::EmptyInput, "no items");
  const std::size_t n_raters = labels.front().size();
  if (n_raters < 2)
    throw StatsError(StatsError::Kind::TooFewRaters, std::to_string(n_raters));
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i].size() != n_raters)
      throw StatsError(StatsError::Kind::UnbalancedRaters, "item " + std::to_string(i));

  std::vector<int> categories;
  for (const auto& row : labels)
    for (int code : row) categories.push_back(code);
  std::sort(categories.begin(), categories.end());
  categories.erase(std::unique(categories.begin(), categories.end()), categories.end());

  const double n = static_cast<double>(n_raters);
  const double n_items = static_cast<double>(labels.size());
  std::vector<double> category_totals(categories.size(), 0.0);
  double p_bar = 0;
  for (const auto& row : labels) {
    double agree = 0;
    for (std::size_t c = 0; c < categories.size(); ++c) {
      double count = static_cast<double>(std::count(row.begin(), row.end(), categories[c]));
      category_totals[c] += count;
      agree += count * count;
    }
    p_bar += (agree - n) / (n * (n - 1.0));
  }
  p_bar /= n_items;

  double pe = 0;
  for (double total : category_totals) {
    double p_j = total / (n_items * n);
    pe += p_j * p_j;
  }
  if (pe >= 1.0) return 1.0;  // single category everywhere
  return (p_bar - pe) / (1.0 - pe);
}

namespace {

// Midranks of the pooled sample; also accumulates sum(t^3 - t) over tie groups.
std::vector<double> midranks(std::vector<double> pooled, double* tie_term) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t lhs, std::size_t rhs) { return pooled[lhs] < pooled[rhs]; });
  std::vector<double> ranks(pooled.size());
  *tie_term = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && pooled[order[j]] == pooled[order[i]]) ++j;
    double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    double t = static_cast<double>(j - i);
    *tie_term += t * t * t - t;
    i = j;
  }
  return ranks;
}

double normal_two_sided_p(double u, double n_a, double n_b, double tie_term) {
  double n = n_a + n_b;
  double mu = n_a * n_b / 2.0;
  double var = n_a * n_b / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var <= 0) return 1.0;  // all values identical
  double z = std::abs(u - mu) - 0.5;  // continuity correction
  if (z < 0) z = 0;
  z /= std::sqrt(var);
  double p = std::erfc(z / std::sqrt(2.0));
  return std::min(p, 1.0);
}

double exact_two_sided_p(std::span<const double> ranks_a_pool, std::size_t n_a, double u_obs) {
  // Tie-free: pooled ranks are 1..n. Enumerate every split of rank
  // positions into group a and count splits at least as extreme.
  const std::size_t n = ranks_a_pool.size();
  const double offset = static_cast<double>(n_a * (n_a + 1)) / 2.0;
  std::size_t total = 0;
  std::size_t extreme = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n_a) continue;
    ++total;
    double rank_sum = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) rank_sum += ranks_a_pool[i];
    double u_a = rank_sum - offset;
    if (u_a <= u_obs + 1e-12) ++extreme;
  }
  double p = 2.0 * static_cast<double>(extreme) / static_cast<double>(total);
  return std::min(p, 1.0);
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw StatsError(StatsError::Kind::EmptyInput, "both samples must be non-empty");

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  double tie_term = 0;
  std::vector<double> ranks = midranks(pooled, &tie_term);

  double rank_sum_a = 0;
  for (std::size_t i = 0; i < a.size(); ++i) rank_sum_a += ranks[i];
  const double n_a = static_cast<double>(a.size());
  const double n_b = static_cast<double>(b.size());
  double u_a = rank_sum_a - n_a * (n_a + 1.0) / 2.0;
  double u_b = n_a * n_b - u_a;

  MannWhitneyResult result;
  result.u = std::min(u_a, u_b);
  bool tie_free = tie_term == 0;
  if (tie_free && pooled.size() <= 16) {
    result.exact = true;
    result.p_two_sided = exact_two_sided_p(ranks, a.size(), result.u);
  } else {
    result.p_two_sided = normal_two_sided_p(result.u, n_a, n_b, tie_term);
  }
  return result;
}

}  // namespace stereoscan::stats
