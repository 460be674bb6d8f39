#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "stereoscan/stats.hpp"

using namespace stereoscan;
using framework::LikertScore;
using framework::RatingSheet;
using framework::Verdict;

namespace {

RatingSheet sheet_with(int value, Verdict verdict = Verdict::Inclusive) {
  RatingSheet sheet;
  for (const auto& criterion : framework::catalog())
    sheet.scores[criterion.id] = LikertScore{value};
  sheet.verdict = verdict;
  return sheet;
}

// ---- independent oracles -------------------------------------------------

// Fleiss' kappa via explicit rater-pair counting, no n_ij algebra shared
// with the implementation.
double fleiss_pair_oracle(const std::vector<std::vector<int>>& labels) {
  std::size_t n = labels.front().size();
  double agree_sum = 0;
  for (const auto& row : labels) {
    std::size_t agreeing_pairs = 0, total_pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        ++total_pairs;
        if (row[i] == row[j]) ++agreeing_pairs;
      }
    agree_sum += static_cast<double>(agreeing_pairs) / static_cast<double>(total_pairs);
  }
  double p_bar = agree_sum / static_cast<double>(labels.size());

  std::map<int, double> counts;
  double total = 0;
  for (const auto& row : labels)
    for (int v : row) {
      counts[v] += 1;
      total += 1;
    }
  double pe = 0;
  for (const auto& [v, c] : counts) pe += (c / total) * (c / total);
  if (pe >= 1.0) return 1.0;
  return (p_bar - pe) / (1.0 - pe);
}

// U statistic straight from pairwise value comparisons.
double u_of_groups(const std::vector<double>& a, const std::vector<double>& b) {
  double u_a = 0;
  for (double x : a)
    for (double y : b) {
      if (x > y) u_a += 1;
      else if (x == y) u_a += 0.5;
    }
  return std::min(u_a, static_cast<double>(a.size() * b.size()) - u_a);
}

// Exact two-sided p by enumerating every split of the pooled values into
// groups of the original sizes and counting splits at least as extreme.
double mw_exact_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::size_t n = pooled.size(), n_a = a.size();
  double u_obs = u_of_groups(a, b);

  std::vector<std::size_t> pick(n_a);
  std::iota(pick.begin(), pick.end(), 0);
  std::size_t total = 0, extreme = 0;
  while (true) {
    std::vector<double> group_a, group_b;
    std::vector<bool> chosen(n, false);
    for (std::size_t idx : pick) chosen[idx] = true;
    for (std::size_t i = 0; i < n; ++i)
      (chosen[i] ? group_a : group_b).push_back(pooled[i]);
    ++total;
    if (u_of_groups(group_a, group_b) <= u_obs + 1e-12) ++extreme;

    // next combination
    std::size_t i = n_a;
    while (i > 0 && pick[i - 1] == n - n_a + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n_a; ++j) pick[j] = pick[j - 1] + 1;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("criterion means: basic aggregation and N/A handling") {
  RatingSheet one = sheet_with(0);
  one.scores["CH01"] = LikertScore{4};
  std::vector<RatingSheet> sheets = {one};
  auto means = stats::criterion_means(sheets);
  REQUIRE(means.count("CH01") == 1);
  CHECK(means.at("CH01").mean == doctest::Approx(4.0));
  CHECK(means.at("CH01").n_applicable == 1);
  CHECK(means.count("CH02") == 0);  // all N/A -> absent

  SUBCASE("six fives reproduce the reported 5.0 mean") {
    std::vector<RatingSheet> six;
    for (int i = 0; i < 6; ++i) {
      RatingSheet s = sheet_with(1);
      s.scores["CH01"] = LikertScore{5};
      six.push_back(s);
    }
    CHECK(stats::criterion_means(six).at("CH01").mean == doctest::Approx(5.0));
  }

  SUBCASE("{4, 0, 4} averages over the applicable two") {
    std::vector<RatingSheet> three;
    for (int v : {4, 0, 4}) {
      RatingSheet s = sheet_with(1);
      s.scores["CH01"] = LikertScore{v};
      three.push_back(s);
    }
    auto m = stats::criterion_means(three).at("CH01");
    CHECK(m.mean == doctest::Approx(4.0));
    CHECK(m.n_applicable == 2);
    CHECK(m.n_na == 1);
  }

  SUBCASE("as_midpoint policy maps N/A to 3") {
    std::vector<RatingSheet> three;
    for (int v : {4, 0, 4}) {
      RatingSheet s = sheet_with(1);
      s.scores["CH01"] = LikertScore{v};
      three.push_back(s);
    }
    auto m = stats::criterion_means(three, stats::NaPolicy::AsMidpoint).at("CH01");
    CHECK(m.mean == doctest::Approx((4 + 3 + 4) / 3.0));
    CHECK(m.n_applicable == 3);
  }

  CHECK_THROWS_AS(stats::criterion_means({}), stats::StatsError);
}

TEST_CASE("framework score sigma") {
  SUBCASE("all threes from every rater") {
    std::vector<RatingSheet> sheets = {sheet_with(3), sheet_with(3)};
    auto score = stats::framework_score(sheets);
    CHECK(score.sigma == doctest::Approx(3.0));
    CHECK(score.n_scores == 36);
  }
  SUBCASE("all-1s and all-5s average to 3 by symmetry") {
    std::vector<RatingSheet> sheets = {sheet_with(1), sheet_with(5)};
    CHECK(stats::framework_score(sheets).sigma == doctest::Approx(3.0));
  }
  SUBCASE("synthetic six-rater set lands exactly on 2.9") {
    // 90 applicable scores summing to 261: 81 threes, 9 twos, 18 N/A.
    std::vector<RatingSheet> sheets;
    const auto& catalog = framework::catalog();
    for (int r = 0; r < 6; ++r) {
      RatingSheet sheet;
      for (std::size_t c = 0; c < catalog.size(); ++c) {
        int value = 3;
        if (c >= 15) value = 0;                    // 3 N/A per sheet
        else if (r == 0 && c < 9) value = 2;       // nine 2s
        sheet.scores[catalog[c].id] = LikertScore{value};
      }
      sheets.push_back(std::move(sheet));
    }
    auto score = stats::framework_score(sheets);
    CHECK(score.n_scores == 90);
    CHECK(score.sigma == doctest::Approx(2.9).epsilon(1e-12));
  }
  SUBCASE("sigma is invariant under rater permutation") {
    std::vector<RatingSheet> sheets = {sheet_with(1), sheet_with(4), sheet_with(5)};
    double before = stats::framework_score(sheets).sigma;
    std::reverse(sheets.begin(), sheets.end());
    CHECK(stats::framework_score(sheets).sigma == doctest::Approx(before));
  }
  SUBCASE("single-criterion projection equals criterion mean") {
    std::vector<RatingSheet> sheets;
    for (int v : {1, 2, 4}) {
      RatingSheet s;
      s.scores["CH01"] = LikertScore{v};
      sheets.push_back(s);
    }
    CHECK(stats::framework_score(sheets).sigma ==
          doctest::Approx(stats::criterion_means(sheets).at("CH01").mean));
  }
}

TEST_CASE("verdict tally") {
  SUBCASE("all inclusive -> unflagged") {
    std::vector<RatingSheet> sheets(6, sheet_with(1, Verdict::Inclusive));
    auto tally = stats::verdict_tally(sheets);
    CHECK_FALSE(tally.gendered_flag);
    CHECK(tally.majority == Verdict::Inclusive);
    CHECK(tally.total() == 6);
  }
  SUBCASE("a single girl verdict flags the project") {
    std::vector<RatingSheet> sheets(5, sheet_with(1, Verdict::Inclusive));
    sheets.push_back(sheet_with(1, Verdict::Girl));
    auto tally = stats::verdict_tally(sheets);
    CHECK(tally.gendered_flag);
    CHECK(tally.girls == 1);
    CHECK(tally.majority == Verdict::Inclusive);
  }
  SUBCASE("ties have no majority") {
    std::vector<RatingSheet> sheets = {sheet_with(1, Verdict::Boy),
                                       sheet_with(1, Verdict::Girl)};
    CHECK_FALSE(stats::verdict_tally(sheets).majority.has_value());
  }
}

TEST_CASE("fleiss kappa: agreement cases and oracle") {
  SUBCASE("perfect agreement is 1.0") {
    std::vector<std::vector<int>> labels = {{1, 1, 1}, {2, 2, 2}, {3, 3, 3}};
    CHECK(stats::fleiss_kappa(labels) == doctest::Approx(1.0));
  }
  SUBCASE("single category everywhere hits the expected-agreement guard") {
    std::vector<std::vector<int>> labels = {{1, 1}, {1, 1}};
    CHECK(stats::fleiss_kappa(labels) == doctest::Approx(1.0));
  }
  SUBCASE("2x2 anti-agreement is -1.0") {
    std::vector<std::vector<int>> labels = {{0, 1}, {1, 0}};
    CHECK(stats::fleiss_kappa(labels) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(fleiss_pair_oracle(labels) == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("canonical 10 items x 14 raters x 5 categories") {
    const int counts[10][5] = {
        {0, 0, 0, 0, 14}, {0, 2, 6, 4, 2}, {0, 0, 3, 5, 6}, {0, 3, 9, 2, 0},
        {2, 2, 8, 1, 1},  {7, 7, 0, 0, 0}, {3, 2, 6, 3, 0}, {2, 5, 3, 2, 2},
        {6, 5, 2, 1, 0},  {0, 2, 2, 3, 7},
    };
    std::vector<std::vector<int>> labels;
    for (const auto& row : counts) {
      std::vector<int> item;
      for (int cat = 0; cat < 5; ++cat)
        for (int k = 0; k < row[cat]; ++k) item.push_back(cat);
      REQUIRE(item.size() == 14);
      labels.push_back(std::move(item));
    }
    double kappa = stats::fleiss_kappa(labels);
    CHECK(kappa == doctest::Approx(fleiss_pair_oracle(labels)).epsilon(1e-9));
    CHECK(kappa == doctest::Approx(4211.0 / 20059.0).epsilon(1e-9));
  }
  SUBCASE("invariant under category relabeling and row permutation") {
    std::vector<std::vector<int>> labels = {{1, 2, 2}, {2, 2, 3}, {1, 1, 1}, {3, 2, 1}};
    double base = stats::fleiss_kappa(labels);
    std::vector<std::vector<int>> relabeled;
    for (const auto& row : labels) {
      std::vector<int> r;
      for (int v : row) r.push_back(v == 1 ? 7 : v == 2 ? -2 : 0);
      relabeled.push_back(r);
    }
    CHECK(stats::fleiss_kappa(relabeled) == doctest::Approx(base).epsilon(1e-12));
    std::vector<std::vector<int>> permuted = {labels[2], labels[0], labels[3], labels[1]};
    for (auto& row : permuted) std::reverse(row.begin(), row.end());
    CHECK(stats::fleiss_kappa(permuted) == doctest::Approx(base).epsilon(1e-12));
  }
  SUBCASE("error paths") {
    CHECK_THROWS_AS(stats::fleiss_kappa({}), stats::StatsError);
    CHECK_THROWS_AS(stats::fleiss_kappa({{1}}), stats::StatsError);
    CHECK_THROWS_AS(stats::fleiss_kappa({{1, 2}, {1}}), stats::StatsError);
  }
}

TEST_CASE("mann-whitney: spec examples") {
  SUBCASE("identical samples") {
    std::vector<double> a = {1, 2, 3};
    auto result = stats::mann_whitney_u(a, a);
    CHECK(result.u == doctest::Approx(4.5));  // 3*3/2
    CHECK(result.p_two_sided == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("complete separation of two pairs") {
    std::vector<double> a = {1, 2}, b = {3, 4};
    auto result = stats::mann_whitney_u(a, b);
    CHECK(result.exact);
    CHECK(result.u == doctest::Approx(0.0));
    CHECK(result.p_two_sided == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
  }
  SUBCASE("empty input throws") {
    std::vector<double> a = {1.0}, empty;
    CHECK_THROWS_AS(stats::mann_whitney_u(a, empty), stats::StatsError);
    CHECK_THROWS_AS(stats::mann_whitney_u(empty, a), stats::StatsError);
  }
}

TEST_CASE("mann-whitney exact p matches full enumeration (tie-free, n <= 12)") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> value(0.0, 100.0);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n_a = 1 + rng() % 6;
    std::size_t n_b = 1 + rng() % 6;
    std::vector<double> a, b;
    std::set<double> used;
    auto fresh_value = [&] {
      double v = value(rng);
      while (used.count(v) > 0) v = value(rng);
      used.insert(v);
      return v;
    };
    for (std::size_t i = 0; i < n_a; ++i) a.push_back(fresh_value());
    for (std::size_t i = 0; i < n_b; ++i) b.push_back(fresh_value());

    auto result = stats::mann_whitney_u(a, b);
    REQUIRE(result.exact);
    double oracle = mw_exact_oracle(a, b);
    INFO("trial ", trial, " n_a=", n_a, " n_b=", n_b, " u=", result.u);
    CHECK(result.p_two_sided == doctest::Approx(std::min(1.0, oracle)).epsilon(1e-12));
  }
}

TEST_CASE("mann-whitney symmetry and tie handling") {
  std::vector<double> a = {1, 5, 5, 9}, b = {2, 5, 7};
  auto ab = stats::mann_whitney_u(a, b);
  auto ba = stats::mann_whitney_u(b, a);
  CHECK(ab.u == doctest::Approx(ba.u));
  CHECK(ab.p_two_sided == doctest::Approx(ba.p_two_sided));
  CHECK_FALSE(ab.exact);  // ties force the normal path
  CHECK(ab.p_two_sided > 0);
  CHECK(ab.p_two_sided <= 1);
}

TEST_CASE("mann-whitney normal approximation tracks exact p for groups of 3+") {
  // For groups smaller than 3 the normal approximation is off by more than
  // 0.05 no matter the correction (e.g. {1,2} vs {3,4}: exact 1/3 vs 0.245),
  // so the consistency property is checked from 3 per side upwards.
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> value(0.0, 1000.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n_a = 3 + rng() % 3;
    std::size_t n_b = 3 + rng() % std::min<std::size_t>(3, 12 - 3 - n_a + 1);
    if (n_a + n_b > 12) continue;
    std::set<double> used;
    std::vector<double> a, b;
    auto fresh_value = [&] {
      double v = value(rng);
      while (used.count(v) > 0) v = value(rng);
      used.insert(v);
      return v;
    };
    for (std::size_t i = 0; i < n_a; ++i) a.push_back(fresh_value());
    for (std::size_t i = 0; i < n_b; ++i) b.push_back(fresh_value());

    auto exact = stats::mann_whitney_u(a, b);
    REQUIRE(exact.exact);
    // Force the approximate path by appending a far-away tied pair? No:
    // call the internals indirectly by growing the sample is not possible,
    // so recompute the approximation through a 17-value padded variant is
    // avoided; instead compare against the closed-form normal p.
    double n = static_cast<double>(n_a + n_b);
    double mu = static_cast<double>(n_a * n_b) / 2.0;
    double var = static_cast<double>(n_a * n_b) * (n + 1.0) / 12.0;
    double z = std::max(0.0, std::abs(exact.u - mu) - 0.5) / std::sqrt(var);
    double p_approx = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    INFO("n_a=", n_a, " n_b=", n_b, " exact=", exact.p_two_sided, " approx=", p_approx);
    CHECK(std::abs(exact.p_two_sided - p_approx) <= 0.05);
  }
}

TEST_CASE("mann-whitney separated sigma sets are strongly significant") {
  // Mirrors the human-vs-model comparison shape: clearly separated score
  // distributions must come out far below the 0.001 threshold.
  std::vector<double> humans, model;
  std::mt19937 rng(2025);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  for (int i = 0; i < 40; ++i) {
    humans.push_back(2.17 + jitter(rng));
    model.push_back(1.48 + jitter(rng));
  }
  auto result = stats::mann_whitney_u(humans, model);
  CHECK(result.p_two_sided < 0.001);
}
