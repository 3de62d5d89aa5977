#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "col/classifier.hpp"
#include "col/error.hpp"

using col::ClassifierMode;
using col::HistogramClassifier;
using col::Posterior;

namespace {

std::vector<std::string> labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("b" + std::to_string(i));
  return out;
}

std::vector<std::string> class_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('A' + i)));
  return out;
}

// Bayes rule straight from raw counts: smoothed class-conditional frequency
// times the empirical class frequency, normalized.
std::vector<long double> bayes_oracle(const std::vector<std::vector<std::uint64_t>>& counts, std::size_t bin,
                                      long double alpha) {
  const std::size_t k = counts.size();
  long double grand = 0;
  for (const auto& h : counts) {
    for (auto c : h) grand += c;
  }
  std::vector<long double> out(k);
  if (grand == 0) {
    std::fill(out.begin(), out.end(), 1.0L / k);
    return out;
  }
  long double z = 0;
  for (std::size_t c = 0; c < k; ++c) {
    long double n = 0;
    for (auto x : counts[c]) n += x;
    out[c] = (counts[c][bin] + alpha) / (n + alpha * counts[c].size()) * (n / grand);
    z += out[c];
  }
  for (auto& p : out) p /= z;
  return out;
}

// Every way to spread at most `budget` observations over `cells` cells.
void for_each_filling(std::size_t cells, int budget, const std::function<void(const std::vector<std::uint64_t>&)>& fn) {
  std::vector<std::uint64_t> cur(cells, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == cells) {
      fn(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[i] = static_cast<std::uint64_t>(v);
      rec(i + 1, left - v);
    }
    cur[i] = 0;
  };
  rec(0, budget);
}

double sum(const Posterior& p) {
  double s = 0;
  for (const auto& [k, v] : p.probabilities) s += v;
  return s;
}

Posterior posterior(std::initializer_list<std::pair<const std::string, double>> list, bool fallback = false) {
  Posterior p;
  p.probabilities = list;
  p.uniform_fallback = fallback;
  return p;
}

}  // namespace

TEST_CASE("observe counts one bin per call") {
  HistogramClassifier c("e1", "Type of material", {"Mineral", "Synthetic"}, ClassifierMode::supervised, {"Glasses"});
  c.observe("Mineral", std::string_view("Glasses"));
  CHECK(c.class_histograms().at("Glasses") == col::Histogram{1, 0});
  CHECK_THROWS_AS(c.observe("Wood", std::string_view("Glasses")), col::Error);
  try {
    c.observe("Mineral");
  } catch (const col::Error& e) {
    CHECK(e.code() == col::ErrorCode::MissingLabel);
  }

  HistogramClassifier u("e2", "Breakable", {"No", "Yes"}, ClassifierMode::unsupervised);
  for (int i = 0; i < 100; ++i) u.observe(i % 3 ? "Yes" : "No");
  CHECK(u.total() == 100);
  try {
    u.classify("Yes");
    FAIL("expected ModeError");
  } catch (const col::Error& e) {
    CHECK(e.code() == col::ErrorCode::ModeError);
  }
}

TEST_CASE("classify: worked example") {
  HistogramClassifier c("e1", "f", {"Yes", "No"}, ClassifierMode::supervised, {"A", "B"});
  c.set_class_counts("A", {3, 1});
  c.set_class_counts("B", {0, 4});
  const auto p = c.classify("Yes");
  CHECK(p.at("A") == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(p.at("B") == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_FALSE(p.uniform_fallback);
}

TEST_CASE("classify: empty and single-class cases") {
  HistogramClassifier empty("e1", "f", {"Yes", "No"}, ClassifierMode::supervised, {"A", "B"});
  auto p = empty.classify("No");
  CHECK(p.uniform_fallback);
  CHECK(p.at("A") == 0.5);
  CHECK(p.at("B") == 0.5);

  HistogramClassifier single("e1", "f", {"Yes", "No"}, ClassifierMode::supervised, {"A"});
  single.observe("No", std::string_view("A"));
  p = single.classify("Yes");
  CHECK(p.at("A") == 1.0);
}

TEST_CASE("classify agrees with the brute-force Bayes oracle") {
  std::size_t states = 0;
  for (std::size_t k = 1; k <= 3; ++k) {
    for (std::size_t bins = 1; bins <= 4; ++bins) {
      const auto names = class_names(k);
      const auto axis = labels(bins);
      for_each_filling(k * bins, 10, [&](const std::vector<std::uint64_t>& flat) {
        std::vector<std::vector<std::uint64_t>> counts(k);
        HistogramClassifier c("e1", "f", axis, ClassifierMode::supervised, names);
        for (std::size_t ci = 0; ci < k; ++ci) {
          counts[ci].assign(flat.begin() + static_cast<long>(ci * bins), flat.begin() + static_cast<long>((ci + 1) * bins));
          c.set_class_counts(names[ci], counts[ci]);
        }
        ++states;
        for (std::size_t b = 0; b < bins; ++b) {
          const auto got = c.classify(axis[b]);
          const auto want = bayes_oracle(counts, b, 1.0L);
          for (std::size_t ci = 0; ci < k; ++ci) {
            if (std::fabs(static_cast<long double>(got.at(names[ci])) - want[ci]) > 1e-12L) {
              FAIL_CHECK("mismatch k=" << k << " bins=" << bins << " bin=" << b);
            }
          }
          if (std::fabs(sum(got) - 1.0) > 1e-9) FAIL_CHECK("posterior does not sum to 1");
        }
        const double h = col::entropy(c);
        if (h < 0 || h > std::log2(static_cast<double>(bins)) + 1e-12) FAIL_CHECK("entropy out of bounds");
      });
    }
  }
  CHECK(states > 100000);
}

TEST_CASE("entropy") {
  CHECK(col::entropy(col::Histogram{5, 5}) == doctest::Approx(1.0));
  CHECK(col::entropy(col::Histogram{7, 0}) == 0.0);
  CHECK(col::entropy(col::Histogram{0, 0}) == 0.0);
  const double oracle = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
  CHECK(col::entropy(col::Histogram{3, 1}) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(col::entropy(col::Histogram{3, 1}) == doctest::Approx(0.8113).epsilon(1e-4));
  // Maximal exactly on equal bins.
  CHECK(col::entropy(col::Histogram{2, 2, 2, 2}) == doctest::Approx(2.0));
  CHECK(col::entropy(col::Histogram{2, 2, 2, 3}) < 2.0);
}

TEST_CASE("combine") {
  const auto a = posterior({{"A", 0.8}, {"B", 0.2}});
  const auto b = posterior({{"A", 0.9}, {"B", 0.1}});
  const auto half = posterior({{"A", 0.5}, {"B", 0.5}});
  const auto fallback = posterior({{"A", 0.5}, {"B", 0.5}}, true);

  auto c = col::combine(std::vector{a, b});
  CHECK(c.at("A") == doctest::Approx(0.72 / 0.74).epsilon(1e-12));
  CHECK(c.at("B") == doctest::Approx(0.02 / 0.74).epsilon(1e-12));
  CHECK(c.at("A") == doctest::Approx(0.973).epsilon(1e-3));

  c = col::combine(std::vector{a, half});
  CHECK(c.at("A") == doctest::Approx(0.8).epsilon(1e-12));
  c = col::combine(std::vector{a, fallback, b});
  const auto without = col::combine(std::vector{a, b});
  CHECK(c.at("A") == without.at("A"));
  CHECK(col::combine(std::vector{fallback}).uniform_fallback);

  try {
    col::combine(std::vector<Posterior>{});
    FAIL("expected NoEvidence");
  } catch (const col::Error& e) {
    CHECK(e.code() == col::ErrorCode::NoEvidence);
  }
  try {
    col::combine(std::vector{a, posterior({{"A", 0.5}, {"C", 0.5}})});
    FAIL("expected ClassSetMismatch");
  } catch (const col::Error& e) {
    CHECK(e.code() == col::ErrorCode::ClassSetMismatch);
  }
}

TEST_CASE("combine is permutation invariant and skips fallbacks") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int round = 0; round < 300; ++round) {
    const std::size_t k = 2 + rng() % 2, n = 1 + rng() % 4;
    std::vector<Posterior> list;
    for (std::size_t i = 0; i < n; ++i) {
      Posterior p;
      double z = 0;
      for (std::size_t c = 0; c < k; ++c) z += p.probabilities[std::string(1, char('A' + c))] = u(rng);
      for (auto& [cls, v] : p.probabilities) v /= z;
      list.push_back(p);
    }
    Posterior fb;
    for (std::size_t c = 0; c < k; ++c) fb.probabilities[std::string(1, char('A' + c))] = 1.0 / k;
    fb.uniform_fallback = true;

    const auto reference = col::combine(list);
    CHECK(std::fabs(sum(reference) - 1.0) < 1e-9);
    auto with_fb = list;
    with_fb.push_back(fb);
    std::vector<std::size_t> order(with_fb.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    do {
      std::vector<Posterior> perm;
      for (auto i : order) perm.push_back(with_fb[i]);
      const auto got = col::combine(perm);
      for (const auto& [cls, v] : reference.probabilities) {
        if (std::fabs(got.at(cls) - v) > 1e-12) FAIL_CHECK("order changed the result");
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST_CASE("drift") {
  HistogramClassifier c("e1", "f", {"x", "y"}, ClassifierMode::unsupervised);
  c.set_counts({50, 50});
  const std::vector<std::string> same{"x", "y", "x", "y"};
  const std::vector<std::string> skewed{"x", "x", "x", "x"};
  CHECK_FALSE(col::drift_detect(c, same, 0.25));
  CHECK(col::drift_detect(c, skewed, 0.5));
  CHECK_FALSE(col::drift_detect(c, skewed, std::numeric_limits<double>::infinity()));
  CHECK_FALSE(col::drift_detect(c, skewed, 1.0));  // gap is exactly 1 bit
}

TEST_CASE("new class proposals") {
  CHECK_FALSE(col::propose_new_class(posterior({{"A", 0.97}, {"B", 0.03}}), 0.5));
  const auto uniform = posterior({{"A", 0.25}, {"B", 0.25}, {"C", 0.25}, {"D", 0.25}});
  const auto p = col::propose_new_class(uniform, 0.5);
  REQUIRE(p);
  CHECK(p->best_probability == 0.25);
  CHECK(p->suggested_name == "C5");
  CHECK_FALSE(col::propose_new_class(uniform, 0.0));
}

TEST_CASE("classes can be added and removed") {
  HistogramClassifier c("e1", "f", {"x", "y"}, ClassifierMode::supervised, {"A", "B"});
  c.set_class_counts("A", {3, 1});
  c.set_class_counts("B", {1, 3});
  const auto before = c.classify("x");
  c.add_class("C");
  CHECK(c.class_histograms().at("C") == col::Histogram{0, 0});
  // An untouched class has zero prior and leaves the others' ratios alone.
  const auto after = c.classify("x");
  CHECK(after.at("C") == 0.0);
  CHECK(after.at("A") / after.at("B") == doctest::Approx(before.at("A") / before.at("B")));
  c.remove_class("C");
  CHECK(c.classes() == std::vector<std::string>{"A", "B"});
}
