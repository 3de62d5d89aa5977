#include "col/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "col/error.hpp"

namespace col {

std::pair<std::string, double> Posterior::best() const {
  std::pair<std::string, double> out{"", -1.0};
  for (const auto& [cls, p] : probabilities) {
    if (p > out.second) out = {cls, p};
  }
  return out;
}

HistogramClassifier::HistogramClassifier(std::string id, std::string feature,
                                         std::vector<std::string> bins, ClassifierMode mode,
                                         std::vector<std::string> classes, double alpha)
    : id_(std::move(id)),
      feature_(std::move(feature)),
      bins_(std::move(bins)),
      mode_(mode),
      alpha_(alpha) {
  if (mode_ == ClassifierMode::unsupervised) {
    counts_.assign(bins_.size(), 0);
  } else {
    for (auto& c : classes) by_class_.emplace(std::move(c), Histogram(bins_.size(), 0));
  }
}

void HistogramClassifier::set_alpha(double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::ModeError, "smoothing must be positive");
  alpha_ = alpha;
}

std::size_t HistogramClassifier::bin_index(std::string_view label) const {
  auto it = std::find(bins_.begin(), bins_.end(), label);
  if (it == bins_.end()) {
    throw Error(ErrorCode::UnknownValue,
                "value " + std::string(label) + " is not a bin of " + feature_);
  }
  return static_cast<std::size_t>(it - bins_.begin());
}

void HistogramClassifier::observe(std::string_view label, std::optional<std::string_view> cls) {
  const std::size_t bin = bin_index(label);
  if (mode_ == ClassifierMode::unsupervised) {
    ++counts_[bin];
    return;
  }
  if (!cls) throw Error(ErrorCode::MissingLabel, "supervised classifier " + id_ + " needs a class");
  auto it = by_class_.find(std::string(*cls));
  if (it == by_class_.end()) {
    throw Error(ErrorCode::UnknownClass, "classifier " + id_ + " has no class " + std::string(*cls));
  }
  ++it->second[bin];
}

Posterior HistogramClassifier::classify(std::string_view label) const {
  if (mode_ != ClassifierMode::supervised) {
    throw Error(ErrorCode::ModeError, "classifier " + id_ + " is unsupervised");
  }
  if (by_class_.empty()) throw Error(ErrorCode::ModeError, "classifier " + id_ + " has no classes");
  const std::size_t bin = bin_index(label);

  Posterior out;
  std::uint64_t grand = 0;
  for (const auto& [cls, h] : by_class_) grand += std::accumulate(h.begin(), h.end(), std::uint64_t{0});
  if (grand == 0) {
    out.uniform_fallback = true;
    const double p = 1.0 / static_cast<double>(by_class_.size());
    for (const auto& [cls, h] : by_class_) out.probabilities[cls] = p;
    return out;
  }

  const double domain = static_cast<double>(bins_.size());
  double norm = 0.0;
  for (const auto& [cls, h] : by_class_) {
    const double total = static_cast<double>(std::accumulate(h.begin(), h.end(), std::uint64_t{0}));
    const double likelihood = (static_cast<double>(h[bin]) + alpha_) / (total + alpha_ * domain);
    const double prior = total / static_cast<double>(grand);
    const double score = likelihood * prior;
    out.probabilities[cls] = score;
    norm += score;
  }
  for (auto& [cls, p] : out.probabilities) p /= norm;
  return out;
}

void HistogramClassifier::add_bin(std::string label) {
  if (std::find(bins_.begin(), bins_.end(), label) != bins_.end()) {
    throw Error(ErrorCode::DuplicateValue, label + " is already a bin of " + feature_);
  }
  bins_.push_back(std::move(label));
  counts_.resize(mode_ == ClassifierMode::unsupervised ? bins_.size() : 0, 0);
  for (auto& [cls, h] : by_class_) h.push_back(0);
}

void HistogramClassifier::add_class(std::string name) {
  if (mode_ != ClassifierMode::supervised) return;
  by_class_.emplace(std::move(name), Histogram(bins_.size(), 0));
}

void HistogramClassifier::remove_class(const std::string& name) { by_class_.erase(name); }

std::vector<std::string> HistogramClassifier::classes() const {
  std::vector<std::string> out;
  for (const auto& [cls, h] : by_class_) out.push_back(cls);
  return out;
}

void HistogramClassifier::set_counts(Histogram counts) {
  if (counts.size() != bins_.size()) throw Error(ErrorCode::FormatError, "histogram size mismatch");
  counts_ = std::move(counts);
}

void HistogramClassifier::set_class_counts(const std::string& cls, Histogram counts) {
  if (counts.size() != bins_.size()) throw Error(ErrorCode::FormatError, "histogram size mismatch");
  by_class_[cls] = std::move(counts);
}

Histogram HistogramClassifier::lifetime() const {
  if (mode_ == ClassifierMode::unsupervised) return counts_;
  Histogram sum(bins_.size(), 0);
  for (const auto& [cls, h] : by_class_) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += h[i];
  }
  return sum;
}

std::uint64_t HistogramClassifier::total() const {
  const Histogram h = lifetime();
  return std::accumulate(h.begin(), h.end(), std::uint64_t{0});
}

std::uint64_t HistogramClassifier::class_total(const std::string& cls) const {
  auto it = by_class_.find(cls);
  if (it == by_class_.end()) return 0;
  return std::accumulate(it->second.begin(), it->second.end(), std::uint64_t{0});
}

double entropy(std::span<const std::uint64_t> histogram) {
  const double total =
      static_cast<double>(std::accumulate(histogram.begin(), histogram.end(), std::uint64_t{0}));
  if (total == 0.0) return 0.0;
  double h = 0.0;
  for (std::uint64_t c : histogram) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double entropy(const HistogramClassifier& classifier) {
  const Histogram h = classifier.lifetime();
  return entropy(h);
}

Posterior combine(std::span<const Posterior> posteriors) {
  if (posteriors.empty()) throw Error(ErrorCode::NoEvidence, "nothing to combine");
  const auto& reference = posteriors.front().probabilities;
  for (const auto& p : posteriors) {
    if (p.probabilities.size() != reference.size() ||
        !std::equal(p.probabilities.begin(), p.probabilities.end(), reference.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; })) {
      throw Error(ErrorCode::ClassSetMismatch, "posteriors range over different classes");
    }
  }

  Posterior out;
  bool any_evidence = false;
  std::map<std::string, std::vector<double>> logs;
  for (const auto& p : posteriors) {
    if (p.uniform_fallback) continue;
    any_evidence = true;
    for (const auto& [cls, prob] : p.probabilities) {
      logs[cls].push_back(prob > 0.0 ? std::log(prob) : -std::numeric_limits<double>::infinity());
    }
  }
  if (!any_evidence) {
    out.uniform_fallback = true;
    for (const auto& [cls, prob] : reference) out.probabilities[cls] = 1.0 / static_cast<double>(reference.size());
    return out;
  }

  // Summing sorted terms keeps the result independent of input order.
  double peak = -std::numeric_limits<double>::infinity();
  std::map<std::string, double> sums;
  for (auto& [cls, terms] : logs) {
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += t;
    sums[cls] = s;
    peak = std::max(peak, s);
  }
  if (peak == -std::numeric_limits<double>::infinity()) {
    throw Error(ErrorCode::NoEvidence, "posteriors have disjoint support");
  }
  double norm = 0.0;
  for (const auto& [cls, s] : sums) {
    const double w = std::exp(s - peak);
    out.probabilities[cls] = w;
    norm += w;
  }
  for (auto& [cls, p] : out.probabilities) p /= norm;
  return out;
}

bool drift_detect(const HistogramClassifier& classifier, std::span<const std::string> window,
                  double threshold) {
  if (window.empty()) throw Error(ErrorCode::NoEvidence, "drift window is empty");
  Histogram recent(classifier.bins().size(), 0);
  for (const auto& label : window) ++recent[classifier.bin_index(label)];
  const double gap = std::fabs(entropy(recent) - entropy(classifier));
  return gap > threshold;
}

std::optional<ClassProposal> propose_new_class(const Posterior& posterior, double threshold) {
  if (posterior.probabilities.empty()) return std::nullopt;
  auto [cls, p] = posterior.best();
  if (!(p < threshold)) return std::nullopt;
  ClassProposal proposal{cls, p, {}};
  for (std::size_t n = posterior.probabilities.size() + 1;; ++n) {
    std::string name = "C" + std::to_string(n);
    if (!posterior.probabilities.contains(name)) {
      proposal.suggested_name = std::move(name);
      break;
    }
  }
  return proposal;
}

}  // namespace col
