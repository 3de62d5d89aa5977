#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace col {

enum class ClassifierMode { unsupervised, supervised };

using Histogram = std::vector<std::uint64_t>;

struct Posterior {
  // Sorted by class name.
  std::map<std::string, double> probabilities;
  // Set when the classifier had no evidence and returned a uniform answer.
  bool uniform_fallback = false;

  double at(const std::string& cls) const { return probabilities.at(cls); }
  // Class with the highest probability; ties go to the first name.
  std::pair<std::string, double> best() const;
};

// One classifier per feature. Unsupervised mode keeps a single histogram over
// the feature's bins; supervised mode keeps one histogram per class of the
// owning concept. Class priors are the per-class observation totals.
class HistogramClassifier {
 public:
  HistogramClassifier(std::string id, std::string feature, std::vector<std::string> bins,
                      ClassifierMode mode, std::vector<std::string> classes = {},
                      double alpha = 1.0);

  const std::string& id() const { return id_; }
  const std::string& feature() const { return feature_; }
  ClassifierMode mode() const { return mode_; }
  const std::vector<std::string>& bins() const { return bins_; }
  double alpha() const { return alpha_; }
  void set_alpha(double alpha);

  // Throws UnknownValue when `label` is not a bin.
  std::size_t bin_index(std::string_view label) const;

  void observe(std::string_view label, std::optional<std::string_view> cls = std::nullopt);
  Posterior classify(std::string_view label) const;

  void add_bin(std::string label);
  void add_class(std::string name);
  void remove_class(const std::string& name);
  std::vector<std::string> classes() const;

  // Unsupervised histogram, or the per-class histograms in supervised mode.
  const Histogram& counts() const { return counts_; }
  const std::map<std::string, Histogram>& class_histograms() const { return by_class_; }
  void set_counts(Histogram counts);
  void set_class_counts(const std::string& cls, Histogram counts);

  // Sum over classes (supervised) or the single histogram.
  Histogram lifetime() const;
  std::uint64_t total() const;
  std::uint64_t class_total(const std::string& cls) const;

  friend bool operator==(const HistogramClassifier&, const HistogramClassifier&) = default;

 private:
  std::string id_;
  std::string feature_;
  std::vector<std::string> bins_;
  ClassifierMode mode_;
  double alpha_;
  Histogram counts_;
  std::map<std::string, Histogram> by_class_;
};

// Shannon entropy in bits; 0 for an empty histogram.
double entropy(std::span<const std::uint64_t> histogram);
double entropy(const HistogramClassifier& classifier);

// Product-rule combination in log space. Uniform-fallback posteriors carry no
// evidence and are skipped. Throws NoEvidence on an empty list or when the
// product vanishes for every class, ClassSetMismatch on differing class sets.
Posterior combine(std::span<const Posterior> posteriors);

// True iff the entropy of the window's histogram differs from the lifetime
// entropy by more than `threshold` bits.
inline constexpr double kDefaultDriftThreshold = 0.25;
bool drift_detect(const HistogramClassifier& classifier, std::span<const std::string> window,
                  double threshold = kDefaultDriftThreshold);

struct ClassProposal {
  std::string best_class;
  double best_probability = 0.0;
  std::string suggested_name;
};

// Emits a proposal iff no class reaches the novelty threshold.
std::optional<ClassProposal> propose_new_class(const Posterior& posterior, double threshold);

}  // namespace col
