#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "corex/corpus.hpp"
#include "corex/types.hpp"

namespace corex {

inline constexpr double kDefaultAnchorStrength = 2.0;

// Binds `words` to `topic` with strength beta >= 1.
struct AnchorBinding {
  std::size_t topic = 0;
  std::vector<std::string> words;
  double strength = kDefaultAnchorStrength;
};

// A word may be bound to several topics and a topic may receive many words.
struct AnchorSpec {
  std::vector<AnchorBinding> bindings;
  bool empty() const { return bindings.empty(); }
};

struct AnchorEntry {
  std::size_t word = 0;
  std::size_t topic = 0;
  double strength = kDefaultAnchorStrength;

  friend bool operator==(const AnchorEntry&, const AnchorEntry&) = default;
};

/// Anchor bindings resolved to (word id, topic) cells. Entries are sorted by
/// (word, topic) and unique; duplicate cells keep the largest strength.
class ResolvedAnchors {
 public:
  ResolvedAnchors() = default;
  explicit ResolvedAnchors(std::vector<AnchorEntry> entries);

  const std::vector<AnchorEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  bool is_anchored(std::size_t word, std::size_t topic) const;

  // Topic t becomes new_index[t].
  ResolvedAnchors remap_topics(std::span<const std::size_t> new_index) const;

  friend bool operator==(const ResolvedAnchors&, const ResolvedAnchors&) = default;

 private:
  std::vector<AnchorEntry> entries_;
};

// Throws InvalidArgument listing every unknown word, or naming the first
// binding with topic >= n_topics or strength < 1.
ResolvedAnchors resolve_anchors(const AnchorSpec& spec, const Vocabulary& vocab,
                                std::size_t n_topics);

// alpha(word, topic) := strength for every anchored cell.
void apply_anchors(Matrix& alpha, const ResolvedAnchors& anchors);

/// Parses `[{"topic": 0, "words": ["a", "b"], "strength": 2.0}, ...]`.
/// Bindings without "strength" get `default_strength`.
AnchorSpec parse_anchor_json(const std::string& text,
                             double default_strength = kDefaultAnchorStrength);
AnchorSpec load_anchor_file(const std::string& path,
                            double default_strength = kDefaultAnchorStrength);
std::string anchor_spec_to_json(const AnchorSpec& spec);

struct RankedWord {
  std::size_t word = 0;
  double mi = 0.0;
};

// I(L : w) = H(L) - H(L | w) from a 2x2 contingency of label membership
// (first index) and word presence (second index).
double label_word_information(std::size_t n11, std::size_t n10, std::size_t n01,
                              std::size_t n00);

/// For each label value (one-vs-rest), the top_k words by information gain
/// with the label, ties broken by term order of `vocab` names. With
/// `filter_ambiguous`, words that appear in more than one label's list are
/// removed from all lists.
std::vector<std::vector<RankedWord>> select_anchor_words(const SparseBinaryMatrix& data,
                                                         std::span<const std::size_t> labels,
                                                         const Vocabulary& vocab,
                                                         std::size_t top_k,
                                                         bool filter_ambiguous = false);

}  // namespace corex
