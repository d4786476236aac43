#include "corex/anchor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corex/error.hpp"

namespace corex {

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

// Entropy of a two-outcome split given by counts.
double binary_entropy(double a, double b) {
  const double t = a + b;
  if (t <= 0.0) return 0.0;
  return -(plogp(a / t) + plogp(b / t));
}

}  // namespace

ResolvedAnchors::ResolvedAnchors(std::vector<AnchorEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const AnchorEntry& a, const AnchorEntry& b) {
    return a.word != b.word ? a.word < b.word : a.topic < b.topic;
  });
  for (const auto& e : entries) {
    if (!entries_.empty() && entries_.back().word == e.word && entries_.back().topic == e.topic) {
      entries_.back().strength = std::max(entries_.back().strength, e.strength);
    } else {
      entries_.push_back(e);
    }
  }
}

bool ResolvedAnchors::is_anchored(std::size_t word, std::size_t topic) const {
  return std::binary_search(entries_.begin(), entries_.end(), AnchorEntry{word, topic, 0.0},
                            [](const AnchorEntry& a, const AnchorEntry& b) {
                              return a.word != b.word ? a.word < b.word : a.topic < b.topic;
                            });
}

ResolvedAnchors ResolvedAnchors::remap_topics(std::span<const std::size_t> new_index) const {
  std::vector<AnchorEntry> out = entries_;
  for (auto& e : out) e.topic = new_index[e.topic];
  return ResolvedAnchors(std::move(out));
}

ResolvedAnchors resolve_anchors(const AnchorSpec& spec, const Vocabulary& vocab,
                                std::size_t n_topics) {
  std::vector<AnchorEntry> entries;
  std::vector<std::string> missing;
  for (std::size_t b = 0; b < spec.bindings.size(); ++b) {
    const auto& binding = spec.bindings[b];
    if (binding.topic >= n_topics) {
      throw InvalidArgument("anchor binding " + std::to_string(b) + ": topic " +
                            std::to_string(binding.topic) + " >= number of topics " +
                            std::to_string(n_topics));
    }
    if (!(binding.strength >= 1.0) || !std::isfinite(binding.strength)) {
      throw InvalidArgument("anchor binding " + std::to_string(b) + ": strength " +
                            std::to_string(binding.strength) + " < 1");
    }
    for (const auto& w : binding.words) {
      const auto id = vocab.find(w);
      if (id < 0) {
        missing.push_back(w);
        continue;
      }
      entries.push_back({static_cast<std::size_t>(id), binding.topic, binding.strength});
    }
  }
  if (!missing.empty()) {
    std::string msg = "anchor words not in vocabulary:";
    for (const auto& w : missing) msg += " " + w;
    throw InvalidArgument(msg);
  }
  return ResolvedAnchors(std::move(entries));
}

void apply_anchors(Matrix& alpha, const ResolvedAnchors& anchors) {
  for (const auto& e : anchors.entries()) {
    alpha(static_cast<Eigen::Index>(e.word), static_cast<Eigen::Index>(e.topic)) = e.strength;
  }
}

AnchorSpec parse_anchor_json(const std::string& text, double default_strength) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("anchor file: ") + e.what(), e.byte);
  }
  if (!doc.is_array()) throw InvalidArgument("anchor file: expected a JSON array of bindings");
  AnchorSpec spec;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("topic") || !item.contains("words")) {
      throw InvalidArgument("anchor file: each binding needs \"topic\" and \"words\"");
    }
    AnchorBinding b;
    const auto& topic = item.at("topic");
    if (!topic.is_number_integer() || topic.get<long long>() < 0) {
      throw InvalidArgument("anchor file: \"topic\" must be a non-negative integer");
    }
    b.topic = topic.get<std::size_t>();
    const auto& words = item.at("words");
    if (!words.is_array()) throw InvalidArgument("anchor file: \"words\" must be an array");
    for (const auto& w : words) {
      if (!w.is_string()) throw InvalidArgument("anchor file: words must be strings");
      b.words.push_back(w.get<std::string>());
    }
    b.strength = default_strength;
    if (item.contains("strength")) {
      if (!item.at("strength").is_number()) {
        throw InvalidArgument("anchor file: \"strength\" must be a number");
      }
      b.strength = item.at("strength").get<double>();
    }
    spec.bindings.push_back(std::move(b));
  }
  return spec;
}

AnchorSpec load_anchor_file(const std::string& path, double default_strength) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read anchor file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_anchor_json(ss.str(), default_strength);
}

std::string anchor_spec_to_json(const AnchorSpec& spec) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& b : spec.bindings) {
    doc.push_back({{"topic", b.topic}, {"words", b.words}, {"strength", b.strength}});
  }
  return doc.dump(2);
}

double label_word_information(std::size_t n11, std::size_t n10, std::size_t n01,
                              std::size_t n00) {
  const double a = static_cast<double>(n11), b = static_cast<double>(n10);
  const double c = static_cast<double>(n01), d = static_cast<double>(n00);
  const double total = a + b + c + d;
  if (total <= 0.0) return 0.0;
  const double h_label = binary_entropy(a + b, c + d);
  // H(L | w): split by word present (a, c) and absent (b, d).
  const double h_given_word = ((a + c) / total) * binary_entropy(a, c) +
                              ((b + d) / total) * binary_entropy(b, d);
  return h_label - h_given_word;
}

std::vector<std::vector<RankedWord>> select_anchor_words(const SparseBinaryMatrix& data,
                                                         std::span<const std::size_t> labels,
                                                         const Vocabulary& vocab,
                                                         std::size_t top_k,
                                                         bool filter_ambiguous) {
  if (labels.size() != data.n_docs()) {
    throw InvalidArgument("label count " + std::to_string(labels.size()) +
                          " != document count " + std::to_string(data.n_docs()));
  }
  if (top_k < 1) throw InvalidArgument("top_k must be >= 1");
  if (vocab.size() != data.n_words()) throw InvalidArgument("vocabulary does not match data");

  std::size_t n_labels = 0;
  for (auto l : labels) n_labels = std::max(n_labels, l + 1);
  std::vector<std::size_t> label_size(n_labels, 0);
  for (auto l : labels) ++label_size[l];

  const std::size_t N = data.n_docs();
  std::vector<std::vector<RankedWord>> out(n_labels);
  std::vector<std::size_t> in_label(n_labels);
  for (std::size_t w = 0; w < data.n_words(); ++w) {
    std::fill(in_label.begin(), in_label.end(), 0);
    for (auto d : data.docs_with(w)) ++in_label[labels[d]];
    const std::size_t df = data.doc_freq(w);
    for (std::size_t L = 0; L < n_labels; ++L) {
      const std::size_t n11 = in_label[L];
      const std::size_t n10 = label_size[L] - n11;
      const std::size_t n01 = df - n11;
      const std::size_t n00 = N - label_size[L] - n01;
      out[L].push_back({w, label_word_information(n11, n10, n01, n00)});
    }
  }

  for (auto& ranked : out) {
    std::sort(ranked.begin(), ranked.end(), [&](const RankedWord& a, const RankedWord& b) {
      return a.mi != b.mi ? a.mi > b.mi : vocab.term(a.word) < vocab.term(b.word);
    });
    if (ranked.size() > top_k) ranked.resize(top_k);
  }

  if (filter_ambiguous) {
    std::map<std::size_t, int> seen;
    for (const auto& ranked : out) {
      for (const auto& r : ranked) ++seen[r.word];
    }
    for (auto& ranked : out) {
      std::erase_if(ranked, [&](const RankedWord& r) { return seen[r.word] > 1; });
    }
  }
  return out;
}

}  // namespace corex
