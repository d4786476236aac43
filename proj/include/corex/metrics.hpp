#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corex/anchor.hpp"
#include "corex/corpus.hpp"
#include "corex/model.hpp"

namespace corex {

/// Member words of `topic` ranked by I(X_i : Y_topic), descending, ties by
/// term. A word is a member when its weight is >= 1, i.e. it is the argmax
/// topic for that word or it is anchored there.
std::vector<RankedWord> top_words(const FittedModel& model, std::size_t topic, std::size_t count);

/// UMass coherence, sum over ordered pairs l < k of
/// log((D(w_k, w_l) + 1) / D(w_l)), D counting documents.
double umass_coherence(std::span<const std::size_t> words, const SparseBinaryMatrix& data);

// Hard clustering: argmax_j p(y_j = 1 | x), ties to the lowest topic.
std::vector<std::size_t> cluster_documents(const Matrix& p_topic);
std::vector<std::size_t> cluster_documents(const FittedModel& model, const SparseBinaryMatrix& data);

// 1 - H(truth | pred) / H(truth); 1 when H(truth) = 0.
double homogeneity(std::span<const std::size_t> pred, std::span<const std::size_t> truth);

double mutual_information(std::span<const std::size_t> a, std::span<const std::size_t> b);

// E[I(a; b)] when b is randomly permuted, for the given cluster sizes.
double expected_mutual_information(std::span<const std::size_t> a_sizes,
                                   std::span<const std::size_t> b_sizes, std::size_t n);

/// Adjusted mutual information normalized by max(H(pred), H(truth)):
/// (I - E[I]) / (max(H) - E[I]). Both partitions single-cluster gives 1.
double adjusted_mutual_info(std::span<const std::size_t> pred, std::span<const std::size_t> truth);

struct ClusteringResult {
  std::vector<std::size_t> assignments;
  double homogeneity = 0.0;
  double ami = 0.0;
};

ClusteringResult evaluate_clustering(std::vector<std::size_t> assignments,
                                     std::span<const std::size_t> truth);

// Interns string labels in order of first appearance sorted lexicographically.
// Lines carrying more than one label are rejected.
struct LabelSet {
  std::vector<std::string> names;
  std::vector<std::size_t> ids;
};
LabelSet parse_labels(const std::vector<std::string>& lines);
LabelSet load_labels(const std::string& path);

struct TopicCountPoint {
  std::size_t n_topics = 0;
  double total_tc = 0.0;
  double weakest_tc = 0.0;
};

struct TopicCountCurve {
  std::vector<TopicCountPoint> points;
  // Smallest m whose weakest topic explains < 1% of the total.
  std::optional<std::size_t> flagged;
};

TopicCountCurve topic_count_curve(const SparseBinaryMatrix& data, const Vocabulary& vocab,
                                  const ModelConfig& config,
                                  std::span<const std::size_t> m_values);

struct TopicReport {
  std::size_t rank = 0;
  double tc = 0.0;
  std::vector<RankedWord> words;
  std::optional<double> coherence;  // absent with fewer than two words
};

struct EvalReport {
  std::vector<TopicReport> topics;
  double mean_coherence = 0.0;
  std::optional<ClusteringResult> clustering;
};

EvalReport evaluate(const FittedModel& model, const SparseBinaryMatrix& data,
                    std::size_t top_count, const std::vector<std::size_t>* truth);

std::string eval_report_json(const EvalReport& report, const FittedModel& model);
std::string eval_report_csv(const EvalReport& report, const FittedModel& model);

}  // namespace corex
