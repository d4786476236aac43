#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "corex/anchor.hpp"
#include "corex/corpus.hpp"
#include "corex/types.hpp"

namespace corex {

/// Sharpening schedule for the word-to-topic weights. Before `hard_after`
/// the weights are a softmax over mutual information with sharpness
/// lambda_start * lambda_growth^iter; from `hard_after` on each word belongs
/// to exactly one topic.
struct AnnealSchedule {
  double lambda_start = 1.0;
  double lambda_growth = 1.3;
  int hard_after = 30;

  double lambda_at(int iter) const;
};

struct ModelConfig {
  std::size_t n_topics = 0;
  int max_iter = 200;
  double tol = 1e-6;  // relative change of the total objective
  int n_restarts = 1;
  AnnealSchedule anneal;
  std::uint64_t seed = 0;
  double smoothing = 1e-3;   // pseudo-count per cell of p(x_i | y_j)
  double prob_clip = 1e-10;  // probabilities live in [clip, 1 - clip]

  void validate() const;
};

/// Estimated marginals, all stored as natural-log probabilities.
/// log_p_y is m x 2 (column = state of y). The conditional tables hold
/// log p(x_i = 1 | y_j = y) as n x m matrices; log p(x_i = 0 | .) is always
/// derived from them with log1m_exp.
struct MarginalTable {
  Matrix log_p_y;
  Matrix log_p_x1_given_y0;
  Matrix log_p_x1_given_y1;
  Vector log_p_x1;  // empirical doc_freq / N

  std::size_t n_words() const { return static_cast<std::size_t>(log_p_x1.size()); }
  std::size_t n_topics() const { return static_cast<std::size_t>(log_p_y.rows()); }
  const Matrix& log_p_x1_given(int y) const { return y ? log_p_x1_given_y1 : log_p_x1_given_y0; }
};

// log(1 - exp(x)) for x < 0.
double log1m_exp(double x);

/// log p(y_j = y | x^l) for both states, N x m each.
struct Posteriors {
  Matrix log_p0;
  Matrix log_p1;

  std::size_t n_docs() const { return static_cast<std::size_t>(log_p1.rows()); }
  std::size_t n_topics() const { return static_cast<std::size_t>(log_p1.cols()); }
};

struct ModelState {
  Matrix alpha;  // n x m
  Posteriors posteriors;
  MarginalTable marginals;
  ResolvedAnchors anchors;
  std::vector<double> objective_trace;
};

struct TopicObjective {
  std::vector<double> tc;  // per topic
  double total = 0.0;
};

struct FitSummary {
  int iterations = 0;
  bool converged = false;
  std::size_t selected_restart = 0;
  std::vector<double> restart_objectives;
};

/// A trained model. Topics are sorted by total correlation explained,
/// descending; `topic_order[k]` is the pre-sort index of topic k and the
/// anchors are expressed in sorted indices.
struct FittedModel {
  Vocabulary vocab;
  std::size_t n_docs = 0;
  ModelConfig config;
  MarginalTable marginals;
  Matrix alpha;
  std::vector<double> tc;
  double total_tc = 0.0;
  std::vector<std::size_t> topic_order;
  ResolvedAnchors anchors;
  FitSummary summary;

  std::size_t n_topics() const { return tc.size(); }
  std::size_t n_words() const { return vocab.size(); }
};

struct RestartSummary {
  std::uint64_t seed = 0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct FitResult {
  FittedModel model;
  Posteriors posteriors;  // training posteriors, topic order of `model`
  std::vector<RestartSummary> restarts;
};

enum class PosteriorPath { Sparse, Dense };

// Random p(y=1|x) ~ U(0,1) per (doc, topic) from `seed`, alpha = 1/m
// (anchored cells set to their strength), marginals from those posteriors.
ModelState init_state(const SparseBinaryMatrix& data, const ModelConfig& config,
                      std::uint64_t seed, const ResolvedAnchors& anchors = {});

/// p(y_j) = mean posterior; p(x_i=1|y_j) smoothed by `smoothing` per cell;
/// p(x_i=1) = doc_freq/N. Document sums run over nonzeros only.
MarginalTable compute_marginals(const Posteriors& posteriors, const SparseBinaryMatrix& data,
                                double smoothing, double prob_clip);

// n x m matrix of I(X_i : Y_j), with p(x_i) taken as the mixture
// sum_y p(x_i|y) p(y) so every entry is non-negative.
Matrix mutual_info_estimates(const MarginalTable& marginals);

Matrix update_alpha(const Matrix& mi, int iter, const AnnealSchedule& schedule,
                    const ResolvedAnchors& anchors = {});

// Reference evaluation: every (document, word) pair is visited.
Posteriors update_posteriors_dense(const MarginalTable& marginals, const Matrix& alpha,
                                   const SparseBinaryMatrix& data);

/// Same update, but each topic's all-words-absent baseline is computed once
/// and documents only add corrections for the words they contain.
Posteriors update_posteriors_sparse(const MarginalTable& marginals, const Matrix& alpha,
                                    const SparseBinaryMatrix& data);

// TC_j = sum_i alpha_ij I(X_i:Y_j) - I(X:Y_j), with I(X:Y_j) the average
// posterior/prior log ratio over documents.
TopicObjective objective(const MarginalTable& marginals, const Matrix& alpha,
                         const Posteriors& posteriors);

struct RunOptions {
  PosteriorPath path = PosteriorPath::Sparse;
  bool early_stop = true;
};

struct RestartRun {
  ModelState state;
  MarginalTable last_update_marginals;  // the marginals that produced state.posteriors
  TopicObjective final_objective;
  int iterations = 0;
  bool converged = false;
};

// One optimization run from `seed`. With early_stop = false exactly
// config.max_iter iterations are executed.
RestartRun run_restart(const SparseBinaryMatrix& data, const ModelConfig& config,
                       const ResolvedAnchors& anchors, std::uint64_t seed,
                       const RunOptions& options = {});

/// Runs config.n_restarts optimizations (seeds seed, seed+1, ...) and keeps
/// the one with the largest total objective.
FitResult fit(const SparseBinaryMatrix& data, const Vocabulary& vocab, const ModelConfig& config,
              const AnchorSpec& anchors = {});

// Posterior evaluation with frozen model parameters.
Posteriors transform_log(const FittedModel& model, const SparseBinaryMatrix& data,
                         PosteriorPath path = PosteriorPath::Sparse);
// N x m matrix of p(y_j = 1 | x^l).
Matrix transform(const FittedModel& model, const SparseBinaryMatrix& data);

// Swap the two states of topic j.
void flip_topic(MarginalTable& marginals, std::size_t j);
void flip_topic(Posteriors& posteriors, std::size_t j);

// Validates the MarginalTable invariants for m topics over n words; throws
// CorruptFile with a description on failure.
void check_marginals(const MarginalTable& marginals, double prob_clip);

}  // namespace corex
