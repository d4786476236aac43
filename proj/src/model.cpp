#include "corex/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "corex/error.hpp"
#include "corex/parallel.hpp"

namespace corex {

namespace {

double clamp_prob(double p, double clip) { return std::clamp(p, clip, 1.0 - clip); }

double log_sum_exp2(double a, double b) {
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// Per-state log ratios log p(x_i = v | y_j = y) - log p(x_i = v), v in {0, 1}.
struct LogRatios {
  Matrix absent[2];   // v = 0
  Matrix present[2];  // v = 1
};

LogRatios log_ratios(const MarginalTable& mt) {
  const auto n = static_cast<Eigen::Index>(mt.n_words());
  const auto m = static_cast<Eigen::Index>(mt.n_topics());
  LogRatios r;
  for (int y = 0; y < 2; ++y) {
    const Matrix& l1 = mt.log_p_x1_given(y);
    r.absent[y].resize(n, m);
    r.present[y].resize(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lx1 = mt.log_p_x1(i);
      const double lx0 = log1m_exp(lx1);
      for (Eigen::Index j = 0; j < m; ++j) {
        r.present[y](i, j) = l1(i, j) - lx1;
        r.absent[y](i, j) = log1m_exp(l1(i, j)) - lx0;
      }
    }
  }
  return r;
}

void check_alignment(const MarginalTable& mt, const Matrix& alpha, const SparseBinaryMatrix& data) {
  if (data.n_words() != mt.n_words() || static_cast<std::size_t>(alpha.rows()) != mt.n_words() ||
      static_cast<std::size_t>(alpha.cols()) != mt.n_topics()) {
    throw InvalidArgument("dimension mismatch: data has " + std::to_string(data.n_words()) +
                          " words, model has " + std::to_string(mt.n_words()));
  }
}

// Normalizes the unnormalized log scores of one document in place.
void normalize_row(double* s0, double* s1, Eigen::Index m) {
  for (Eigen::Index j = 0; j < m; ++j) {
    const double z = log_sum_exp2(s0[j], s1[j]);
    s0[j] -= z;
    s1[j] -= z;
  }
}

// Polarity: y = 1 means the topic's words tend to be present.
void canonicalize_polarity(const Matrix& alpha, MarginalTable& mt, MarginalTable& used,
                           Posteriors& post) {
  for (Eigen::Index j = 0; j < alpha.cols(); ++j) {
    double score = 0.0;
    for (Eigen::Index i = 0; i < alpha.rows(); ++i) {
      if (alpha(i, j) == 0.0) continue;
      score += alpha(i, j) * (std::exp(mt.log_p_x1_given_y1(i, j)) -
                              std::exp(mt.log_p_x1_given_y0(i, j)));
    }
    if (score < 0.0) {
      const auto jj = static_cast<std::size_t>(j);
      flip_topic(mt, jj);
      flip_topic(used, jj);
      flip_topic(post, jj);
    }
  }
}

void permute_columns(Matrix& mat, std::span<const std::size_t> order) {
  Matrix out(mat.rows(), mat.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = mat.col(static_cast<Eigen::Index>(order[k]));
  }
  mat = std::move(out);
}

void permute_rows(Matrix& mat, std::span<const std::size_t> order) {
  Matrix out(mat.rows(), mat.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = mat.row(static_cast<Eigen::Index>(order[k]));
  }
  mat = std::move(out);
}

}  // namespace

double AnnealSchedule::lambda_at(int iter) const {
  return lambda_start * std::pow(lambda_growth, iter);
}

void ModelConfig::validate() const {
  if (n_topics < 1) throw InvalidArgument("n_topics must be >= 1");
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be > 0");
  if (n_restarts < 1) throw InvalidArgument("n_restarts must be >= 1");
  if (!(smoothing > 0.0)) throw InvalidArgument("smoothing must be > 0");
  if (!(prob_clip > 0.0 && prob_clip < 0.5)) throw InvalidArgument("prob_clip must be in (0, 0.5)");
  if (!(anneal.lambda_start > 0.0)) throw InvalidArgument("lambda_start must be > 0");
  if (!(anneal.lambda_growth >= 1.0)) throw InvalidArgument("lambda_growth must be >= 1");
  if (anneal.hard_after < 0 || anneal.hard_after > max_iter) {
    throw InvalidArgument("hard_after must be in [0, max_iter]");
  }
}

double log1m_exp(double x) {
  // Mächler's split keeps precision on both ends.
  return x > -M_LN2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

void flip_topic(MarginalTable& mt, std::size_t j) {
  const auto c = static_cast<Eigen::Index>(j);
  std::swap(mt.log_p_y(c, 0), mt.log_p_y(c, 1));
  mt.log_p_x1_given_y0.col(c).swap(mt.log_p_x1_given_y1.col(c));
}

void flip_topic(Posteriors& post, std::size_t j) {
  const auto c = static_cast<Eigen::Index>(j);
  post.log_p0.col(c).swap(post.log_p1.col(c));
}

ModelState init_state(const SparseBinaryMatrix& data, const ModelConfig& config,
                      std::uint64_t seed, const ResolvedAnchors& anchors) {
  config.validate();
  if (data.n_docs() == 0 || data.n_words() == 0) throw InvalidArgument("empty data");
  const auto N = static_cast<Eigen::Index>(data.n_docs());
  const auto n = static_cast<Eigen::Index>(data.n_words());
  const auto m = static_cast<Eigen::Index>(config.n_topics);

  ModelState state;
  Rng rng(seed);
  state.posteriors.log_p0.resize(N, m);
  state.posteriors.log_p1.resize(N, m);
  for (Eigen::Index l = 0; l < N; ++l) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double u = uniform01(rng);
      state.posteriors.log_p1(l, j) = std::log(u);
      state.posteriors.log_p0(l, j) = std::log1p(-u);
    }
  }
  state.alpha = Matrix::Constant(n, m, 1.0 / static_cast<double>(m));
  apply_anchors(state.alpha, anchors);
  state.anchors = anchors;
  state.marginals = compute_marginals(state.posteriors, data, config.smoothing, config.prob_clip);
  return state;
}

MarginalTable compute_marginals(const Posteriors& post, const SparseBinaryMatrix& data,
                                double smoothing, double prob_clip) {
  const auto N = static_cast<Eigen::Index>(data.n_docs());
  const auto n = static_cast<Eigen::Index>(data.n_words());
  const auto m = static_cast<Eigen::Index>(post.n_topics());
  if (static_cast<Eigen::Index>(post.n_docs()) != N) {
    throw InvalidArgument("posteriors and data disagree on document count");
  }

  const Matrix p0 = post.log_p0.array().exp().matrix();
  const Matrix p1 = post.log_p1.array().exp().matrix();
  Vector total0 = Vector::Zero(m), total1 = Vector::Zero(m);
  for (Eigen::Index l = 0; l < N; ++l) {
    total0 += p0.row(l).transpose();
    total1 += p1.row(l).transpose();
  }

  MarginalTable mt;
  mt.log_p_y.resize(m, 2);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double py1 = clamp_prob(total1(j) / static_cast<double>(N), prob_clip);
    mt.log_p_y(j, 1) = std::log(py1);
    mt.log_p_y(j, 0) = std::log1p(-py1);
  }

  mt.log_p_x1_given_y0.resize(n, m);
  mt.log_p_x1_given_y1.resize(n, m);
  mt.log_p_x1.resize(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e) {
    Vector c0(m), c1(m);
    for (auto i = static_cast<Eigen::Index>(b); i < static_cast<Eigen::Index>(e); ++i) {
      c0.setZero();
      c1.setZero();
      for (auto l : data.docs_with(static_cast<std::size_t>(i))) {
        c0 += p0.row(l).transpose();
        c1 += p1.row(l).transpose();
      }
      for (Eigen::Index j = 0; j < m; ++j) {
        mt.log_p_x1_given_y0(i, j) =
            std::log(clamp_prob((smoothing + c0(j)) / (2.0 * smoothing + total0(j)), prob_clip));
        mt.log_p_x1_given_y1(i, j) =
            std::log(clamp_prob((smoothing + c1(j)) / (2.0 * smoothing + total1(j)), prob_clip));
      }
      const double df = static_cast<double>(data.doc_freq(static_cast<std::size_t>(i)));
      mt.log_p_x1(i) = std::log(clamp_prob(df / static_cast<double>(N), prob_clip));
    }
  });
  return mt;
}

Matrix mutual_info_estimates(const MarginalTable& mt) {
  const auto n = static_cast<Eigen::Index>(mt.n_words());
  const auto m = static_cast<Eigen::Index>(mt.n_topics());
  Matrix mi(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double py[2] = {std::exp(mt.log_p_y(j, 0)), std::exp(mt.log_p_y(j, 1))};
    for (Eigen::Index i = 0; i < n; ++i) {
      double lx1[2], lx0[2];
      for (int y = 0; y < 2; ++y) {
        lx1[y] = mt.log_p_x1_given(y)(i, j);
        lx0[y] = log1m_exp(lx1[y]);
      }
      const double mix1 = std::exp(lx1[0]) * py[0] + std::exp(lx1[1]) * py[1];
      const double mix0 = std::exp(lx0[0]) * py[0] + std::exp(lx0[1]) * py[1];
      const double lmix1 = std::log(mix1), lmix0 = std::log(mix0);
      double v = 0.0;
      for (int y = 0; y < 2; ++y) {
        v += py[y] * (std::exp(lx1[y]) * (lx1[y] - lmix1) + std::exp(lx0[y]) * (lx0[y] - lmix0));
      }
      mi(i, j) = v;
    }
  }
  return mi;
}

Matrix update_alpha(const Matrix& mi, int iter, const AnnealSchedule& schedule,
                    const ResolvedAnchors& anchors) {
  Matrix alpha(mi.rows(), mi.cols());
  const bool hard = iter >= schedule.hard_after;
  const double lambda = schedule.lambda_at(iter);
  for (Eigen::Index i = 0; i < mi.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < mi.cols(); ++j) {
      if (mi(i, j) > mi(i, best)) best = j;
    }
    const double top = mi(i, best);
    for (Eigen::Index j = 0; j < mi.cols(); ++j) {
      alpha(i, j) = hard ? (j == best ? 1.0 : 0.0) : std::exp(lambda * (mi(i, j) - top));
    }
  }
  apply_anchors(alpha, anchors);
  return alpha;
}

Posteriors update_posteriors_dense(const MarginalTable& mt, const Matrix& alpha,
                                   const SparseBinaryMatrix& data) {
  check_alignment(mt, alpha, data);
  const auto N = static_cast<Eigen::Index>(data.n_docs());
  const auto n = static_cast<Eigen::Index>(data.n_words());
  const auto m = static_cast<Eigen::Index>(mt.n_topics());
  const LogRatios r = log_ratios(mt);
  Matrix weighted_absent[2], weighted_present[2];
  for (int y = 0; y < 2; ++y) {
    weighted_absent[y] = alpha.cwiseProduct(r.absent[y]);
    weighted_present[y] = alpha.cwiseProduct(r.present[y]);
  }

  Posteriors out{Matrix(N, m), Matrix(N, m)};
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
    std::vector<char> x(static_cast<std::size_t>(n));
    for (auto l = static_cast<Eigen::Index>(b); l < static_cast<Eigen::Index>(e); ++l) {
      std::fill(x.begin(), x.end(), 0);
      for (auto w : data.words_in(static_cast<std::size_t>(l))) x[w] = 1;
      double* s[2] = {out.log_p0.row(l).data(), out.log_p1.row(l).data()};
      for (int y = 0; y < 2; ++y) {
        for (Eigen::Index j = 0; j < m; ++j) s[y][j] = mt.log_p_y(j, y);
        for (Eigen::Index i = 0; i < n; ++i) {
          const double* row = x[static_cast<std::size_t>(i)] ? weighted_present[y].row(i).data()
                                                             : weighted_absent[y].row(i).data();
          for (Eigen::Index j = 0; j < m; ++j) s[y][j] += row[j];
        }
      }
      normalize_row(s[0], s[1], m);
    }
  });
  return out;
}

Posteriors update_posteriors_sparse(const MarginalTable& mt, const Matrix& alpha,
                                    const SparseBinaryMatrix& data) {
  check_alignment(mt, alpha, data);
  const auto N = static_cast<Eigen::Index>(data.n_docs());
  const auto m = static_cast<Eigen::Index>(mt.n_topics());
  const LogRatios r = log_ratios(mt);

  // baseline[y](j): every word absent. correction[y](i, j): change when word i is present.
  Vector baseline[2];
  Matrix correction[2];
  for (int y = 0; y < 2; ++y) {
    const Matrix weighted_absent = alpha.cwiseProduct(r.absent[y]);
    baseline[y] = weighted_absent.colwise().sum().transpose();
    for (Eigen::Index j = 0; j < m; ++j) baseline[y](j) += mt.log_p_y(j, y);
    correction[y] = alpha.cwiseProduct(r.present[y] - r.absent[y]);
  }

  Posteriors out{Matrix(N, m), Matrix(N, m)};
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
    for (auto l = static_cast<Eigen::Index>(b); l < static_cast<Eigen::Index>(e); ++l) {
      double* s[2] = {out.log_p0.row(l).data(), out.log_p1.row(l).data()};
      for (int y = 0; y < 2; ++y) {
        for (Eigen::Index j = 0; j < m; ++j) s[y][j] = baseline[y](j);
        for (auto w : data.words_in(static_cast<std::size_t>(l))) {
          const double* row = correction[y].row(w).data();
          for (Eigen::Index j = 0; j < m; ++j) s[y][j] += row[j];
        }
      }
      normalize_row(s[0], s[1], m);
    }
  });
  return out;
}

TopicObjective objective(const MarginalTable& mt, const Matrix& alpha,
                         const Posteriors& post) {
  const auto N = static_cast<Eigen::Index>(post.n_docs());
  const auto m = static_cast<Eigen::Index>(mt.n_topics());
  const Matrix mi = mutual_info_estimates(mt);

  TopicObjective obj;
  obj.tc.assign(static_cast<std::size_t>(m), 0.0);
  for (Eigen::Index j = 0; j < m; ++j) {
    double relevance = 0.0;
    for (Eigen::Index i = 0; i < mi.rows(); ++i) relevance += alpha(i, j) * mi(i, j);
    double compression = 0.0;
    for (Eigen::Index l = 0; l < N; ++l) {
      const double l0 = post.log_p0(l, j), l1 = post.log_p1(l, j);
      compression += std::exp(l0) * (l0 - mt.log_p_y(j, 0)) + std::exp(l1) * (l1 - mt.log_p_y(j, 1));
    }
    obj.tc[static_cast<std::size_t>(j)] = relevance - compression / static_cast<double>(N);
  }
  obj.total = std::accumulate(obj.tc.begin(), obj.tc.end(), 0.0);
  return obj;
}

RestartRun run_restart(const SparseBinaryMatrix& data, const ModelConfig& config,
                       const ResolvedAnchors& anchors, std::uint64_t seed,
                       const RunOptions& options) {
  RestartRun run;
  run.state = init_state(data, config, seed, anchors);
  ModelState& st = run.state;
  auto update = options.path == PosteriorPath::Sparse ? update_posteriors_sparse
                                                      : update_posteriors_dense;

  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < config.max_iter; ++it) {
    st.alpha = update_alpha(mutual_info_estimates(st.marginals), it, config.anneal, anchors);
    run.last_update_marginals = st.marginals;
    st.posteriors = update(st.marginals, st.alpha, data);
    st.marginals = compute_marginals(st.posteriors, data, config.smoothing, config.prob_clip);
    canonicalize_polarity(st.alpha, st.marginals, run.last_update_marginals, st.posteriors);

    run.final_objective = objective(st.marginals, st.alpha, st.posteriors);
    const double total = run.final_objective.total;
    if (!std::isfinite(total)) {
      throw NumericalError("objective is not finite at iteration " + std::to_string(it), it);
    }
    st.objective_trace.push_back(total);
    run.iterations = it + 1;

    // Convergence only counts once the weights are hard indicators.
    if (options.early_stop && it > config.anneal.hard_after && std::isfinite(previous)) {
      const double rel = std::abs(total - previous) / std::max(std::abs(total), 1e-10);
      if (rel < config.tol) {
        run.converged = true;
        break;
      }
    }
    previous = total;
  }
  return run;
}

FitResult fit(const SparseBinaryMatrix& data, const Vocabulary& vocab, const ModelConfig& config,
              const AnchorSpec& anchor_spec) {
  config.validate();
  if (data.n_docs() == 0 || data.n_words() == 0) throw InvalidArgument("empty data");
  if (vocab.size() != data.n_words()) {
    throw InvalidArgument("vocabulary size does not match data columns");
  }
  const ResolvedAnchors anchors = resolve_anchors(anchor_spec, vocab, config.n_topics);

  FitResult result;
  RestartRun best;
  std::size_t best_index = 0;
  for (int r = 0; r < config.n_restarts; ++r) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
    RestartRun run = run_restart(data, config, anchors, seed);
    result.restarts.push_back({seed, run.final_objective.total, run.iterations, run.converged});
    if (r == 0 || run.final_objective.total > best.final_objective.total) {
      best = std::move(run);
      best_index = static_cast<std::size_t>(r);
    }
  }

  const std::size_t m = config.n_topics;
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  const auto& tc = best.final_objective.tc;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tc[a] > tc[b]; });
  std::vector<std::size_t> new_index(m);
  for (std::size_t k = 0; k < m; ++k) new_index[order[k]] = k;

  FittedModel& model = result.model;
  model.vocab = vocab;
  model.n_docs = data.n_docs();
  model.config = config;
  model.marginals = std::move(best.last_update_marginals);
  permute_rows(model.marginals.log_p_y, order);
  permute_columns(model.marginals.log_p_x1_given_y0, order);
  permute_columns(model.marginals.log_p_x1_given_y1, order);
  model.alpha = std::move(best.state.alpha);
  permute_columns(model.alpha, order);
  for (auto k : order) model.tc.push_back(tc[k]);
  model.total_tc = std::accumulate(model.tc.begin(), model.tc.end(), 0.0);
  model.topic_order = order;
  model.anchors = anchors.remap_topics(new_index);
  model.summary.iterations = best.iterations;
  model.summary.converged = best.converged;
  model.summary.selected_restart = best_index;
  for (const auto& r : result.restarts) model.summary.restart_objectives.push_back(r.objective);

  result.posteriors = std::move(best.state.posteriors);
  permute_columns(result.posteriors.log_p0, order);
  permute_columns(result.posteriors.log_p1, order);
  return result;
}

Posteriors transform_log(const FittedModel& model, const SparseBinaryMatrix& data,
                         PosteriorPath path) {
  if (data.n_words() != model.n_words()) {
    throw InvalidArgument("dimension mismatch: data has " + std::to_string(data.n_words()) +
                          " columns, model vocabulary has " + std::to_string(model.n_words()));
  }
  return path == PosteriorPath::Sparse ? update_posteriors_sparse(model.marginals, model.alpha, data)
                                       : update_posteriors_dense(model.marginals, model.alpha, data);
}

Matrix transform(const FittedModel& model, const SparseBinaryMatrix& data) {
  return transform_log(model, data).log_p1.array().exp().matrix();
}

void check_marginals(const MarginalTable& mt, double prob_clip) {
  const auto n = mt.log_p_x1.size();
  const auto m = mt.log_p_y.rows();
  if (mt.log_p_y.cols() != 2 || mt.log_p_x1_given_y0.rows() != n ||
      mt.log_p_x1_given_y0.cols() != m || mt.log_p_x1_given_y1.rows() != n ||
      mt.log_p_x1_given_y1.cols() != m) {
    throw CorruptFile("marginal tables have inconsistent shapes");
  }
  // Allow a few ulps of slack around the clamp after the log/exp round trip.
  const double lo = prob_clip * (1.0 - 1e-9), hi = 1.0 - prob_clip * (1.0 - 1e-9);
  auto in_range = [&](double lp) { return std::isfinite(lp) && std::exp(lp) >= lo && std::exp(lp) <= hi; };
  for (Eigen::Index j = 0; j < m; ++j) {
    const double a = mt.log_p_y(j, 0), b = mt.log_p_y(j, 1);
    if (!in_range(a) || !in_range(b)) throw CorruptFile("p(y) outside the clamp range, topic " + std::to_string(j));
    if (std::abs(std::exp(a) + std::exp(b) - 1.0) > 1e-12) {
      throw CorruptFile("p(y=0) + p(y=1) != 1 for topic " + std::to_string(j));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!in_range(mt.log_p_x1(i))) throw CorruptFile("p(x) outside the clamp range, word " + std::to_string(i));
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!in_range(mt.log_p_x1_given_y0(i, j)) || !in_range(mt.log_p_x1_given_y1(i, j))) {
        throw CorruptFile("p(x|y) outside the clamp range, word " + std::to_string(i));
      }
    }
  }
}

}  // namespace corex
