#include "corex/hierarchy.hpp"

#include <sstream>

#include "corex/error.hpp"

namespace corex {

SparseBinaryMatrix threshold_topics(const Matrix& p_topic) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> coords;
  for (Eigen::Index l = 0; l < p_topic.rows(); ++l) {
    for (Eigen::Index j = 0; j < p_topic.cols(); ++j) {
      if (p_topic(l, j) > 0.5) {
        coords.emplace_back(static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(j));
      }
    }
  }
  return SparseBinaryMatrix(static_cast<std::size_t>(p_topic.rows()),
                            static_cast<std::size_t>(p_topic.cols()), std::move(coords));
}

SparseBinaryMatrix stack_level(const FittedModel& model, const SparseBinaryMatrix& data) {
  return threshold_topics(transform(model, data));
}

std::vector<HierarchyEdge> level_edges(const FittedModel& model, std::size_t level) {
  const Matrix mi = mutual_info_estimates(model.marginals);
  std::vector<HierarchyEdge> edges;
  for (Eigen::Index i = 0; i < model.alpha.rows(); ++i) {
    for (Eigen::Index j = 0; j < model.alpha.cols(); ++j) {
      if (model.alpha(i, j) >= 1.0) {
        edges.push_back({level, static_cast<std::size_t>(i), static_cast<std::size_t>(j), mi(i, j)});
      }
    }
  }
  return edges;
}

Hierarchy fit_hierarchy(const SparseBinaryMatrix& data, const Vocabulary& vocab,
                        std::span<const ModelConfig> configs) {
  if (configs.empty()) throw InvalidArgument("hierarchy needs at least one level");
  Hierarchy h;
  for (std::size_t k = 1; k < configs.size(); ++k) {
    if (configs[k].n_topics >= configs[k - 1].n_topics) {
      h.warnings.push_back("level " + std::to_string(k + 1) +
                           " does not reduce the number of topics");
    }
  }

  SparseBinaryMatrix input = data;
  Vocabulary level_vocab = vocab;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    FitResult fr = fit(input, level_vocab, configs[k]);
    HierarchyLevel level;
    level.input_dim = input.n_words();
    level.output_dim = fr.model.n_topics();
    auto edges = level_edges(fr.model, k + 1);
    h.edges.insert(h.edges.end(), edges.begin(), edges.end());
    if (k + 1 < configs.size()) {
      input = threshold_topics(fr.posteriors.log_p1.array().exp().matrix());
      std::vector<std::size_t> df(input.n_words());
      for (std::size_t j = 0; j < df.size(); ++j) df[j] = input.doc_freq(j);
      std::vector<std::string> names = Vocabulary::synthetic(input.n_words(), "topic").terms();
      level_vocab = Vocabulary(std::move(names), std::move(df));
    }
    level.model = std::move(fr.model);
    h.levels.push_back(std::move(level));
  }
  return h;
}

std::string edges_to_text(std::span<const HierarchyEdge> edges) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& e : edges) {
    out << e.level << ' ' << e.child << ' ' << e.parent << ' ' << e.weight << '\n';
  }
  return out.str();
}

}  // namespace corex
