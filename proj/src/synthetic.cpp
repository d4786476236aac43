#include "corex/synthetic.hpp"

#include <numeric>

#include "corex/error.hpp"
#include "corex/types.hpp"

namespace corex::synthetic {

namespace {

std::size_t draw_class(Rng& rng, const std::vector<double>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = uniform01(rng) * total;
  for (std::size_t c = 0; c + 1 < weights.size(); ++c) {
    if (u < weights[c]) return c;
    u -= weights[c];
  }
  return weights.size() - 1;
}

Vocabulary vocab_for(const SparseBinaryMatrix& data) {
  std::vector<std::size_t> df(data.n_words());
  for (std::size_t i = 0; i < df.size(); ++i) df[i] = data.doc_freq(i);
  return Vocabulary(Vocabulary::synthetic(data.n_words()).terms(), std::move(df));
}

}  // namespace

PlantedCorpus make_planted(const PlantedSpec& spec) {
  if (spec.class_weights.empty() || spec.active.size() != spec.class_weights.size()) {
    throw InvalidArgument("planted spec: class weights and activation table disagree");
  }
  for (const auto& row : spec.active) {
    if (row.size() != spec.block_sizes.size()) throw InvalidArgument("planted spec: bad activation row");
  }
  PlantedCorpus out;
  for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
    out.word_block.insert(out.word_block.end(), spec.block_sizes[b], b);
  }
  const std::size_t n = out.word_block.size();
  Rng rng(spec.seed);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> coords;
  for (std::size_t l = 0; l < spec.n_docs; ++l) {
    const std::size_t c = draw_class(rng, spec.class_weights);
    out.doc_class.push_back(c);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = spec.active[c][out.word_block[i]] ? spec.p_on : spec.p_off;
      if (corex::bernoulli(rng, p)) {
        coords.emplace_back(static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(i));
      }
    }
  }
  out.data = SparseBinaryMatrix(spec.n_docs, n, std::move(coords));
  out.vocab = vocab_for(out.data);
  return out;
}

PlantedCorpus two_block(std::size_t n_docs, std::size_t block_size, double p_on, double p_off,
                        std::uint64_t seed) {
  PlantedSpec spec;
  spec.n_docs = n_docs;
  spec.block_sizes = {block_size, block_size};
  spec.class_weights = {0.5, 0.5};
  spec.active = {{true, false}, {false, true}};
  spec.p_on = p_on;
  spec.p_off = p_off;
  spec.seed = seed;
  return make_planted(spec);
}

PlantedCorpus nested_blocks(std::size_t n_docs, std::size_t n_groups, std::size_t leaves_per_group,
                            std::size_t block_size, double p_group, double p_leaf, double p_stray,
                            double p_on, double p_off, std::uint64_t seed) {
  if (n_groups == 0 || n_groups > 63) throw InvalidArgument("nested blocks: 1..63 groups");
  const std::size_t n_leaves = n_groups * leaves_per_group;
  PlantedCorpus out;
  for (std::size_t b = 0; b < n_leaves; ++b) out.word_block.insert(out.word_block.end(), block_size, b);
  const std::size_t n = out.word_block.size();
  Rng rng(seed);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> coords;
  std::vector<bool> on(n_leaves);
  for (std::size_t l = 0; l < n_docs; ++l) {
    std::size_t mask = 0;
    for (std::size_t g = 0; g < n_groups; ++g) {
      if (corex::bernoulli(rng, p_group)) mask |= std::size_t{1} << g;
    }
    out.doc_class.push_back(mask);
    for (std::size_t b = 0; b < n_leaves; ++b) {
      const bool group_on = (mask >> (b / leaves_per_group)) & 1;
      on[b] = corex::bernoulli(rng, group_on ? p_leaf : p_stray);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (corex::bernoulli(rng, on[out.word_block[i]] ? p_on : p_off)) {
        coords.emplace_back(static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(i));
      }
    }
  }
  out.data = SparseBinaryMatrix(n_docs, n, std::move(coords));
  out.vocab = vocab_for(out.data);
  return out;
}

SparseBinaryMatrix bernoulli(std::size_t n_docs, std::size_t n_words, double density,
                             std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) throw InvalidArgument("density must be in (0, 1]");
  Rng rng(seed);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> coords;
  coords.reserve(static_cast<std::size_t>(static_cast<double>(n_docs) * static_cast<double>(n_words) * density * 1.1) + 16);
  for (std::size_t l = 0; l < n_docs; ++l) {
    for (std::size_t i = 0; i < n_words; ++i) {
      if (density >= 1.0 || corex::bernoulli(rng, density)) {
        coords.emplace_back(static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(i));
      }
    }
  }
  return SparseBinaryMatrix(n_docs, n_words, std::move(coords));
}

}  // namespace corex::synthetic
