#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "corex/corpus.hpp"

// Seeded synthetic corpora with known structure.

namespace corex::synthetic {

/// Documents draw a class from `class_weights`; block b's words then occur
/// independently with p_on when active[class][b], else p_off. Words are laid
/// out block by block.
struct PlantedSpec {
  std::size_t n_docs = 0;
  std::vector<std::size_t> block_sizes;
  std::vector<double> class_weights;
  std::vector<std::vector<bool>> active;  // classes x blocks
  double p_on = 0.3;
  double p_off = 0.02;
  std::uint64_t seed = 0;
};

struct PlantedCorpus {
  SparseBinaryMatrix data;
  Vocabulary vocab;
  std::vector<std::size_t> doc_class;
  std::vector<std::size_t> word_block;
};

PlantedCorpus make_planted(const PlantedSpec& spec);

// Two classes with equal weight, block A active for class 0, block B for class 1.
PlantedCorpus two_block(std::size_t n_docs, std::size_t block_size, double p_on, double p_off,
                        std::uint64_t seed);

/// Leaf blocks grouped under parents. Each parent group is switched on
/// independently with p_group; leaves under an active group turn on with
/// p_leaf, all other leaves with p_stray, and active leaves emit their words
/// with p_on. word_block holds the leaf index; doc_class the bitmask of active
/// groups.
PlantedCorpus nested_blocks(std::size_t n_docs, std::size_t n_groups, std::size_t leaves_per_group,
                            std::size_t block_size, double p_group, double p_leaf, double p_stray,
                            double p_on, double p_off, std::uint64_t seed);

// Independent Bernoulli(density) occurrences.
SparseBinaryMatrix bernoulli(std::size_t n_docs, std::size_t n_words, double density,
                             std::uint64_t seed);

}  // namespace corex::synthetic
