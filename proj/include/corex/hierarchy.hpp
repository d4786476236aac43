#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "corex/corpus.hpp"
#include "corex/model.hpp"

namespace corex {

struct HierarchyLevel {
  FittedModel model;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
};

// Level 1 edges run word -> topic, level k > 1 edges run topic of level k-1
// -> topic of level k. Weight is I(child : parent).
struct HierarchyEdge {
  std::size_t level = 0;
  std::size_t child = 0;
  std::size_t parent = 0;
  double weight = 0.0;
};

struct Hierarchy {
  std::vector<HierarchyLevel> levels;
  std::vector<HierarchyEdge> edges;
  std::vector<std::string> warnings;
};

// (l, j) is present iff p(y_j = 1 | x^l) > 0.5.
SparseBinaryMatrix threshold_topics(const Matrix& p_topic);
SparseBinaryMatrix stack_level(const FittedModel& model, const SparseBinaryMatrix& data);

/// Fits one model per config; each level after the first is trained on the
/// thresholded topic activations of the level below.
Hierarchy fit_hierarchy(const SparseBinaryMatrix& data, const Vocabulary& vocab,
                        std::span<const ModelConfig> configs);

// Member edges (weight >= 1 in alpha) of one fitted level.
std::vector<HierarchyEdge> level_edges(const FittedModel& model, std::size_t level);

// One `level child parent weight` line per edge.
std::string edges_to_text(std::span<const HierarchyEdge> edges);

}  // namespace corex
