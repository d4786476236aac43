#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "corex/model.hpp"

namespace corex {

/// Timing grid: every (docs, vocab, density) combination is generated once
/// and fit `repeats` times with each posterior path.
struct BenchConfig {
  std::vector<std::size_t> docs;
  std::vector<std::size_t> vocab;
  std::vector<double> densities;
  std::size_t topics = 50;
  int repeats = 3;
  int iterations = 10;  // fixed per fit so both paths do identical work
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::size_t n_docs = 0;
  std::size_t n_words = 0;
  std::size_t nnz = 0;
  double density = 0.0;
  PosteriorPath path = PosteriorPath::Sparse;
  int repeat = 0;
  double seconds = 0.0;
};

// Wall time of a fixed-length fit with the given posterior path.
double time_fit(const SparseBinaryMatrix& data, std::size_t topics, int iterations,
                PosteriorPath path, std::uint64_t seed);

std::vector<BenchRow> run_bench(const BenchConfig& config);
std::string bench_csv(const std::vector<BenchRow>& rows);

// Median over rows matching (n_docs, n_words, density, path).
double median_seconds(const std::vector<BenchRow>& rows, std::size_t n_docs, std::size_t n_words,
                      double density, PosteriorPath path);

}  // namespace corex
