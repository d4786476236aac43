#include "corex/bench.hpp"

#include <algorithm>
#include <chrono>
#include <new>
#include <sstream>

#include "corex/error.hpp"
#include "corex/synthetic.hpp"

namespace corex {

double time_fit(const SparseBinaryMatrix& data, std::size_t topics, int iterations,
                PosteriorPath path, std::uint64_t seed) {
  ModelConfig config;
  config.n_topics = topics;
  config.max_iter = iterations;
  config.anneal.hard_after = std::min(config.anneal.hard_after, iterations);
  config.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  RestartRun run = run_restart(data, config, {}, seed, {path, false});
  const auto stop = std::chrono::steady_clock::now();
  if (run.iterations != iterations) throw Error("benchmark fit stopped early");
  return std::chrono::duration<double>(stop - start).count();
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  if (config.docs.empty() || config.vocab.empty() || config.densities.empty()) {
    throw InvalidArgument("bench: empty grid");
  }
  if (config.repeats < 1 || config.iterations < 1 || config.topics < 1) {
    throw InvalidArgument("bench: repeats, iterations and topics must be >= 1");
  }
  std::vector<BenchRow> rows;
  try {
    for (auto N : config.docs) {
      for (auto n : config.vocab) {
        for (auto density : config.densities) {
          const auto data = synthetic::bernoulli(N, n, density, config.seed);
          for (int r = 0; r < config.repeats; ++r) {
            for (auto path : {PosteriorPath::Sparse, PosteriorPath::Dense}) {
              const double s = time_fit(data, config.topics, config.iterations, path, config.seed);
              rows.push_back({N, n, data.nnz(), density, path, r, s});
            }
          }
        }
      }
    }
  } catch (const std::bad_alloc&) {
    throw Error("bench: out of memory; reduce --docs/--vocab/--density");
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "n_docs,n_words,nnz,density,path,repeat,seconds\n";
  for (const auto& r : rows) {
    out << r.n_docs << ',' << r.n_words << ',' << r.nnz << ',' << r.density << ','
        << (r.path == PosteriorPath::Sparse ? "sparse" : "dense") << ',' << r.repeat << ','
        << r.seconds << '\n';
  }
  return out.str();
}

double median_seconds(const std::vector<BenchRow>& rows, std::size_t n_docs, std::size_t n_words,
                      double density, PosteriorPath path) {
  std::vector<double> t;
  for (const auto& r : rows) {
    if (r.n_docs == n_docs && r.n_words == n_words && r.density == density && r.path == path) {
      t.push_back(r.seconds);
    }
  }
  if (t.empty()) throw InvalidArgument("median_seconds: no matching rows");
  std::sort(t.begin(), t.end());
  const std::size_t k = t.size() / 2;
  return t.size() % 2 ? t[k] : 0.5 * (t[k - 1] + t[k]);
}

}  // namespace corex
