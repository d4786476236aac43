#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace corex {

enum class CorpusFormat { Lines, SparseTriplets };

CorpusFormat parse_corpus_format(std::string_view name);

// Tokenized documents, before any vocabulary is applied.
struct RawCorpus {
  std::vector<std::vector<std::string>> docs;
  std::vector<std::string> warnings;
};

/// Reads a corpus from disk.
///
/// `lines`: one document per line, whitespace-tokenized with tokenize().
/// `sparse-triplets`: header `N n`, then `doc word` pairs (0-based). Word ids
/// are mapped to terms through `vocab_path` (one term per line); without a
/// vocabulary file the decimal word id is used as the term.
RawCorpus load_corpus(const std::string& path, CorpusFormat format,
                      const std::string& vocab_path = {});

// Whitespace split, ASCII lowercase, leading/trailing punctuation stripped.
std::vector<std::string> tokenize(std::string_view line);

std::vector<std::string> read_term_list(const std::string& path);

class Vocabulary {
 public:
  Vocabulary() = default;
  // Terms must be unique; `doc_freq` may be empty for synthetic vocabularies.
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq);

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::size_t>& doc_freq() const { return doc_freq_; }
  const std::string& term(std::size_t id) const { return terms_.at(id); }
  // -1 when absent.
  std::ptrdiff_t find(std::string_view term) const;

  // Placeholder vocabulary "prefix0", "prefix1", ...
  static Vocabulary synthetic(std::size_t n, const std::string& prefix = "w");

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.doc_freq_ == b.doc_freq_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> doc_freq_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Keeps terms with document frequency >= min_df, then the max_vocab most
/// frequent. Ordered by doc_freq descending, ties lexicographic.
Vocabulary build_vocabulary(const RawCorpus& corpus, std::size_t min_df,
                            std::size_t max_vocab);

/// Binary document-term matrix, stored both by document (CSR) and by word
/// (CSC). Column indices within a row and row indices within a column are
/// sorted ascending.
class SparseBinaryMatrix {
 public:
  SparseBinaryMatrix() = default;
  // Duplicate coordinates collapse; out-of-range coordinates throw.
  SparseBinaryMatrix(std::size_t n_docs, std::size_t n_words,
                     std::vector<std::pair<std::uint32_t, std::uint32_t>> coords);

  std::size_t n_docs() const { return n_docs_; }
  std::size_t n_words() const { return n_words_; }
  std::size_t nnz() const { return doc_words_.size(); }

  std::span<const std::uint32_t> words_in(std::size_t doc) const {
    return {doc_words_.data() + doc_ptr_[doc], doc_ptr_[doc + 1] - doc_ptr_[doc]};
  }
  std::span<const std::uint32_t> docs_with(std::size_t word) const {
    return {word_docs_.data() + word_ptr_[word], word_ptr_[word + 1] - word_ptr_[word]};
  }
  std::size_t doc_freq(std::size_t word) const {
    return word_ptr_[word + 1] - word_ptr_[word];
  }
  bool contains(std::size_t doc, std::size_t word) const;

  std::vector<std::pair<std::uint32_t, std::uint32_t>> coordinates() const;
  // Restrict to the given documents, in the given order.
  SparseBinaryMatrix select_docs(std::span<const std::size_t> docs) const;

  friend bool operator==(const SparseBinaryMatrix& a, const SparseBinaryMatrix& b) {
    return a.n_docs_ == b.n_docs_ && a.n_words_ == b.n_words_ &&
           a.doc_ptr_ == b.doc_ptr_ && a.doc_words_ == b.doc_words_;
  }

 private:
  std::size_t n_docs_ = 0;
  std::size_t n_words_ = 0;
  std::vector<std::size_t> doc_ptr_{0};
  std::vector<std::uint32_t> doc_words_;
  std::vector<std::size_t> word_ptr_{0};
  std::vector<std::uint32_t> word_docs_;
};

struct BinarizeResult {
  SparseBinaryMatrix matrix;
  std::size_t oov_tokens = 0;
};

BinarizeResult binarize(const RawCorpus& corpus, const Vocabulary& vocab);

// Text form used by the sparse-triplets format: header `N n` then one
// `doc word` pair per line.
void write_triplets(const SparseBinaryMatrix& m, const std::string& path);

}  // namespace corex
