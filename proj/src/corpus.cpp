#include "corex/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "corex/error.hpp"

namespace corex {

namespace {

bool parse_index(std::string_view tok, std::uint64_t& out) {
  if (tok.empty()) return false;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  return in;
}

RawCorpus load_lines(const std::string& path) {
  auto in = open_or_throw(path);
  RawCorpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    corpus.docs.push_back(tokenize(line));
  }
  if (corpus.docs.empty()) corpus.warnings.push_back("corpus is empty: " + path);
  return corpus;
}

RawCorpus load_triplets(const std::string& path, const std::string& vocab_path) {
  auto in = open_or_throw(path);
  std::vector<std::string> terms;
  if (!vocab_path.empty()) terms = read_term_list(vocab_path);

  RawCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  std::uint64_t n_docs = 0, n_words = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    std::uint64_t a = 0, b = 0;
    if (toks.size() != 2 || !parse_index(toks[0], a) || !parse_index(toks[1], b)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected two non-negative integers",
                       line_no);
    }
    if (!have_header) {
      n_docs = a;
      n_words = b;
      have_header = true;
      if (!terms.empty() && terms.size() != n_words) {
        throw ParseError("line " + std::to_string(line_no) + ": header declares " +
                             std::to_string(n_words) + " words but vocabulary has " +
                             std::to_string(terms.size()),
                         line_no);
      }
      corpus.docs.resize(n_docs);
      continue;
    }
    if (a >= n_docs || b >= n_words) {
      throw ParseError("line " + std::to_string(line_no) + ": coordinate (" + std::to_string(a) +
                           "," + std::to_string(b) + ") out of range for declared shape " +
                           std::to_string(n_docs) + "x" + std::to_string(n_words),
                       line_no);
    }
    corpus.docs[a].push_back(terms.empty() ? std::to_string(b) : terms[b]);
  }
  if (!have_header || n_docs == 0) corpus.warnings.push_back("corpus is empty: " + path);
  return corpus;
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "lines") return CorpusFormat::Lines;
  if (name == "sparse-triplets" || name == "triplets") return CorpusFormat::SparseTriplets;
  throw InvalidArgument("unknown corpus format: " + std::string(name));
}

RawCorpus load_corpus(const std::string& path, CorpusFormat format,
                      const std::string& vocab_path) {
  return format == CorpusFormat::Lines ? load_lines(path) : load_triplets(path, vocab_path);
}

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  for (auto tok : split_ws(line)) {
    std::size_t b = 0, e = tok.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(tok[e - 1]))) --e;
    if (b == e) continue;
    std::string s(tok.substr(b, e - b));
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> read_term_list(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    terms.push_back(line);
  }
  return terms;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)) {
  if (!doc_freq_.empty() && doc_freq_.size() != terms_.size()) {
    throw InvalidArgument("vocabulary: doc_freq length differs from term count");
  }
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second) {
      throw InvalidArgument("vocabulary: duplicate term '" + terms_[i] + "'");
    }
  }
}

std::ptrdiff_t Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

Vocabulary Vocabulary::synthetic(std::size_t n, const std::string& prefix) {
  std::vector<std::string> terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i] = prefix + std::to_string(i);
  return Vocabulary(std::move(terms), {});
}

Vocabulary build_vocabulary(const RawCorpus& corpus, std::size_t min_df, std::size_t max_vocab) {
  if (min_df < 1) throw InvalidArgument("min_df must be >= 1");
  if (max_vocab < 1) throw InvalidArgument("max_vocab must be >= 1");

  std::map<std::string, std::size_t> df;
  std::vector<std::string> seen;
  for (const auto& doc : corpus.docs) {
    seen = doc;
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const auto& t : seen) ++df[t];
  }

  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [term, count] : df) {
    if (count >= min_df) kept.emplace_back(term, count);
  }
  if (kept.empty()) throw InvalidArgument("vocabulary is empty after filtering");

  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (kept.size() > max_vocab) kept.resize(max_vocab);

  std::vector<std::string> terms;
  std::vector<std::size_t> freqs;
  terms.reserve(kept.size());
  freqs.reserve(kept.size());
  for (auto& [term, count] : kept) {
    terms.push_back(term);
    freqs.push_back(count);
  }
  return Vocabulary(std::move(terms), std::move(freqs));
}

SparseBinaryMatrix::SparseBinaryMatrix(
    std::size_t n_docs, std::size_t n_words,
    std::vector<std::pair<std::uint32_t, std::uint32_t>> coords)
    : n_docs_(n_docs), n_words_(n_words) {
  for (const auto& [d, w] : coords) {
    if (d >= n_docs || w >= n_words) {
      throw InvalidArgument("coordinate (" + std::to_string(d) + "," + std::to_string(w) +
                            ") out of range");
    }
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  doc_ptr_.assign(n_docs + 1, 0);
  word_ptr_.assign(n_words + 1, 0);
  doc_words_.resize(coords.size());
  word_docs_.resize(coords.size());
  for (const auto& [d, w] : coords) {
    ++doc_ptr_[d + 1];
    ++word_ptr_[w + 1];
  }
  for (std::size_t i = 0; i < n_docs; ++i) doc_ptr_[i + 1] += doc_ptr_[i];
  for (std::size_t i = 0; i < n_words; ++i) word_ptr_[i + 1] += word_ptr_[i];
  for (std::size_t k = 0; k < coords.size(); ++k) doc_words_[k] = coords[k].second;
  // Coordinates are sorted by doc, so each word's doc list fills in ascending order.
  std::vector<std::size_t> fill(word_ptr_.begin(), word_ptr_.end() - 1);
  for (const auto& [d, w] : coords) word_docs_[fill[w]++] = d;
}

bool SparseBinaryMatrix::contains(std::size_t doc, std::size_t word) const {
  auto row = words_in(doc);
  return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(word));
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> SparseBinaryMatrix::coordinates() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(nnz());
  for (std::size_t d = 0; d < n_docs_; ++d) {
    for (auto w : words_in(d)) out.emplace_back(static_cast<std::uint32_t>(d), w);
  }
  return out;
}

SparseBinaryMatrix SparseBinaryMatrix::select_docs(std::span<const std::size_t> docs) const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> coords;
  for (std::size_t k = 0; k < docs.size(); ++k) {
    for (auto w : words_in(docs[k])) coords.emplace_back(static_cast<std::uint32_t>(k), w);
  }
  return SparseBinaryMatrix(docs.size(), n_words_, std::move(coords));
}

BinarizeResult binarize(const RawCorpus& corpus, const Vocabulary& vocab) {
  if (vocab.empty()) throw InvalidArgument("binarize: vocabulary is empty");
  BinarizeResult result;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> coords;
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    for (const auto& tok : corpus.docs[d]) {
      auto id = vocab.find(tok);
      if (id < 0) {
        ++result.oov_tokens;
        continue;
      }
      coords.emplace_back(static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(id));
    }
  }
  result.matrix = SparseBinaryMatrix(corpus.docs.size(), vocab.size(), std::move(coords));
  return result;
}

void write_triplets(const SparseBinaryMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << m.n_docs() << ' ' << m.n_words() << '\n';
  for (const auto& [d, w] : m.coordinates()) out << d << ' ' << w << '\n';
  if (!out) throw Error("write failed: " + path);
}

}  // namespace corex
