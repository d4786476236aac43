#include "corex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corex/error.hpp"

namespace corex {

namespace {

double entropy_of_counts(const std::vector<std::size_t>& counts, double n) {
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

std::vector<std::size_t> cluster_sizes(std::span<const std::size_t> labels) {
  std::size_t k = 0;
  for (auto l : labels) k = std::max(k, l + 1);
  std::vector<std::size_t> sizes(k, 0);
  for (auto l : labels) ++sizes[l];
  return sizes;
}

void check_lengths(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("label length mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<RankedWord> top_words(const FittedModel& model, std::size_t topic, std::size_t count) {
  if (topic >= model.n_topics()) {
    throw InvalidArgument("topic " + std::to_string(topic) + " out of range");
  }
  const Matrix mi = mutual_info_estimates(model.marginals);
  const auto j = static_cast<Eigen::Index>(topic);
  std::vector<RankedWord> members;
  for (Eigen::Index i = 0; i < model.alpha.rows(); ++i) {
    if (model.alpha(i, j) >= 1.0) members.push_back({static_cast<std::size_t>(i), mi(i, j)});
  }
  std::sort(members.begin(), members.end(), [&](const RankedWord& a, const RankedWord& b) {
    return a.mi != b.mi ? a.mi > b.mi : model.vocab.term(a.word) < model.vocab.term(b.word);
  });
  if (members.size() > count) members.resize(count);
  return members;
}

double umass_coherence(std::span<const std::size_t> words, const SparseBinaryMatrix& data) {
  if (words.size() < 2) throw InvalidArgument("coherence needs at least two words");
  for (auto w : words) {
    if (w >= data.n_words()) throw InvalidArgument("coherence: word id out of range");
  }
  double score = 0.0;
  for (std::size_t k = 1; k < words.size(); ++k) {
    const auto docs_k = data.docs_with(words[k]);
    for (std::size_t l = 0; l < k; ++l) {
      const auto docs_l = data.docs_with(words[l]);
      if (docs_l.empty()) {
        throw InvalidArgument("coherence: word " + std::to_string(words[l]) + " occurs in no document");
      }
      std::size_t both = 0;
      auto a = docs_k.begin();
      auto b = docs_l.begin();
      while (a != docs_k.end() && b != docs_l.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++both;
          ++a;
          ++b;
        }
      }
      score += std::log((static_cast<double>(both) + 1.0) / static_cast<double>(docs_l.size()));
    }
  }
  return score;
}

std::vector<std::size_t> cluster_documents(const Matrix& p_topic) {
  std::vector<std::size_t> out(static_cast<std::size_t>(p_topic.rows()), 0);
  for (Eigen::Index l = 0; l < p_topic.rows(); ++l) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < p_topic.cols(); ++j) {
      if (p_topic(l, j) > p_topic(l, best)) best = j;
    }
    out[static_cast<std::size_t>(l)] = static_cast<std::size_t>(best);
  }
  return out;
}

std::vector<std::size_t> cluster_documents(const FittedModel& model, const SparseBinaryMatrix& data) {
  return cluster_documents(transform(model, data));
}

double mutual_information(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  check_lengths(a, b);
  if (a.empty()) return 0.0;
  const double n = static_cast<double>(a.size());
  const auto sa = cluster_sizes(a), sb = cluster_sizes(b);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> joint;
  for (std::size_t k = 0; k < a.size(); ++k) ++joint[{a[k], b[k]}];
  double mi = 0.0;
  for (const auto& [cell, c] : joint) {
    const double nij = static_cast<double>(c);
    mi += (nij / n) * std::log(n * nij / (static_cast<double>(sa[cell.first]) *
                                          static_cast<double>(sb[cell.second])));
  }
  return std::max(mi, 0.0);
}

double homogeneity(std::span<const std::size_t> pred, std::span<const std::size_t> truth) {
  check_lengths(pred, truth);
  if (truth.empty()) return 1.0;
  const double n = static_cast<double>(truth.size());
  const double h_truth = entropy_of_counts(cluster_sizes(truth), n);
  if (h_truth == 0.0) return 1.0;
  // H(truth | pred) = H(truth) - I(truth; pred)
  const double h_cond = h_truth - mutual_information(pred, truth);
  return std::clamp(1.0 - h_cond / h_truth, 0.0, 1.0);
}

double expected_mutual_information(std::span<const std::size_t> a_sizes,
                                   std::span<const std::size_t> b_sizes, std::size_t n) {
  const double N = static_cast<double>(n);
  const double lg_n = std::lgamma(N + 1.0);
  double emi = 0.0;
  for (auto ai : a_sizes) {
    if (ai == 0) continue;
    const double a = static_cast<double>(ai);
    for (auto bj : b_sizes) {
      if (bj == 0) continue;
      const double b = static_cast<double>(bj);
      const double fixed = std::lgamma(a + 1.0) + std::lgamma(b + 1.0) +
                           std::lgamma(N - a + 1.0) + std::lgamma(N - b + 1.0) - lg_n;
      const std::size_t lo = std::max<std::ptrdiff_t>(
          1, static_cast<std::ptrdiff_t>(ai + bj) - static_cast<std::ptrdiff_t>(n));
      const std::size_t hi = std::min(ai, bj);
      for (std::size_t k = lo; k <= hi; ++k) {
        const double x = static_cast<double>(k);
        const double log_prob = fixed - std::lgamma(x + 1.0) - std::lgamma(a - x + 1.0) -
                                std::lgamma(b - x + 1.0) - std::lgamma(N - a - b + x + 1.0);
        emi += (x / N) * std::log(N * x / (a * b)) * std::exp(log_prob);
      }
    }
  }
  return emi;
}

double adjusted_mutual_info(std::span<const std::size_t> pred, std::span<const std::size_t> truth) {
  check_lengths(pred, truth);
  const auto sp = cluster_sizes(pred), st = cluster_sizes(truth);
  const auto nonempty = [](const std::vector<std::size_t>& s) {
    return std::count_if(s.begin(), s.end(), [](std::size_t c) { return c > 0; });
  };
  if (pred.empty() || (nonempty(sp) <= 1 && nonempty(st) <= 1)) return 1.0;
  const double n = static_cast<double>(pred.size());
  const double mi = mutual_information(pred, truth);
  const double emi = expected_mutual_information(sp, st, pred.size());
  const double h = std::max(entropy_of_counts(sp, n), entropy_of_counts(st, n));
  const double denom = h - emi;
  if (std::abs(denom) < 1e-15) return 0.0;
  return (mi - emi) / denom;
}

ClusteringResult evaluate_clustering(std::vector<std::size_t> assignments,
                                     std::span<const std::size_t> truth) {
  ClusteringResult r;
  r.homogeneity = homogeneity(assignments, truth);
  r.ami = adjusted_mutual_info(assignments, truth);
  r.assignments = std::move(assignments);
  return r;
}

LabelSet parse_labels(const std::vector<std::string>& lines) {
  std::vector<std::string> raw;
  raw.reserve(lines.size());
  for (std::size_t k = 0; k < lines.size(); ++k) {
    std::string s = trim(lines[k]);
    if (s.empty()) throw InvalidArgument("labels line " + std::to_string(k + 1) + ": empty label");
    if (s.find_first_of(", \t;|") != std::string::npos) {
      throw InvalidArgument("labels line " + std::to_string(k + 1) +
                            ": multi-label input is not supported for clustering metrics");
    }
    raw.push_back(std::move(s));
  }
  LabelSet out;
  std::set<std::string> uniq(raw.begin(), raw.end());
  out.names.assign(uniq.begin(), uniq.end());
  std::map<std::string, std::size_t> id;
  for (std::size_t k = 0; k < out.names.size(); ++k) id[out.names[k]] = k;
  for (const auto& s : raw) out.ids.push_back(id[s]);
  return out;
}

LabelSet load_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read labels file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return parse_labels(lines);
}

TopicCountCurve topic_count_curve(const SparseBinaryMatrix& data, const Vocabulary& vocab,
                                  const ModelConfig& config,
                                  std::span<const std::size_t> m_values) {
  if (m_values.empty()) throw InvalidArgument("topic_count_curve: no topic counts given");
  if (!std::is_sorted(m_values.begin(), m_values.end())) {
    throw InvalidArgument("topic_count_curve: topic counts must be ascending");
  }
  TopicCountCurve curve;
  for (auto m : m_values) {
    ModelConfig c = config;
    c.n_topics = m;
    const FitResult fr = fit(data, vocab, c);
    TopicCountPoint pt;
    pt.n_topics = m;
    pt.total_tc = fr.model.total_tc;
    pt.weakest_tc = *std::min_element(fr.model.tc.begin(), fr.model.tc.end());
    if (!curve.flagged && pt.weakest_tc < 0.01 * pt.total_tc) curve.flagged = m;
    curve.points.push_back(pt);
  }
  return curve;
}

EvalReport evaluate(const FittedModel& model, const SparseBinaryMatrix& data,
                    std::size_t top_count, const std::vector<std::size_t>* truth) {
  if (data.n_words() != model.n_words()) throw InvalidArgument("data does not match model vocabulary");
  EvalReport report;
  double coherence_sum = 0.0;
  std::size_t coherence_n = 0;
  for (std::size_t k = 0; k < model.n_topics(); ++k) {
    TopicReport t;
    t.rank = k;
    t.tc = model.tc[k];
    t.words = top_words(model, k, top_count);
    std::vector<std::size_t> ids;
    for (const auto& w : t.words) {
      if (data.doc_freq(w.word) > 0) ids.push_back(w.word);
    }
    if (ids.size() >= 2) {
      t.coherence = umass_coherence(ids, data);
      coherence_sum += *t.coherence;
      ++coherence_n;
    }
    report.topics.push_back(std::move(t));
  }
  report.mean_coherence = coherence_n ? coherence_sum / static_cast<double>(coherence_n) : 0.0;
  if (truth) {
    report.clustering = evaluate_clustering(cluster_documents(model, data), *truth);
  }
  return report;
}

std::string eval_report_json(const EvalReport& report, const FittedModel& model) {
  nlohmann::ordered_json doc;
  doc["topics"] = nlohmann::ordered_json::array();
  for (const auto& t : report.topics) {
    nlohmann::ordered_json jt;
    jt["rank"] = t.rank;
    jt["tc"] = t.tc;
    auto words = nlohmann::ordered_json::array();
    for (const auto& w : t.words) words.push_back({{"word", model.vocab.term(w.word)}, {"mi", w.mi}});
    jt["words"] = std::move(words);
    jt["coherence"] = t.coherence ? nlohmann::ordered_json(*t.coherence) : nlohmann::ordered_json();
    doc["topics"].push_back(std::move(jt));
  }
  doc["mean_coherence"] = report.mean_coherence;
  if (report.clustering) {
    doc["clustering"] = {{"homogeneity", report.clustering->homogeneity},
                         {"ami", report.clustering->ami}};
  }
  return doc.dump(2) + "\n";
}

std::string eval_report_csv(const EvalReport& report, const FittedModel& model) {
  std::ostringstream out;
  out.precision(17);
  out << "topic,tc,coherence,words\n";
  for (const auto& t : report.topics) {
    out << t.rank << ',' << t.tc << ',';
    if (t.coherence) out << *t.coherence;
    std::string words;
    for (std::size_t k = 0; k < t.words.size(); ++k) {
      if (k) words += ' ';
      words += model.vocab.term(t.words[k].word);
    }
    // terms may carry inner punctuation, so the list is always quoted
    out << ",\"";
    for (char ch : words) out << (ch == '"' ? "\"\"" : std::string(1, ch));
    out << "\"\n";
  }
  return out.str();
}

}  // namespace corex
