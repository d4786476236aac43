#include "corex/store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "corex/error.hpp"

namespace corex {

namespace {

using ojson = nlohmann::ordered_json;

ojson matrix_to_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const ojson& j, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw CorruptFile(std::string(name) + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw CorruptFile(std::string(name) + ": row " + std::to_string(r) + " has the wrong width");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

ojson config_to_json(const ModelConfig& c) {
  ojson j;
  j["n_topics"] = c.n_topics;
  j["max_iter"] = c.max_iter;
  j["tol"] = c.tol;
  j["n_restarts"] = c.n_restarts;
  j["lambda_start"] = c.anneal.lambda_start;
  j["lambda_growth"] = c.anneal.lambda_growth;
  j["hard_after"] = c.anneal.hard_after;
  j["seed"] = c.seed;
  j["smoothing"] = c.smoothing;
  j["prob_clip"] = c.prob_clip;
  return j;
}

ModelConfig config_from_json(const ojson& j) {
  ModelConfig c;
  c.n_topics = j.at("n_topics").get<std::size_t>();
  c.max_iter = j.at("max_iter").get<int>();
  c.tol = j.at("tol").get<double>();
  c.n_restarts = j.at("n_restarts").get<int>();
  c.anneal.lambda_start = j.at("lambda_start").get<double>();
  c.anneal.lambda_growth = j.at("lambda_growth").get<double>();
  c.anneal.hard_after = j.at("hard_after").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.smoothing = j.at("smoothing").get<double>();
  c.prob_clip = j.at("prob_clip").get<double>();
  return c;
}

void validate(const FittedModel& model) {
  try {
    model.config.validate();
  } catch (const InvalidArgument& e) {
    throw CorruptFile(std::string("config: ") + e.what());
  }
  const std::size_t m = model.n_topics();
  const std::size_t n = model.n_words();
  if (m != model.config.n_topics) throw CorruptFile("tc length differs from n_topics");
  if (static_cast<std::size_t>(model.marginals.log_p_x1.size()) != n ||
      static_cast<std::size_t>(model.marginals.log_p_y.rows()) != m) {
    throw CorruptFile("marginal tables do not match vocabulary/topic count");
  }
  check_marginals(model.marginals, model.config.prob_clip);

  for (std::size_t k = 1; k < m; ++k) {
    if (model.tc[k] > model.tc[k - 1]) throw CorruptFile("topics are not sorted by tc");
  }
  const double sum = std::accumulate(model.tc.begin(), model.tc.end(), 0.0);
  if (!std::isfinite(model.total_tc) || std::abs(sum - model.total_tc) > 1e-9) {
    throw CorruptFile("total_tc differs from the sum of per-topic tc");
  }
  std::vector<std::size_t> order = model.topic_order;
  std::sort(order.begin(), order.end());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order.size() != m || order[k] != k) throw CorruptFile("topic_order is not a permutation");
  }
  for (Eigen::Index i = 0; i < model.alpha.rows(); ++i) {
    for (Eigen::Index j = 0; j < model.alpha.cols(); ++j) {
      const double a = model.alpha(i, j);
      if (!(a >= 0.0) || !std::isfinite(a)) throw CorruptFile("alpha has a negative or non-finite entry");
      const bool anchored = model.anchors.is_anchored(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (!anchored && a > 1.0) throw CorruptFile("unanchored alpha entry exceeds 1");
    }
  }
  for (const auto& e : model.anchors.entries()) {
    if (e.word >= n || e.topic >= m) throw CorruptFile("anchor out of range");
    if (!(e.strength >= 1.0)) throw CorruptFile("anchor strength < 1");
    if (model.alpha(static_cast<Eigen::Index>(e.word), static_cast<Eigen::Index>(e.topic)) != e.strength) {
      throw CorruptFile("anchored alpha entry differs from its strength");
    }
  }
}

}  // namespace

std::string serialize_model(const FittedModel& model) {
  ojson doc;
  doc["format_version"] = kModelFormatVersion;
  doc["n_docs"] = model.n_docs;
  doc["n_words"] = model.n_words();
  doc["n_topics"] = model.n_topics();
  doc["config"] = config_to_json(model.config);
  doc["vocabulary"] = model.vocab.terms();
  doc["doc_freq"] = model.vocab.doc_freq();
  doc["tc"] = model.tc;
  doc["total_tc"] = model.total_tc;
  doc["topic_order"] = model.topic_order;

  ojson alpha = ojson::array();
  for (Eigen::Index i = 0; i < model.alpha.rows(); ++i) {
    for (Eigen::Index j = 0; j < model.alpha.cols(); ++j) {
      if (model.alpha(i, j) != 0.0) alpha.push_back({i, j, model.alpha(i, j)});
    }
  }
  doc["alpha"] = std::move(alpha);

  ojson anchors = ojson::array();
  for (const auto& e : model.anchors.entries()) {
    anchors.push_back({{"word", e.word}, {"topic", e.topic}, {"strength", e.strength}});
  }
  doc["anchors"] = std::move(anchors);

  ojson marg;
  marg["log_p_y"] = matrix_to_json(model.marginals.log_p_y);
  marg["log_p_x1"] = std::vector<double>(model.marginals.log_p_x1.data(),
                                         model.marginals.log_p_x1.data() + model.marginals.log_p_x1.size());
  marg["log_p_x1_given_y0"] = matrix_to_json(model.marginals.log_p_x1_given_y0);
  marg["log_p_x1_given_y1"] = matrix_to_json(model.marginals.log_p_x1_given_y1);
  doc["marginals"] = std::move(marg);

  ojson summary;
  summary["iterations"] = model.summary.iterations;
  summary["converged"] = model.summary.converged;
  summary["selected_restart"] = model.summary.selected_restart;
  summary["restart_objectives"] = model.summary.restart_objectives;
  doc["fit"] = std::move(summary);
  return doc.dump() + "\n";
}

FittedModel deserialize_model(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("model file parse error at byte " + std::to_string(e.byte) + ": " + e.what(),
                     e.byte);
  }
  if (!doc.is_object() || !doc.contains("format_version")) {
    throw CorruptFile("model file has no format_version");
  }
  if (!doc["format_version"].is_number_integer()) throw CorruptFile("format_version must be an integer");
  const auto version = doc["format_version"].get<long long>();
  if (version != kModelFormatVersion) {
    throw UnsupportedVersion("unsupported model format version " + std::to_string(version));
  }

  FittedModel model;
  try {
    const auto n = doc.at("n_words").get<Eigen::Index>();
    const auto m = doc.at("n_topics").get<Eigen::Index>();
    model.n_docs = doc.at("n_docs").get<std::size_t>();
    model.config = config_from_json(doc.at("config"));
    auto terms = doc.at("vocabulary").get<std::vector<std::string>>();
    auto df = doc.at("doc_freq").get<std::vector<std::size_t>>();
    if (static_cast<Eigen::Index>(terms.size()) != n) throw CorruptFile("vocabulary size != n_words");
    try {
      model.vocab = Vocabulary(std::move(terms), std::move(df));
    } catch (const InvalidArgument& e) {
      throw CorruptFile(e.what());
    }
    model.tc = doc.at("tc").get<std::vector<double>>();
    model.total_tc = doc.at("total_tc").get<double>();
    model.topic_order = doc.at("topic_order").get<std::vector<std::size_t>>();
    if (static_cast<Eigen::Index>(model.tc.size()) != m) throw CorruptFile("tc length != n_topics");

    model.alpha = Matrix::Zero(n, m);
    for (const auto& e : doc.at("alpha")) {
      const auto i = e.at(0).get<Eigen::Index>();
      const auto j = e.at(1).get<Eigen::Index>();
      if (i < 0 || i >= n || j < 0 || j >= m) throw CorruptFile("alpha entry out of range");
      model.alpha(i, j) = e.at(2).get<double>();
    }

    std::vector<AnchorEntry> anchors;
    for (const auto& e : doc.at("anchors")) {
      anchors.push_back({e.at("word").get<std::size_t>(), e.at("topic").get<std::size_t>(),
                         e.at("strength").get<double>()});
    }
    model.anchors = ResolvedAnchors(std::move(anchors));

    const auto& marg = doc.at("marginals");
    model.marginals.log_p_y = matrix_from_json(marg.at("log_p_y"), m, 2, "log_p_y");
    const auto lpx = marg.at("log_p_x1").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(lpx.size()) != n) throw CorruptFile("log_p_x1 length != n_words");
    model.marginals.log_p_x1 = Eigen::Map<const Vector>(lpx.data(), n);
    model.marginals.log_p_x1_given_y0 =
        matrix_from_json(marg.at("log_p_x1_given_y0"), n, m, "log_p_x1_given_y0");
    model.marginals.log_p_x1_given_y1 =
        matrix_from_json(marg.at("log_p_x1_given_y1"), n, m, "log_p_x1_given_y1");

    const auto& summary = doc.at("fit");
    model.summary.iterations = summary.at("iterations").get<int>();
    model.summary.converged = summary.at("converged").get<bool>();
    model.summary.selected_restart = summary.at("selected_restart").get<std::size_t>();
    model.summary.restart_objectives = summary.at("restart_objectives").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile(std::string("model file: ") + e.what());
  }
  validate(model);
  return model;
}

void save_model(const FittedModel& model, const std::string& path) {
  const std::string text = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model file: " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

FittedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace corex
