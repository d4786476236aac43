// corex: command-line front end for fitting and evaluating CorEx topic models.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "corex/anchor.hpp"
#include "corex/bench.hpp"
#include "corex/corpus.hpp"
#include "corex/error.hpp"
#include "corex/hierarchy.hpp"
#include "corex/metrics.hpp"
#include "corex/model.hpp"
#include "corex/store.hpp"
#include "manifest.hpp"

namespace {

using namespace corex;
using cli::RunManifest;

struct CorpusFlags {
  std::string input;
  std::string format = "lines";
  std::string vocab;  // sparse-triplets only
  std::size_t min_df = 1;
  std::size_t max_vocab = 1000000;

  void add_to(CLI::App* app, bool with_vocab_limits) {
    app->add_option("--input", input, "Corpus file")->required()->check(CLI::ExistingFile);
    app->add_option("--format", format, "Corpus format")
        ->check(CLI::IsMember({"lines", "sparse-triplets"}));
    app->add_option("--vocab", vocab, "Vocabulary file for sparse-triplets (one term per line)")
        ->check(CLI::ExistingFile);
    if (with_vocab_limits) {
      app->add_option("--min-df", min_df, "Minimum document frequency")->check(CLI::PositiveNumber);
      app->add_option("--max-vocab", max_vocab, "Maximum vocabulary size")->check(CLI::PositiveNumber);
    }
  }

  RawCorpus load(RunManifest& manifest) const {
    manifest.add_input(input);
    manifest.add_input(vocab);
    RawCorpus corpus = load_corpus(input, parse_corpus_format(format), vocab);
    for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << "\n";
    return corpus;
  }
};

struct ModelFlags {
  std::size_t topics = 0;
  std::uint64_t seed = 0;
  int restarts = 1;
  int max_iter = 200;
  double tol = 1e-6;
  double lambda_start = 1.0;
  double lambda_growth = 1.3;
  int hard_after = 30;

  void add_to(CLI::App* app, bool topics_flag) {
    if (topics_flag) {
      app->add_option("--topics", topics, "Number of latent topics")->required()->check(CLI::PositiveNumber);
    }
    app->add_option("--seed", seed, "Base random seed");
    app->add_option("--restarts", restarts, "Random restarts (best objective kept)")->check(CLI::PositiveNumber);
    app->add_option("--max-iter", max_iter, "Iteration cap")->check(CLI::PositiveNumber);
    app->add_option("--tol", tol, "Relative objective change for convergence")->check(CLI::PositiveNumber);
    app->add_option("--lambda-start", lambda_start, "Initial softmax sharpness")->check(CLI::PositiveNumber);
    app->add_option("--lambda-growth", lambda_growth, "Per-iteration sharpness factor")->check(CLI::Range(1.0, 1e6));
    app->add_option("--hard-after", hard_after, "Iteration at which word weights become hard")->check(CLI::NonNegativeNumber);
  }

  ModelConfig config(std::size_t m) const {
    ModelConfig c;
    c.n_topics = m;
    c.seed = seed;
    c.n_restarts = restarts;
    c.max_iter = max_iter;
    c.tol = tol;
    c.anneal.lambda_start = lambda_start;
    c.anneal.lambda_growth = lambda_growth;
    c.anneal.hard_after = std::min(hard_after, max_iter);
    return c;
  }
};

nlohmann::ordered_json config_json(const ModelConfig& c) {
  return {{"n_topics", c.n_topics},         {"max_iter", c.max_iter},
          {"tol", c.tol},                   {"n_restarts", c.n_restarts},
          {"lambda_start", c.anneal.lambda_start}, {"lambda_growth", c.anneal.lambda_growth},
          {"hard_after", c.anneal.hard_after},     {"seed", c.seed},
          {"smoothing", c.smoothing},       {"prob_clip", c.prob_clip}};
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    const auto v = std::stoull(tok, &pos);
    if (pos != tok.size() || v == 0) throw CLI::ValidationError("bad list entry: " + tok);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw CLI::ValidationError("bad list entry: " + tok);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out << text;
}

void emit_manifest(RunManifest& manifest, const std::string& manifest_path,
                   const std::string& primary_output) {
  manifest.finish();
  if (!manifest_path.empty()) {
    manifest.write(manifest_path);
  } else if (!primary_output.empty() && primary_output != "-") {
    manifest.write(primary_output + ".manifest.json");
  } else {
    std::cerr << manifest.to_json();
  }
}

std::string posteriors_csv(const Matrix& p) {
  std::ostringstream out;
  out.precision(17);
  out << "doc";
  for (Eigen::Index j = 0; j < p.cols(); ++j) out << ",topic" << j;
  out << '\n';
  for (Eigen::Index l = 0; l < p.rows(); ++l) {
    out << l;
    for (Eigen::Index j = 0; j < p.cols(); ++j) out << ',' << p(l, j);
    out << '\n';
  }
  return out.str();
}

// Binarizes a corpus against a fitted model's vocabulary.
SparseBinaryMatrix aligned_data(const CorpusFlags& flags, const FittedModel& model,
                                RunManifest& manifest) {
  const RawCorpus corpus = flags.load(manifest);
  BinarizeResult b = binarize(corpus, model.vocab);
  if (b.oov_tokens) std::cerr << "note: " << b.oov_tokens << " out-of-vocabulary tokens ignored\n";
  return std::move(b.matrix);
}

struct FitCommand {
  CorpusFlags corpus;
  ModelFlags model;
  std::string anchors;
  double strength = kDefaultAnchorStrength;
  std::string output = "model.json";
  std::string posteriors;
  std::string manifest;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("fit", "Fit a topic model");
    corpus.add_to(sub, true);
    model.add_to(sub, true);
    sub->add_option("--anchors", anchors, "Anchor file (JSON list of {topic, words, strength})")
        ->check(CLI::ExistingFile);
    sub->add_option("--strength", strength, "Default anchor strength")->check(CLI::Range(1.0, 1e12));
    sub->add_option("--output", output, "Model file to write");
    sub->add_option("--posteriors", posteriors, "Optional CSV of training p(y=1|x)");
    sub->add_option("--manifest", manifest, "Run manifest path");
  }

  int run() {
    RunManifest mf("fit");
    mf.begin_phase("load");
    const RawCorpus raw = corpus.load(mf);
    const Vocabulary vocab = build_vocabulary(raw, corpus.min_df, corpus.max_vocab);
    const BinarizeResult bin = binarize(raw, vocab);
    AnchorSpec spec;
    if (!anchors.empty()) {
      mf.add_input(anchors);
      spec = load_anchor_file(anchors, strength);
    }
    const ModelConfig config = model.config(model.topics);
    mf.config() = config_json(config);
    mf.config()["format"] = corpus.format;
    mf.config()["min_df"] = corpus.min_df;
    mf.config()["max_vocab"] = corpus.max_vocab;
    mf.config()["anchor_strength"] = strength;
    mf.set_seed(config.seed);
    std::cerr << "corpus: " << bin.matrix.n_docs() << " docs, " << bin.matrix.n_words()
              << " words, " << bin.matrix.nnz() << " nonzeros\n";

    mf.begin_phase("fit");
    const FitResult result = fit(bin.matrix, vocab, config, spec);
    for (std::size_t r = 0; r < result.restarts.size(); ++r) {
      const auto& rs = result.restarts[r];
      std::cout << "restart " << r << " seed " << rs.seed << " objective " << rs.objective
                << " iterations " << rs.iterations << (rs.converged ? " converged" : " not-converged")
                << "\n";
    }
    std::cout << "selected restart " << result.model.summary.selected_restart << " total_tc "
              << result.model.total_tc << "\n";

    mf.begin_phase("save");
    save_model(result.model, output);
    mf.add_output(output);
    if (!posteriors.empty()) {
      write_text(posteriors, posteriors_csv(result.posteriors.log_p1.array().exp().matrix()));
      mf.add_output(posteriors);
    }
    emit_manifest(mf, manifest, output);
    return 0;
  }
};

struct TopicsCommand {
  std::string model_path;
  std::size_t top = 10;
  std::string manifest;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("topics", "List topics with their top words");
    sub->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    sub->add_option("--top", top, "Words per topic")->check(CLI::PositiveNumber);
    sub->add_option("--manifest", manifest, "Run manifest path");
  }

  int run() {
    RunManifest mf("topics");
    mf.begin_phase("load");
    mf.add_input(model_path);
    mf.config()["top"] = top;
    const FittedModel model = load_model(model_path);
    std::ostringstream out;
    out.precision(6);
    for (std::size_t k = 0; k < model.n_topics(); ++k) {
      out << k << ' ' << std::fixed << model.tc[k] << std::defaultfloat;
      for (const auto& w : top_words(model, k, top)) out << ' ' << model.vocab.term(w.word);
      out << '\n';
    }
    std::cout << out.str();
    if (!manifest.empty()) emit_manifest(mf, manifest, "");
    return 0;
  }
};

struct TransformCommand {
  std::string model_path;
  CorpusFlags corpus;
  std::string output;
  std::string manifest;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("transform", "Emit p(y_j=1|x) for every document (CSV)");
    sub->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    corpus.add_to(sub, false);
    sub->add_option("--output", output, "CSV output (default stdout)");
    sub->add_option("--manifest", manifest, "Run manifest path");
  }

  int run() {
    RunManifest mf("transform");
    mf.begin_phase("load");
    mf.add_input(model_path);
    const FittedModel model = load_model(model_path);
    const auto data = aligned_data(corpus, model, mf);
    mf.begin_phase("transform");
    write_text(output, posteriors_csv(transform(model, data)));
    if (!output.empty()) mf.add_output(output);
    emit_manifest(mf, manifest, output);
    return 0;
  }
};

struct EvalCommand {
  std::string model_path;
  CorpusFlags corpus;
  std::string labels;
  std::size_t top = 10;
  std::string output;
  std::string csv;
  std::string manifest;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("eval", "Coherence and clustering report (JSON)");
    sub->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    corpus.add_to(sub, false);
    sub->add_option("--labels", labels, "One label per document, one per line")->check(CLI::ExistingFile);
    sub->add_option("--top", top, "Words per topic for coherence")->check(CLI::Range(2, 1000000));
    sub->add_option("--output", output, "JSON report (default stdout)");
    sub->add_option("--csv", csv, "Also write a per-topic CSV table");
    sub->add_option("--manifest", manifest, "Run manifest path");
  }

  int run() {
    RunManifest mf("eval");
    mf.begin_phase("load");
    mf.add_input(model_path);
    mf.config()["top"] = top;
    const FittedModel model = load_model(model_path);
    const auto data = aligned_data(corpus, model, mf);
    std::vector<std::size_t> truth;
    if (!labels.empty()) {
      mf.add_input(labels);
      truth = load_labels(labels).ids;
      if (truth.size() != data.n_docs()) {
        throw InvalidArgument("labels file has " + std::to_string(truth.size()) +
                              " entries for " + std::to_string(data.n_docs()) + " documents");
      }
    }
    mf.begin_phase("evaluate");
    const EvalReport report = evaluate(model, data, top, labels.empty() ? nullptr : &truth);
    write_text(output, eval_report_json(report, model));
    if (!output.empty()) mf.add_output(output);
    if (!csv.empty()) {
      write_text(csv, eval_report_csv(report, model));
      mf.add_output(csv);
    }
    emit_manifest(mf, manifest, output);
    return 0;
  }
};

struct SelectAnchorsCommand {
  CorpusFlags corpus;
  std::string labels;
  std::size_t top = 5;
  bool filter = false;
  std::string output;
  std::string manifest;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("select-anchors", "Rank candidate anchor words per label");
    corpus.add_to(sub, true);
    sub->add_option("--labels", labels, "One label per document")->required()->check(CLI::ExistingFile);
    sub->add_option("--top", top, "Words per label")->check(CLI::PositiveNumber);
    sub->add_flag("--filter-ambiguous", filter, "Drop words selected for more than one label");
    sub->add_option("--output", output, "CSV output (default stdout)");
    sub->add_option("--manifest", manifest, "Run manifest path");
  }

  int run() {
    RunManifest mf("select-anchors");
    mf.begin_phase("load");
    const RawCorpus raw = corpus.load(mf);
    const Vocabulary vocab = build_vocabulary(raw, corpus.min_df, corpus.max_vocab);
    const auto data = binarize(raw, vocab).matrix;
    mf.add_input(labels);
    const LabelSet ls = load_labels(labels);
    mf.config()["top"] = top;
    mf.config()["filter_ambiguous"] = filter;
    mf.begin_phase("select");
    const auto ranked = select_anchor_words(data, ls.ids, vocab, top, filter);
    std::ostringstream out;
    out.precision(17);
    out << "label,rank,word,mi\n";
    for (std::size_t L = 0; L < ranked.size(); ++L) {
      for (std::size_t r = 0; r < ranked[L].size(); ++r) {
        out << ls.names[L] << ',' << r << ',' << vocab.term(ranked[L][r].word) << ','
            << ranked[L][r].mi << '\n';
      }
    }
    write_text(output, out.str());
    if (!output.empty()) mf.add_output(output);
    emit_manifest(mf, manifest, output);
    return 0;
  }
};

struct BenchCommand {
  std::string docs = "5000", vocab = "5000", density = "0.01";
  std::size_t topics = 50;
  int repeats = 3;
  int iters = 10;
  std::uint64_t seed = 0;
  std::string output;
  std::string manifest;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("bench", "Time sparse vs dense posterior updates on synthetic data");
    sub->add_option("--docs", docs, "Comma-separated document counts");
    sub->add_option("--vocab", vocab, "Comma-separated vocabulary sizes");
    sub->add_option("--density", density, "Comma-separated occurrence densities in (0, 1]");
    sub->add_option("--topics", topics, "Number of topics")->check(CLI::PositiveNumber);
    sub->add_option("--repeats", repeats, "Repeats per grid point")->check(CLI::PositiveNumber);
    sub->add_option("--iters", iters, "Iterations per timed fit")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Seed for corpus generation and initialization");
    sub->add_option("--output", output, "CSV output (default stdout)");
    sub->add_option("--manifest", manifest, "Run manifest path");
  }

  int run() {
    RunManifest mf("bench");
    BenchConfig bc;
    bc.docs = parse_size_list(docs);
    bc.vocab = parse_size_list(vocab);
    bc.densities = parse_double_list(density);
    for (double d : bc.densities) {
      if (!(d > 0.0 && d <= 1.0)) throw CLI::ValidationError("--density entries must be in (0, 1]");
    }
    bc.topics = topics;
    bc.repeats = repeats;
    bc.iterations = iters;
    bc.seed = seed;
    mf.config() = {{"docs", bc.docs}, {"vocab", bc.vocab},   {"density", bc.densities},
                   {"topics", topics}, {"repeats", repeats}, {"iters", iters}};
    mf.set_seed(seed);
    mf.begin_phase("bench");
    write_text(output, bench_csv(run_bench(bc)));
    if (!output.empty()) mf.add_output(output);
    emit_manifest(mf, manifest, output);
    return 0;
  }
};

struct HierarchyCommand {
  CorpusFlags corpus;
  ModelFlags model;
  std::string topics;
  std::string prefix = "hierarchy";
  std::string manifest;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("hierarchy", "Fit stacked levels of topics");
    corpus.add_to(sub, true);
    model.add_to(sub, false);
    sub->add_option("--topics", topics, "Comma-separated topic counts per level, e.g. 8,2")->required();
    sub->add_option("--output-prefix", prefix, "Writes <prefix>.level<k>.json and <prefix>.edges.txt");
    sub->add_option("--manifest", manifest, "Run manifest path");
  }

  int run() {
    RunManifest mf("hierarchy");
    const auto ms = parse_size_list(topics);
    mf.begin_phase("load");
    const RawCorpus raw = corpus.load(mf);
    const Vocabulary vocab = build_vocabulary(raw, corpus.min_df, corpus.max_vocab);
    const auto data = binarize(raw, vocab).matrix;
    std::vector<ModelConfig> configs;
    auto levels = nlohmann::ordered_json::array();
    for (auto m : ms) {
      configs.push_back(model.config(m));
      levels.push_back(config_json(configs.back()));
    }
    mf.config()["levels"] = std::move(levels);
    mf.set_seed(model.seed);
    mf.begin_phase("fit");
    const Hierarchy h = fit_hierarchy(data, vocab, configs);
    for (const auto& w : h.warnings) std::cerr << "warning: " << w << "\n";
    mf.begin_phase("save");
    for (std::size_t k = 0; k < h.levels.size(); ++k) {
      const std::string path = prefix + ".level" + std::to_string(k + 1) + ".json";
      save_model(h.levels[k].model, path);
      mf.add_output(path);
      std::cout << "level " << k + 1 << ": " << h.levels[k].input_dim << " -> "
                << h.levels[k].output_dim << " total_tc " << h.levels[k].model.total_tc << "\n";
    }
    write_text(prefix + ".edges.txt", edges_to_text(h.edges));
    mf.add_output(prefix + ".edges.txt");
    emit_manifest(mf, manifest, prefix + ".edges.txt");
    return 0;
  }
};

struct TopicCountCommand {
  CorpusFlags corpus;
  ModelFlags model;
  std::string topics = "1,2,3,4,5,6,7,8,9,10";
  std::string output;
  std::string manifest;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("topic-count", "Total correlation as a function of topic count (CSV)");
    corpus.add_to(sub, true);
    model.add_to(sub, false);
    sub->add_option("--topics", topics, "Ascending comma-separated topic counts");
    sub->add_option("--output", output, "CSV output (default stdout)");
    sub->add_option("--manifest", manifest, "Run manifest path");
  }

  int run() {
    RunManifest mf("topic-count");
    const auto ms = parse_size_list(topics);
    mf.begin_phase("load");
    const RawCorpus raw = corpus.load(mf);
    const Vocabulary vocab = build_vocabulary(raw, corpus.min_df, corpus.max_vocab);
    const auto data = binarize(raw, vocab).matrix;
    const ModelConfig base = model.config(1);
    mf.config() = config_json(base);
    mf.config()["topics"] = ms;
    mf.set_seed(base.seed);
    mf.begin_phase("fit");
    const TopicCountCurve curve = topic_count_curve(data, vocab, base, ms);
    std::ostringstream out;
    out.precision(17);
    out << "n_topics,total_tc,weakest_tc,flagged\n";
    for (const auto& p : curve.points) {
      out << p.n_topics << ',' << p.total_tc << ',' << p.weakest_tc << ','
          << (curve.flagged && *curve.flagged == p.n_topics ? 1 : 0) << '\n';
    }
    write_text(output, out.str());
    if (!output.empty()) mf.add_output(output);
    emit_manifest(mf, manifest, output);
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CorEx topic modeling toolkit"};
  app.require_subcommand(1);
  FitCommand fit_cmd;
  TopicsCommand topics_cmd;
  TransformCommand transform_cmd;
  EvalCommand eval_cmd;
  SelectAnchorsCommand anchors_cmd;
  BenchCommand bench_cmd;
  HierarchyCommand hierarchy_cmd;
  TopicCountCommand count_cmd;
  fit_cmd.add(app);
  topics_cmd.add(app);
  transform_cmd.add(app);
  eval_cmd.add(app);
  anchors_cmd.add(app);
  bench_cmd.add(app);
  hierarchy_cmd.add(app);
  count_cmd.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "fit") return fit_cmd.run();
    if (name == "topics") return topics_cmd.run();
    if (name == "transform") return transform_cmd.run();
    if (name == "eval") return eval_cmd.run();
    if (name == "select-anchors") return anchors_cmd.run();
    if (name == "bench") return bench_cmd.run();
    if (name == "hierarchy") return hierarchy_cmd.run();
    if (name == "topic-count") return count_cmd.run();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
