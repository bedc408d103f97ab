// ultra: offline build and online query over the dual-pathway engine.
//
// Exit codes: 0 ok, 2 usage, 3 file not found or unwritable, 4 malformed or
// incompatible file, 5 invalid or empty input, 6 build stage failure,
// 7 output exists (pass --force).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ultra/ultra.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Refusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ultra::ErrorKind k) {
  using ultra::ErrorKind;
  switch (k) {
    case ErrorKind::io:
    case ErrorKind::not_found: return 3;
    case ErrorKind::format:
    case ErrorKind::version_mismatch:
    case ErrorKind::corrupt:
    case ErrorKind::truncated:
    case ErrorKind::dimension_mismatch:
    case ErrorKind::non_finite: return 4;
    case ErrorKind::invalid_argument:
    case ErrorKind::empty_input:
    case ErrorKind::provider: return 5;
  }
  return 1;
}

// Environment variables may stand in for path flags, nothing else.
void env_default(std::string& value, const char* var) {
  if (!value.empty()) return;
  if (const char* v = std::getenv(var)) value = v;
}

void refuse_existing_file(const fs::path& p, bool force) {
  if (!force && fs::exists(p)) throw Refusal(p.string() + " already exists; pass --force to overwrite");
}

void refuse_nonempty_dir(const fs::path& p, bool force) {
  if (!force && fs::exists(p) && !(fs::is_directory(p) && fs::is_empty(p))) {
    throw Refusal(p.string() + " already exists and is not empty; pass --force to overwrite");
  }
}

std::string read_text_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) ultra::fail(ultra::ErrorKind::not_found, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string out;
  std::size_t articles = 1000;
  std::size_t categories = 5;
  std::uint64_t seed = 42;
  bool force = false;
};

int cmd_synth(const SynthArgs& a, bool as_json) {
  refuse_existing_file(a.out, a.force);
  ultra::corpus::SyntheticCorpusOptions opts;
  opts.articles = a.articles;
  opts.categories = a.categories;
  opts.seed = a.seed;
  const auto records = ultra::corpus::SyntheticCorpus(opts).records();
  std::ofstream out(a.out, std::ios::binary);
  if (!out) ultra::fail(ultra::ErrorKind::io, "cannot write " + a.out);
  for (const auto& r : records) {
    out << json{{"headline", *r.headline}, {"news_text", *r.news_text}, {"category", *r.category},
                {"source", *r.source}}
               .dump()
        << '\n';
  }
  if (as_json) {
    std::cout << json{{"records", records.size()}, {"output", a.out}}.dump() << '\n';
  } else {
    std::cout << "wrote " << records.size() << " synthetic records to " << a.out << '\n';
  }
  return 0;
}

struct PreprocessArgs {
  std::string input;
  std::string stoplist;
  std::string out;
  std::string report;
  std::string format = "auto";
  std::string on_malformed = "skip";
  bool no_headline_stopwords = false;
  bool no_repair = false;
  bool force = false;
};

int cmd_preprocess(PreprocessArgs a, bool as_json) {
  using namespace ultra::corpus;
  env_default(a.stoplist, "ULTRA_STOPLIST");
#ifdef ULTRA_DEFAULT_STOPLIST
  if (a.stoplist.empty()) a.stoplist = ULTRA_DEFAULT_STOPLIST;
#endif
  if (a.stoplist.empty()) ultra::fail(ultra::ErrorKind::invalid_argument, "no stop list given (--stoplist)");
  refuse_existing_file(a.out, a.force);
  if (!a.report.empty()) refuse_existing_file(a.report, a.force);

  const StopList stops = StopList::load(a.stoplist);
  const InputFormat fmt = a.format == "csv" ? InputFormat::csv
                          : a.format == "jsonl" ? InputFormat::jsonl
                                                : InputFormat::automatic;
  const auto policy = a.on_malformed == "fail" ? MalformedPolicy::fail : MalformedPolicy::skip;
  const ReadResult read = read_records(a.input, fmt, {}, policy);
  for (const auto& issue : read.issues) {
    std::cerr << a.input << ":" << issue.line << ": skipped malformed row: " << issue.message << '\n';
  }

  PreprocessOptions opts;
  opts.stopwords_on_headline = !a.no_headline_stopwords;
  opts.repair_encoding = !a.no_repair;
  const auto result = preprocess(read.records, stops, opts);
  write_articles(a.out, result.articles);

  json report = result.report;
  report["malformed_rows"] = read.issues.size();
  if (!a.report.empty()) {
    std::ofstream r(a.report);
    if (!r) ultra::fail(ultra::ErrorKind::io, "cannot write " + a.report);
    r << report.dump(2) << '\n';
  }
  if (as_json) {
    std::cout << report.dump() << '\n';
  } else {
    const auto& rep = result.report;
    std::cout << "records in          " << rep.records_in << '\n'
              << "records out         " << rep.records_out << '\n'
              << "nulls removed       " << rep.nulls_removed << '\n'
              << "duplicates removed  " << rep.duplicates_removed << '\n'
              << "short removed       " << rep.short_removed << '\n'
              << "malformed rows      " << read.issues.size() << '\n'
              << "words               " << rep.words_total << '\n'
              << "stop words removed  " << rep.stopwords_removed << " (" << 100.0 * rep.removal_rate << "%)\n"
              << "avg article chars   " << rep.avg_article_len << '\n'
              << "avg headline chars  " << rep.avg_headline_len << '\n'
              << "categories          " << rep.categories << '\n'
              << "sources             " << rep.sources << '\n';
  }
  return 0;
}

struct BuildArgs {
  std::string articles;
  std::string out;
  std::string config;
  std::string profile = "paper";
  std::string provider;
  std::vector<std::string> exchange;
  std::optional<std::uint64_t> seed;
  std::string index;
  bool force = false;
};

int cmd_build(BuildArgs a, bool as_json) {
  using namespace ultra;
  env_default(a.out, "ULTRA_ENGINE_DIR");
  if (a.out.empty()) fail(ErrorKind::invalid_argument, "no output directory given (--out)");
  refuse_nonempty_dir(a.out, a.force);

  router::EngineConfig cfg = router::EngineConfig::paper_profile();
  fs::path base;
  if (!a.config.empty()) {
    try {
      json::parse(read_text_file(a.config)).get_to(cfg);
    } catch (const json::exception& e) {
      fail(ErrorKind::format, "bad config " + a.config + ": " + e.what());
    }
    base = fs::path(a.config).parent_path();
  }
  if (!a.provider.empty()) {
    cfg.embedder.provider =
        a.provider == "exchange" ? embed::ProviderKind::exchange_file : embed::ProviderKind::synthetic;
  }
  if (!a.exchange.empty()) {
    cfg.embedder.exchange_paths.clear();
    for (const auto& p : a.exchange) cfg.embedder.exchange_paths.push_back(fs::absolute(p));
  } else {
    for (auto& p : cfg.embedder.exchange_paths) p = fs::absolute(p.is_absolute() || base.empty() ? p : base / p);
  }
  if (cfg.query_stoplist && !cfg.query_stoplist->is_absolute() && !base.empty()) {
    cfg.query_stoplist = base / *cfg.query_stoplist;
  }
  if (a.seed) cfg.embedder.seed = *a.seed;
  if (!a.index.empty()) {
    cfg.short_path.index_kind = cfg.long_path.index_kind = index::parse_index_kind(a.index);
  }

  const auto articles = corpus::read_articles(a.articles);
  const auto engine = router::build_engine(articles, cfg);
  const auto manifest = engine.save(a.out);

  if (as_json) {
    std::cout << json{{"manifest", manifest.string()},
                      {"articles", articles.size()},
                      {"collections",
                       {{{"name", "headline"}, {"dim", engine.short_pathway().collection.dim()}},
                        {{"name", "content"}, {"dim", engine.long_pathway().collection.dim()}}}}}
                     .dump()
              << '\n';
  } else {
    std::cout << "indexed " << articles.size() << " articles\n";
    for (const auto* p : {&engine.short_pathway(), &engine.long_pathway()}) {
      std::cout << "  " << router::to_string(p->config.name) << ": " << embed::to_string(p->config.pooling)
                << " pooling, " << p->collection.dim() << "D, " << index::to_string(p->collection.kind()) << '\n';
    }
    std::cout << "manifest " << manifest.string() << '\n';
  }
  return 0;
}

struct QueryArgs {
  std::string manifest;
  std::string text;
  std::string file;
  bool repl = false;
  std::size_t k = 0;
  std::optional<std::uint64_t> exclude_id;
  std::string query_id;
  bool exact = false;
};

std::string render(const ultra::router::Engine& engine, const ultra::router::Query& q,
                   const std::vector<ultra::router::Recommendation>& recs, std::size_t k, bool as_json) {
  using namespace ultra::router;
  const auto& pathway = engine.pathway_for(q).config;
  std::ostringstream out;
  if (as_json) {
    out << json{{"char_len", q.char_len},
                {"theta", engine.config().theta},
                {"pathway", to_string(pathway.name)},
                {"k", k},
                {"results", recs}}
               .dump()
        << '\n';
    return out.str();
  }
  out << "pathway=" << to_string(pathway.name) << " (length " << q.char_len
      << (q.char_len < engine.config().theta ? " < " : " >= ") << "theta " << engine.config().theta << ")\n";
  for (const auto& r : recs) {
    char score[32];
    std::snprintf(score, sizeof score, "%.6f", r.score);
    out << r.rank << '\t' << r.article_id << '\t' << score << '\t' << r.category << '\t' << r.headline << '\n';
  }
  return out.str();
}

int cmd_query(QueryArgs a, bool as_json) {
  using namespace ultra;
  env_default(a.manifest, "ULTRA_MANIFEST");
  if (a.manifest.empty()) fail(ErrorKind::invalid_argument, "no manifest given (--manifest)");
  const int sources = !a.text.empty() + !a.file.empty() + a.repl;
  if (sources != 1) fail(ErrorKind::invalid_argument, "give exactly one of --text, --file, --repl");

  const auto engine = router::Engine::load(a.manifest);
  router::QueryOptions opts;
  opts.k = a.k ? a.k : engine.config().default_k;
  opts.exclude_id = a.exclude_id;
  opts.exact = a.exact;
  if (!a.query_id.empty()) opts.query_id = a.query_id;

  auto serve = [&](const std::string& text) {
    const auto q = router::Query::make(text);
    std::cout << render(engine, q, engine.recommend(q, opts), *opts.k, as_json) << std::flush;
  };

  if (!a.repl) {
    serve(a.text.empty() ? read_text_file(a.file) : a.text);
    return 0;
  }
  // One query per line; a failing line reports and the loop goes on.
  int status = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (utf8::trim(line).empty()) continue;
    try {
      serve(line);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      status = exit_code(e.kind());
    }
  }
  return status;
}

// query_id <TAB> text, one per line.
std::vector<std::pair<std::string, std::string>> read_query_file(const fs::path& p) {
  std::istringstream in(read_text_file(p));
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (ultra::utf8::trim(line).empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      ultra::fail(ultra::ErrorKind::format, p.string() + ":" + std::to_string(n) + ": expected query_id<TAB>text");
    }
    out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

struct EvaluateArgs {
  std::string run;
  std::string manifest;
  std::string queries;
  std::string qrels;
  std::string write_run;
  std::size_t k = 10;
  bool exact = false;
};

int cmd_evaluate(EvaluateArgs a, bool as_json) {
  using namespace ultra;
  if (a.run.empty() == a.queries.empty()) {
    fail(ErrorKind::invalid_argument, "give either --run, or --manifest with --queries");
  }
  const auto qrels = eval::read_qrels(a.qrels);
  eval::RetrievalRun run;
  if (!a.run.empty()) {
    run = eval::read_run(a.run);
  } else {
    env_default(a.manifest, "ULTRA_MANIFEST");
    if (a.manifest.empty()) fail(ErrorKind::invalid_argument, "--queries needs --manifest");
    const auto engine = router::Engine::load(a.manifest);
    run.set_label("engine");
    for (const auto& [qid, text] : read_query_file(a.queries)) {
      router::QueryOptions opts;
      opts.k = a.k;
      opts.exact = a.exact;
      opts.query_id = "query:" + qid;
      std::vector<eval::ArticleId> ids;
      for (const auto& r : engine.recommend(text, opts)) ids.push_back(r.article_id);
      run.add(qid, std::move(ids));
    }
    if (!a.write_run.empty()) eval::write_run(a.write_run, run);
  }
  const auto report = eval::precision_at_k(run, qrels, a.k);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << (as_json ? report.to_json().dump() + "\n" : report.to_table());
  return 0;
}

struct CompareArgs {
  std::string truth;
  std::vector<std::string> candidates;
  std::string articles;
  std::size_t dim = 128;
  std::size_t queries = 50;
  std::string pooling = "mean";
  std::uint64_t seed = 7;
  std::size_t k = 50;
  std::string csv;
};

int cmd_compare(const CompareArgs& a, bool as_json) {
  using namespace ultra;
  eval::ComparisonTable table;
  if (!a.truth.empty()) {
    if (a.candidates.empty()) fail(ErrorKind::invalid_argument, "--truth needs at least one --candidate run");
    const auto truth = eval::read_run(a.truth);
    table.k = a.k;
    for (const auto& c : a.candidates) table.reports.push_back(eval::overlap_at_k(truth, eval::read_run(c), a.k));
  } else {
    // Reducer fidelity over a corpus: PCA, a seeded random projection and the
    // identity against full-dimensional exact search. Queries are held-out
    // articles' own embeddings.
    if (a.articles.empty()) fail(ErrorKind::invalid_argument, "give --truth with --candidate runs, or --articles");
    const auto articles = corpus::read_articles(a.articles);
    require(articles.size() > a.queries, ErrorKind::invalid_argument, "need more articles than --queries");
    const embed::Embedder embedder(std::make_shared<embed::SyntheticProvider>(a.seed));
    const auto pooling = embed::parse_pooling(a.pooling);
    const std::size_t D = embedder.dim();
    const std::size_t n = articles.size() - a.queries;
    std::vector<float> full(n * D);
    std::vector<index::ArticleId> ids(n);
    std::vector<std::vector<float>> qv;
    std::vector<eval::QueryId> qids;
    for (std::size_t i = 0; i < articles.size(); ++i) {
      const auto& art = articles[i];
      auto v = embedder.embed_text("content:" + std::to_string(art.id), art.content, pooling,
                                   embed::SourceKind::content).vector;
      if (i < n) {
        ids[i] = art.id;
        std::copy(v.begin(), v.end(), full.begin() + static_cast<std::ptrdiff_t>(i * D));
      } else {
        qids.push_back("Q" + std::to_string(qv.size() + 1));
        qv.push_back(std::move(v));
      }
    }
    reduce::PcaOptions popts;
    popts.allow_rank_padding = true;
    auto pca = std::make_shared<reduce::PcaReducer>(reduce::pca_fit(full, n, D, a.dim, popts));
    auto rp = std::make_shared<reduce::RandomProjectionReducer>(D, a.dim, a.seed, pca->model().mean);
    auto id = std::make_shared<reduce::IdentityReducer>(D);
    const auto truth = index::VectorCollection::build("ground-truth", D, full, ids,
                                                      std::vector<index::Metadata>(n), index::IndexKind::exact);
    std::vector<eval::ReducedSpace> spaces;
    spaces.push_back(eval::reduce_collection("PCA", pca, full, ids));
    spaces.push_back(eval::reduce_collection("RP", rp, full, ids));
    spaces.push_back(eval::reduce_collection("identity", id, full, ids));
    table = eval::compare_reducers(truth, spaces, qv, qids, std::min(a.k, n));
  }
  if (!a.csv.empty()) {
    std::ofstream out(a.csv);
    if (!out) fail(ErrorKind::io, "cannot write " + a.csv);
    out << table.to_csv();
  }
  std::cout << (as_json ? table.to_json().dump() + "\n" : table.to_table());
  return 0;
}

struct SweepArgs {
  std::string articles;
  std::vector<std::size_t> dims{64, 128, 256};
  std::vector<std::size_t> lengths{50, 100, 150, 200, 250};
  std::size_t per_length = 20;
  std::size_t k = 10;
  double held_out = 0.1;
  std::string field = "content";
  std::string pooling = "mean";
  std::uint64_t seed = 7;
};

int cmd_sweep(const SweepArgs& a, bool as_json) {
  using namespace ultra;
  const auto articles = corpus::read_articles(a.articles);
  require(a.held_out > 0.0 && a.held_out < 1.0, ErrorKind::invalid_argument, "--held-out must be in (0, 1)");
  const auto n_held = std::max<std::size_t>(1, static_cast<std::size_t>(a.held_out * articles.size()));
  require(articles.size() > n_held + 1, ErrorKind::invalid_argument, "corpus too small for the held-out split");
  std::vector<std::string> corpus_texts, held;
  for (std::size_t i = 0; i < articles.size(); ++i) {
    const auto& text = a.field == "headline" ? articles[i].headline : articles[i].content;
    (i + n_held < articles.size() ? corpus_texts : held).push_back(text);
  }
  const embed::Embedder embedder(std::make_shared<embed::SyntheticProvider>(a.seed));
  const auto rep = eval::sweep_dimensions(embedder, embed::parse_pooling(a.pooling), corpus_texts, held, a.dims,
                                          a.lengths, a.per_length, a.k, a.seed);
  std::cout << (as_json ? rep.to_json().dump() + "\n" : rep.to_table());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ultra - dual-pathway Urdu semantic retrieval"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write a seeded synthetic news table (JSON lines)");
  s->add_option("--out", synth.out, "Output file")->required();
  s->add_option("--articles", synth.articles, "Row count")->check(CLI::PositiveNumber);
  s->add_option("--categories", synth.categories, "Category count")->check(CLI::PositiveNumber);
  s->add_option("--seed", synth.seed, "Generator seed");
  s->add_flag("--force", synth.force, "Overwrite the output");

  PreprocessArgs pre;
  auto* p = app.add_subcommand("preprocess", "Clean a raw news table into articles");
  p->add_option("--input", pre.input, "CSV or JSON-lines table")->required();
  p->add_option("--stoplist", pre.stoplist, "Stop-word file (env ULTRA_STOPLIST)");
  p->add_option("--out", pre.out, "Articles output (JSON lines)")->required();
  p->add_option("--report", pre.report, "Also write the statistics report here");
  p->add_option("--format", pre.format, "Input format")->check(CLI::IsMember({"auto", "csv", "jsonl"}));
  p->add_option("--on-malformed", pre.on_malformed, "What to do with bad rows")
      ->check(CLI::IsMember({"skip", "fail"}));
  p->add_flag("--no-headline-stopwords", pre.no_headline_stopwords, "Keep stop words in headlines");
  p->add_flag("--no-repair", pre.no_repair, "Skip mis-decoding repair");
  p->add_flag("--force", pre.force, "Overwrite outputs");

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Embed, reduce and index articles into an engine directory");
  b->add_option("--articles", build.articles, "Articles (JSON lines)")->required();
  b->add_option("--out", build.out, "Engine directory (env ULTRA_ENGINE_DIR)");
  b->add_option("--config", build.config, "Engine config JSON; missing keys keep profile values");
  b->add_option("--profile", build.profile, "Base profile")->check(CLI::IsMember({"paper"}));
  b->add_option("--provider", build.provider, "Token embedding source")
      ->check(CLI::IsMember({"synthetic", "exchange"}));
  b->add_option("--exchange", build.exchange, "Exchange files for --provider exchange");
  b->add_option("--seed", build.seed, "Synthetic embedder seed");
  b->add_option("--index", build.index, "Index kind for both pathways")->check(CLI::IsMember({"exact", "hnsw"}));
  b->add_flag("--force", build.force, "Overwrite a non-empty engine directory");

  QueryArgs query;
  auto* q = app.add_subcommand("query", "Recommend articles for a query");
  q->add_option("--manifest", query.manifest, "Engine manifest (env ULTRA_MANIFEST)");
  q->add_option("--text", query.text, "Query text");
  q->add_option("--file", query.file, "Read the query from a file");
  q->add_flag("--repl", query.repl, "Read one query per stdin line");
  q->add_option("-k", query.k, "Result count (default from the manifest)")->check(CLI::PositiveNumber);
  q->add_option("--exclude-id", query.exclude_id, "Drop this article from the results");
  q->add_option("--query-id", query.query_id, "Exchange key for the query text");
  q->add_flag("--exact", query.exact, "Exhaustive search instead of HNSW");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Precision@k of a run against judgments");
  e->add_option("--run", ev.run, "Run file (JSON lines)");
  e->add_option("--manifest", ev.manifest, "Engine manifest, with --queries (env ULTRA_MANIFEST)");
  e->add_option("--queries", ev.queries, "query_id<TAB>text file to run through the engine");
  e->add_option("--qrels", ev.qrels, "Judgments (TSV)")->required();
  e->add_option("--write-run", ev.write_run, "Save the engine run here");
  e->add_option("-k", ev.k, "Depth")->check(CLI::PositiveNumber);
  e->add_flag("--exact", ev.exact, "Exhaustive search instead of HNSW");

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Top-k overlap and Jaccard against a ground truth");
  c->add_option("--truth", cmp.truth, "Ground-truth run file");
  c->add_option("--candidate", cmp.candidates, "Candidate run files");
  c->add_option("--articles", cmp.articles, "Articles for a reducer comparison instead of runs");
  c->add_option("--dim", cmp.dim, "Reduced dimension")->check(CLI::PositiveNumber);
  c->add_option("--queries", cmp.queries, "Held-out query count")->check(CLI::PositiveNumber);
  c->add_option("--pooling", cmp.pooling, "Pooling")->check(CLI::IsMember({"mean", "max", "cls"}));
  c->add_option("--seed", cmp.seed, "Embedder and projection seed");
  c->add_option("-k", cmp.k, "Depth")->check(CLI::PositiveNumber);
  c->add_option("--csv", cmp.csv, "Also write the table as CSV");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Overlap against full-dimensional search by PCA size and query length");
  w->add_option("--articles", sw.articles, "Articles (JSON lines)")->required();
  w->add_option("--dims", sw.dims, "PCA dimensions")->delimiter(',');
  w->add_option("--lengths", sw.lengths, "Query lengths in characters")->delimiter(',');
  w->add_option("--per-length", sw.per_length, "Queries per length")->check(CLI::PositiveNumber);
  w->add_option("-k", sw.k, "Depth")->check(CLI::PositiveNumber);
  w->add_option("--held-out", sw.held_out, "Fraction of articles used only for queries");
  w->add_option("--field", sw.field, "Indexed field")->check(CLI::IsMember({"headline", "content"}));
  w->add_option("--pooling", sw.pooling, "Pooling")->check(CLI::IsMember({"mean", "max", "cls"}));
  w->add_option("--seed", sw.seed, "Embedder and sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*s) return cmd_synth(synth, as_json);
    if (*p) return cmd_preprocess(pre, as_json);
    if (*b) return cmd_build(build, as_json);
    if (*q) return cmd_query(query, as_json);
    if (*e) return cmd_evaluate(ev, as_json);
    if (*c) return cmd_compare(cmp, as_json);
    if (*w) return cmd_sweep(sw, as_json);
  } catch (const Refusal& r) {
    std::cerr << "error: " << r.what() << '\n';
    return 7;
  } catch (const ultra::StageError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 6;
  } catch (const ultra::Error& err) {
    std::cerr << "error (" << ultra::to_string(err.kind()) << "): " << err.what() << '\n';
    return exit_code(err.kind());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 2;
}
