// Builds an engine over a small synthetic Urdu corpus and asks it one short
// and one long question.

#include <cstdio>
#include <random>

#include "ultra/ultra.hpp"

int main() {
  using namespace ultra;

  corpus::SyntheticCorpusOptions opts;
  opts.articles = 300;
  const corpus::SyntheticCorpus gen(opts);
  const auto articles = gen.articles();

  const auto engine = router::build_engine(articles, router::EngineConfig::paper_profile());

  std::mt19937_64 rng(1);
  for (const auto& text : {gen.short_query(0, rng), gen.long_query(2, rng)}) {
    const auto q = router::Query::make(text);
    router::QueryOptions qo;
    qo.k = 5;
    const auto recs = engine.recommend(q, qo);
    std::printf("%zu characters -> %s pathway\n", q.char_len, router::to_string(engine.pathway_for(q).config.name));
    for (const auto& r : recs) {
      std::printf("  %zu. #%llu  %.4f  %s\n", r.rank, static_cast<unsigned long long>(r.article_id), r.score,
                  r.category.c_str());
    }
  }
  return 0;
}
