// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "sublink/aggregation.hpp"
#include "sublink/candidates.hpp"
#include "sublink/chunking.hpp"
#include "sublink/cli.hpp"
#include "sublink/corpus.hpp"
#include "sublink/error.hpp"
#include "sublink/evaluation.hpp"
#include "sublink/head.hpp"
#include "sublink/nif.hpp"
#include "sublink/pipeline.hpp"
#include "sublink/providers.hpp"
#include "sublink/service.hpp"
#include "sublink/tokenizer.hpp"
#include "sublink/utf8.hpp"
#include "support/oracles.hpp"
#include "support/pipelines.hpp"
#include "support/synthetic.hpp"

using namespace sublink;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

struct Criterion {
  int number;
  std::string title;
  double time_limit;  // seconds; 0 = none
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(r, c);
  for (auto& v : m.values()) v = normal(rng);
  return m;
}

AnnotatedDocument tokenized(std::string id, std::string text) {
  AnnotatedDocument doc{std::move(id), std::move(text), {}, {}, {}};
  doc.tokens = tokenize(ReferenceTokenizer{}, doc.text, TokenizationMode::mention_agnostic);
  return doc;
}

Outcome loss_oracle() {
  Outcome o;
  std::mt19937_64 rng(101);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t kb = 1 + rng() % 12;
    const std::size_t rows = 1 + rng() % 4;
    const LogitMatrix scores(random_matrix(rows, kb, rng, 5.0));
    std::vector<std::size_t> gold(rows);
    for (auto& g : gold) g = rng() % kb;
    std::set<std::size_t> psi(gold.begin(), gold.end());
    while (psi.size() < std::min<std::size_t>(kb, 8) && rng() % 3) psi.insert(rng() % kb);
    if (psi.size() > 8) continue;
    const std::vector<std::size_t> examples(psi.begin(), psi.end());
    const auto report = selection_loss({FeatureMatrix(rows, 1), gold, examples}, scores);
    double mean = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      std::vector<double> p;
      std::vector<int> a;
      for (std::size_t c : examples) {
        p.push_back(scores(i, c));
        a.push_back(c == gold[i]);
      }
      mean += oracle::scalar_bce(p, a);
    }
    mean /= static_cast<double>(rows);
    worst = std::max(worst, std::abs(report.value - mean));
  }
  o.require(worst <= 1e-9, "max |loss - oracle| = " + fmt("%.3g", worst));

  const auto single = [](std::vector<double> p) {
    std::vector<std::size_t> cols(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) cols[j] = j;
    const std::size_t n = p.size();
    return selection_loss({FeatureMatrix(1, 1), {0}, cols}, LogitMatrix(1, n, std::move(p))).value;
  };
  const double ln2 = single({0.0});
  const double pair = single({2.0, -2.0});
  const double sat = single({20.0});
  o.require(std::abs(ln2 - std::log(2.0)) <= 1e-9, "ln 2 case gave " + fmt("%.12f", ln2));
  o.require(std::abs(pair - 0.126928) <= 5e-7, "(2,-2) case gave " + fmt("%.9f", pair));
  o.require(std::abs(sat - 2.06e-9) <= 5e-12, "saturated case gave " + fmt("%.4g", sat));
  if (o.pass) o.detail = "200 instances, max deviation " + fmt("%.2g", worst) + "; ln2/0.126928/2.06e-9 reproduced";
  return o;
}

Outcome gradient_check() {
  Outcome o;
  std::mt19937_64 rng(202);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng() % 5;
    const std::size_t kb = 2 + rng() % 6;
    const std::size_t rows = 1 + rng() % 4;
    const FeatureMatrix h(random_matrix(rows, d, rng, 1.0));
    HeadWeights w(random_matrix(d, kb, rng, 1.0));
    std::vector<std::size_t> gold(rows);
    for (auto& g : gold) g = rng() % kb;
    std::set<std::size_t> psi(gold.begin(), gold.end());
    for (std::size_t c = 0; c < kb; ++c)
      if (rng() % 2) psi.insert(c);
    const TrainingBatch batch{h, gold, {psi.begin(), psi.end()}};
    const auto analytic = *selection_loss(batch, project(h, w), true).gradient;
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t c = 0; c < kb; ++c) {
        const double saved = w(k, c);
        const double eps = 1e-5;
        w(k, c) = saved + eps;
        const double up = selection_loss(batch, project(h, w)).value;
        w(k, c) = saved - eps;
        const double down = selection_loss(batch, project(h, w)).value;
        w(k, c) = saved;
        const double numeric = (up - down) / (2 * eps);
        const double scale = std::max(std::abs(numeric), std::abs(analytic(k, c)));
        if (scale < 1e-7) {
          o.require(std::abs(numeric - analytic(k, c)) < 1e-9, "nonzero gradient where both should vanish");
        } else {
          worst = std::max(worst, std::abs(numeric - analytic(k, c)) / scale);
        }
      }
  }
  o.require(worst < 1e-4, "max relative error " + fmt("%.3g", worst));
  if (o.pass) o.detail = "50 instances, max relative error " + fmt("%.2g", worst);
  return o;
}

Outcome aggregation_oracle() {
  Outcome o;
  std::mt19937_64 rng(303);
  std::normal_distribution<double> normal(0, 2);
  const std::vector<std::string> pool = {"ab", "c", "and", ",", "Kelly", "of", "xy.", "Ü", "Grace", "US"};
  std::size_t compared = 0, with_store = 0, nonempty = 0;
  while (compared < 1000) {
    const std::size_t kb = 2 + rng() % 4;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i + 1 < kb; ++i) ids.push_back("E" + std::to_string(i));
    ids.insert(ids.begin() + static_cast<std::ptrdiff_t>(rng() % kb), "O");
    const EntityVocabulary vocab(ids);
    std::string text;
    const std::size_t words = 1 + rng() % 4;
    for (std::size_t w = 0; w < words; ++w) text += (w ? " " : "") + pool[rng() % pool.size()];
    auto doc = tokenized("doc" + std::to_string(rng() % 3), text);
    if (doc.tokens.size() > 6) continue;
    LogitMatrix scores(doc.tokens.size(), kb);
    for (auto& v : scores.values()) v = rng() % 2 ? normal(rng) : static_cast<double>(rng() % 3);

    oracle::ReferenceConfig ref{1 + rng() % std::min<std::size_t>(3, kb), static_cast<int>(rng() % 3)};
    const auto random_list = [&] {
      std::vector<std::string> list;
      for (const auto& id : ids)
        if (rng() % 2) list.push_back(id);
      list.push_back("Unlisted_" + std::to_string(rng() % 2));
      return list;
    };
    CandidateStore store;
    if (ref.policy == 2) {
      std::vector<CandidateStore::AwareEntry> entries;
      for (std::size_t e = 0; e < 4; ++e) {
        // Occurrence keys at real token spans of this document.
        const std::size_t a = rng() % doc.tokens.size();
        const std::size_t b = a + rng() % (doc.tokens.size() - a);
        const OccurrenceKey key{doc.id, doc.tokens[a].start, doc.tokens[b].end};
        if (std::any_of(entries.begin(), entries.end(), [&](const auto& x) { return x.key == key; })) continue;
        entries.push_back({key, utf8::slice(doc.text, key.start, key.end), random_list()});
      }
      store = CandidateStore::aware(entries);
    } else {
      std::vector<std::pair<std::string, std::vector<std::string>>> entries;
      for (const auto& w : pool)
        if (rng() % 2) entries.push_back({w, random_list()});
      store = CandidateStore::agnostic(entries);
    }
    AggregationConfig cfg;
    cfg.k = ref.k;
    cfg.candidate_policy = ref.policy == 0   ? CandidatePolicy::none
                           : ref.policy == 1 ? CandidatePolicy::context_agnostic
                                             : CandidatePolicy::context_aware;
    const auto got = aggregate(doc, scores, vocab, cfg, &store);
    const auto want = oracle::reference_aggregate(doc, scores, vocab, ref, &store, cfg.lexicon);
    if (got != want) {
      o.require(false, "mismatch on \"" + text + "\" (k=" + std::to_string(ref.k) + ")");
      return o;
    }
    ++compared;
    with_store += ref.policy != 0;
    nonempty += !got.empty();
  }
  o.detail = std::to_string(compared) + " instances equal (" + std::to_string(with_store) + " with candidate stores, " +
             std::to_string(nonempty) + " non-empty)";
  return o;
}

Outcome synthetic_end_to_end() {
  Outcome o;
  const auto corpus = testing_support::make_synthetic_corpus(100, 300, 8, 404);
  const auto tokenizer = std::make_shared<ReferenceTokenizer>();
  const auto provider = std::make_shared<MockScoreProvider>(corpus.vocab, MockConfig{0.9, 0.0, 0});

  const auto run = [&](std::shared_ptr<const CandidateStore> store) {
    LinkerConfig cfg;
    if (store) cfg.aggregation.candidate_policy = CandidatePolicy::context_aware;
    const Linker linker(corpus.vocab, tokenizer, provider, cfg, store);
    std::vector<AnnotatedDocument> predicted;
    for (const auto& doc : corpus.docs) {
      auto prepared = linker.prepare(doc);
      for (const auto& s : linker.link(prepared)) prepared.predicted.push_back(s.span);
      predicted.push_back(std::move(prepared));
    }
    return score_el(corpus.docs, predicted, {&corpus.vocab, nullptr});
  };

  const auto plain = run(nullptr);
  o.require(plain.micro_f1 == 1.0, "mock EL micro-F1 " + fmt("%.6f", plain.micro_f1));

  std::mt19937_64 rng(405);
  std::vector<CandidateStore::AwareEntry> entries;
  for (const auto& doc : corpus.docs)
    for (const auto& g : doc.gold) {
      const std::string distractor = corpus.vocab.id_of(rng() % (corpus.vocab.size() - 1));
      std::vector<std::string> list = {g.entity};
      if (distractor != g.entity) list.push_back(distractor);
      entries.push_back({{doc.id, g.start, g.end}, utf8::slice(doc.text, g.start, g.end), list});
    }
  const auto full = run(std::make_shared<CandidateStore>(CandidateStore::aware(entries)));
  o.require(full.counts.tp == plain.counts.tp, "complete candidate lists changed tp");

  const std::size_t m = 37;
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < m; ++i) {
    auto& list = entries[order[i]].entities;
    list.erase(list.begin());
    if (list.empty()) list.push_back("Nowhere");
  }
  const auto pruned = run(std::make_shared<CandidateStore>(CandidateStore::aware(entries)));
  o.require(pruned.counts.tp + m == plain.counts.tp,
            "tp " + std::to_string(pruned.counts.tp) + " after removing gold from " + std::to_string(m) +
                " lists, expected " + std::to_string(plain.counts.tp - m));
  if (o.pass)
    o.detail = "F1 = 1.0 over " + std::to_string(plain.counts.tp) + " spans; removing gold from " +
               std::to_string(m) + " lists gives tp " + std::to_string(pruned.counts.tp);
  return o;
}

Outcome chunking_invariants() {
  Outcome o;
  const ChunkingConfig cfg{254, 20};
  std::mt19937_64 rng(505);
  for (std::size_t n = 1; n <= 1000 && o.pass; ++n) {
    const auto chunks = chunk_ranges(n, cfg);
    std::vector<int> cover(n, 0);
    for (std::size_t k = 0; k < chunks.size(); ++k) {
      o.require(chunks[k].token_start == k * 234, "stride broken at n=" + std::to_string(n));
      o.require(chunks[k].size() <= 254 && chunks[k].size() > 0, "bad chunk size at n=" + std::to_string(n));
      for (std::size_t i = chunks[k].token_start; i < chunks[k].token_end; ++i) ++cover[i];
      if (k + 1 < chunks.size() && chunks[k + 1].size() == 254) {
        o.require(chunks[k].token_end - chunks[k + 1].token_start == 20, "overlap broken at n=" + std::to_string(n));
      }
      if (k + 1 < chunks.size()) {
        o.require(chunks[k].token_end > chunks[k + 1].token_start, "gap at n=" + std::to_string(n));
      }
    }
    o.require(std::all_of(cover.begin(), cover.end(), [](int c) { return c >= 1; }),
              "uncovered token at n=" + std::to_string(n));
    o.require(chunks.back().token_end == n, "last chunk does not end at n=" + std::to_string(n));

    LogitMatrix doc(n, 2);
    for (auto& v : doc.values()) v = static_cast<double>(rng() % 100000) / 977.0;
    std::vector<LogitMatrix> per;
    for (const auto& c : chunks) {
      LogitMatrix m(c.size(), 2);
      for (std::size_t r = 0; r < c.size(); ++r) {
        m(r, 0) = doc(c.token_start + r, 0);
        m(r, 1) = doc(c.token_start + r, 1);
      }
      per.push_back(m);
    }
    o.require(merge_chunk_scores(chunks, per) == doc, "merge changed constant rows at n=" + std::to_string(n));
  }
  if (o.pass) o.detail = "n = 1..1000 with window 254 / overlap 20";
  return o;
}

Outcome mining_invariants() {
  Outcome o;
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 100 && o.pass; ++trial) {
    const std::size_t kb = trial % 2 ? 5600 : 10000 + 1 + rng() % 2000;
    const std::size_t rows = 1 + rng() % 8;
    const LogitMatrix scores(random_matrix(rows, kb, rng, 1.0));
    std::vector<std::size_t> gold(rows);
    for (auto& g : gold) g = rng() % kb;
    const std::set<std::size_t> gold_set(gold.begin(), gold.end());
    const std::uint64_t seed = rng();
    for (std::size_t quota : {kInDomainNegativeQuota, kGeneralNegativeQuota}) {
      const MiningConfig cfg{quota, 10, seed};
      if (quota > kb - gold_set.size()) {
        bool refused = false;
        try {
          mine_hard_negatives(scores, gold, cfg);
        } catch (const Error& e) {
          refused = e.kind() == ErrorKind::infeasible_quota;
        }
        o.require(refused, "quota " + std::to_string(quota) + " accepted for KB " + std::to_string(kb));
        continue;
      }
      const auto sel = mine_hard_negatives(scores, gold, cfg);
      o.require(sel.negatives.size() == quota, "wrong negative count for quota " + std::to_string(quota));
      o.require(std::none_of(sel.negatives.begin(), sel.negatives.end(),
                             [&](std::size_t c) { return gold_set.count(c) > 0; }),
                "gold column among negatives");
      o.require(std::set<std::size_t>(sel.negatives.begin(), sel.negatives.end()).size() == quota,
                "duplicate negatives");
      o.require(mine_hard_negatives(scores, gold, cfg).columns == sel.columns, "not reproducible under a seed");
      // The best-scoring incorrect column of every row is always kept.
      for (std::size_t r = 0; r < rows; ++r) {
        std::size_t best = kb;
        for (std::size_t c = 0; c < kb; ++c)
          if (!gold_set.count(c) && (best == kb || scores(r, c) > scores(r, best))) best = c;
        o.require(std::binary_search(sel.negatives.begin(), sel.negatives.end(), best), "hardest negative missing");
      }
    }
  }
  if (o.pass) o.detail = "100 batches, quotas 5000/10000 exact or refused when KB is too small";
  return o;
}

Outcome metric_fixtures() {
  Outcome o;
  const auto doc = [](std::string id, std::vector<SpanAnnotation> gold, std::vector<SpanAnnotation> pred) {
    return AnnotatedDocument{std::move(id), std::string(40, 'x'), {}, std::move(gold), std::move(pred)};
  };
  const std::vector<AnnotatedDocument> g1 = {doc("d1", {{0, 2, "A"}, {5, 8, "B"}}, {})};
  const std::vector<AnnotatedDocument> p1 = {doc("d1", {}, {{0, 2, "A"}, {5, 8, "C"}})};
  const auto half = score_el(g1, p1);
  o.require(std::abs(half.micro_p - 0.5) <= 1e-9 && std::abs(half.micro_r - 0.5) <= 1e-9 &&
                std::abs(half.micro_f1 - 0.5) <= 1e-9,
            "half-match fixture");
  const std::vector<AnnotatedDocument> g2 = {doc("d1", {{0, 2, "A"}, {5, 8, "B"}}, {}),
                                             doc("d2", {{0, 3, "C"}, {4, 6, "D"}, {8, 9, "E"}}, {})};
  const std::vector<AnnotatedDocument> p2 = {doc("d1", {}, {{0, 2, "A"}, {5, 8, "C"}}),
                                             doc("d2", {}, {{0, 3, "C"}, {4, 6, "D"}})};
  const auto pooled = score_el(g2, p2);
  o.require(std::abs(pooled.micro_p - 0.75) <= 1e-9 && std::abs(pooled.micro_r - 0.6) <= 1e-9 &&
                std::abs(pooled.micro_f1 - 2.0 / 3.0) <= 1e-9,
            "pooled fixture gave F1 " + fmt("%.12f", pooled.micro_f1));

  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<AnnotatedDocument> gold, pred;
    for (int d = 0; d < 3; ++d) {
      std::vector<SpanAnnotation> gs, ps;
      for (std::size_t s = 0; s < 6; ++s) {
        if (rng() % 2) gs.push_back({s * 5, s * 5 + 3, "E" + std::to_string(rng() % 3)});
        if (rng() % 2) ps.push_back({s * 5, s * 5 + 3 + rng() % 2, "E" + std::to_string(rng() % 3)});
      }
      gold.push_back(doc("d" + std::to_string(d), gs, {}));
      pred.push_back(doc("d" + std::to_string(d), {}, ps));
    }
    const double el = score_el(gold, pred).micro_f1;
    const double md = score_md(gold, pred).micro_f1;
    o.require(md >= el, "MD < EL on random set " + std::to_string(trial));
  }
  if (o.pass) o.detail = "0.5/0.5/0.5 and 0.75/0.6/0.667 exact; MD >= EL on 200 random sets";
  return o;
}

Outcome redirect_properties() {
  Outcome o;
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> ids;
    const std::size_t size = 2 + rng() % 10;
    for (std::size_t i = 0; i < size; ++i) ids.push_back("V" + std::to_string(i));
    ids.push_back("O");
    const EntityVocabulary vocab(ids);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < 10; ++i)
      if (rng() % 2) pairs.push_back({"U" + std::to_string(i), ids[rng() % size]});
    std::size_t dropped = 0;
    const auto table = RedirectTable::build(pairs, vocab, &dropped);
    o.require(dropped == 0 && table.size() == pairs.size(), "valid pairs were dropped");
    std::vector<SpanAnnotation> spans;
    for (std::size_t i = 0; i < 12; ++i)
      spans.push_back({i * 3, i * 3 + 2, rng() % 2 ? "U" + std::to_string(rng() % 12) : ids[rng() % ids.size()]});
    const auto once = normalize_redirects(spans, table);
    o.require(normalize_redirects(once, table) == once, "not idempotent");
    for (std::size_t i = 0; i < spans.size(); ++i) {
      o.require(once[i].start == spans[i].start && once[i].end == spans[i].end, "span moved");
      const auto hit = std::find_if(pairs.begin(), pairs.end(), [&](const auto& p) { return p.first == spans[i].entity; });
      o.require(once[i].entity == (hit == pairs.end() ? spans[i].entity : hit->second), "wrong substitution");
    }
  }
  if (o.pass) o.detail = "100 random valid tables";
  return o;
}

Outcome nif_service() {
  Outcome o;
  // Offsets through emit/parse, multi-byte text included.
  std::mt19937_64 rng(909);
  const std::u32string alphabet = U"ab Zü東😀ß,\"\\\n";
  for (int trial = 0; trial < 200; ++trial) {
    std::u32string text;
    const std::size_t len = 1 + rng() % 30;
    for (std::size_t i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    const nif::Document request{"http://example.org/doc" + std::to_string(trial), utf8::encode(text), {}};
    std::vector<SpanAnnotation> spans;
    for (std::size_t pos = 0;;) {
      const std::size_t b = pos + rng() % 4;
      const std::size_t e = b + 1 + rng() % 4;
      if (e > len) break;
      spans.push_back({b, e, "Entity_" + std::to_string(rng() % 9)});
      pos = e;
    }
    const auto back = nif::parse_nif(nif::emit_nif(request, spans));
    o.require(back.is_string == request.is_string, "text changed in round trip");
    o.require(back.phrases.size() == spans.size(), "phrase count changed");
    for (std::size_t i = 0; i < spans.size() && i < back.phrases.size(); ++i) {
      o.require(back.phrases[i].begin_index == spans[i].start && back.phrases[i].end_index == spans[i].end,
                "offsets changed in round trip");
      o.require(nif::entity_from_uri(nif::kDefaultKbPrefix, back.phrases[i].ta_ident_ref.value_or("")) ==
                    std::optional<std::string>(spans[i].entity),
                "entity changed in round trip");
    }
  }

  const auto corpus = testing_support::make_synthetic_corpus(4, 50, 6, 910);
  AnnotationService service(testing_support::mock_linker(corpus), {nif::kDefaultKbPrefix, 8});
  if (!service.bind("127.0.0.1", 0)) {
    o.require(false, "could not bind a local port");
    return o;
  }
  std::thread server([&] { service.serve_bound(); });
  for (int i = 0; i < 400 && !service.is_running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));

  httplib::Client client("127.0.0.1", service.port());
  for (const auto& doc : corpus.docs) {
    const auto r = client.Post("/annotate", testing_support::nif_request("http://example.org/" + doc.id, doc.text),
                               "application/x-turtle");
    o.require(r && r->status == 200, "annotate did not return 200");
    if (!r || r->status != 200) break;
    std::vector<SpanAnnotation> got;
    for (const auto& p : nif::parse_nif(r->body).phrases)
      got.push_back({p.begin_index, p.end_index,
                     nif::entity_from_uri(nif::kDefaultKbPrefix, p.ta_ident_ref.value_or("")).value_or("?")});
    o.require(got == doc.gold, "phrases differ from gold for " + doc.id);
  }
  const auto bad = client.Post("/annotate", "<unterminated", "application/x-turtle");
  o.require(bad && bad->status == 400, "malformed body did not give 400");

  const auto body = testing_support::nif_request("http://example.org/same", corpus.docs[1].text);
  std::vector<std::future<std::string>> replies;
  for (int i = 0; i < 32; ++i) {
    replies.push_back(std::async(std::launch::async, [&] {
      httplib::Client c("127.0.0.1", service.port());
      const auto r = c.Post("/annotate", body, "application/x-turtle");
      return r && r->status == 200 ? r->body : std::string("failed: ") + (r ? std::to_string(r->status) : "no reply");
    }));
  }
  std::vector<std::string> bodies;
  for (auto& f : replies) bodies.push_back(f.get());
  service.stop();
  server.join();
  o.require(std::all_of(bodies.begin(), bodies.end(), [&](const std::string& b) { return b == bodies[0]; }) &&
                bodies[0].rfind("failed", 0) != 0,
            "concurrent replies differ: " + bodies[0].substr(0, 40));
  if (o.pass) o.detail = "200 round trips, gold phrases over HTTP, 400 on bad body, 32 identical concurrent replies";
  return o;
}

Outcome throughput() {
  Outcome o;
  testing_support::TempDir dir("sublink-throughput");
  const auto corpus = testing_support::make_synthetic_corpus(120, 5599, 15, 1010);
  if (corpus.vocab.size() != 5600) {
    o.require(false, "vocabulary size " + std::to_string(corpus.vocab.size()));
    return o;
  }
  save_vocabulary(dir / "vocab.txt", corpus.vocab);
  std::filesystem::create_directories(dir / "logits");
  const MockScoreProvider mock(corpus.vocab, {0.9, 0.3, 7});
  const ReferenceTokenizer tokenizer;
  std::size_t tokens = 0;
  for (const auto& doc : corpus.docs) {
    AnnotatedDocument d = doc;
    d.tokens = tokenize(tokenizer, d.text, TokenizationMode::mention_agnostic);
    tokens += d.tokens.size();
    write_matrix(dir / "logits" / matrix_file_name(d.id), mock.score(d, chunk_ranges(d.tokens.size(), {1u << 30, 0})[0]));
  }
  write_corpus(dir / "corpus.jsonl", corpus.docs);

  cli::PipelineOptions options;
  options.vocab = (dir / "vocab.txt").string();
  options.provider = "file";
  options.logits_dir = (dir / "logits").string();
  options.workers = 1;
  const auto stats = cli::link_corpus(options, dir / "corpus.jsonl", dir / "out.jsonl");
  const double rate = stats.documents_per_second();
  o.require(stats.documents == 120, "linked " + std::to_string(stats.documents) + " documents");
  o.require(rate >= 100.0, fmt("%.1f documents/s", rate));
  if (o.pass)
    o.detail = fmt("%.1f documents/s", rate) + fmt(" (%.4f s/document", stats.seconds / 120.0) + ", " +
               std::to_string(tokens / 120) + " subwords/document, KB 5600, 1 worker)";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "loss equals the scalar oracle; tagged loss examples", 1.0, loss_oracle},
      {2, "analytic head gradient vs central differences", 5.0, gradient_check},
      {3, "aggregation equals the exhaustive reference", 10.0, aggregation_oracle},
      {4, "end-to-end synthetic F1 with the mock provider", 5.0, synthetic_end_to_end},
      {5, "chunking coverage, overlap, stride and merge", 0.0, chunking_invariants},
      {6, "hard-negative mining quotas, gold exclusion, seeding", 0.0, mining_invariants},
      {7, "metric fixtures and MD >= EL", 0.0, metric_fixtures},
      {8, "redirect normalization idempotence", 0.0, redirect_properties},
      {9, "NIF round trip and annotation service", 0.0, nif_service},
      {10, "link throughput with file-backed logits, KB 5600", 0.0, throughput},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0 && seconds >= c.time_limit) {
      outcome.pass = false;
      outcome.detail += fmt(" [over the %.0f s limit]", c.time_limit);
    }
    failures += !outcome.pass;
    std::printf("%s  %2d  %s: %s (%.2f s)\n", outcome.pass ? "PASS" : "FAIL", c.number, c.title.c_str(),
                outcome.detail.c_str(), seconds);
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
