#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "sublink/candidates.hpp"
#include "support/expect.hpp"
#include "support/synthetic.hpp"

using namespace sublink;
using testing_support::kind_of;

namespace {

std::vector<std::string> as_vector(const std::optional<std::span<const std::string>>& list) {
  REQUIRE(list.has_value());
  return {list->begin(), list->end()};
}

CandidateStore parse(const std::string& text, StoreKind kind, StoreOptions options = {}) {
  std::istringstream in(text);
  return parse_store(in, kind, options, "store.tsv");
}

}  // namespace

TEST_CASE("load a three-line agnostic store") {
  testing_support::TempDir dir;
  {
    std::ofstream f(dir / "store.tsv");
    f << "EU\tEuropean_Union\nGerman\tGermany,German_language\nJava\tJava_(island)\n";
  }
  const auto store = load_store(dir / "store.tsv", StoreKind::context_agnostic);
  CHECK(store.entry_count() == 3);
  CHECK(store.mean_list_length() == doctest::Approx(4.0 / 3.0));
  CHECK(as_vector(store.lookup("EU")) == std::vector<std::string>{"European_Union"});
  CHECK(as_vector(store.lookup("German")) == std::vector<std::string>{"Germany", "German_language"});
  CHECK_FALSE(store.lookup("Unknown").has_value());
  CHECK(kind_of([&] { load_store(dir / "missing.tsv", StoreKind::context_agnostic); }) == ErrorKind::io);
}

TEST_CASE("store parse errors name the line") {
  const auto line_of = [](const std::string& text, StoreKind kind) {
    try {
      parse(text, kind);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::parse);
      return std::string(e.what());
    }
    FAIL("expected parse error");
    return std::string();
  };
  CHECK(line_of("EU\tA\nEU\tB\n", StoreKind::context_agnostic).find("store.tsv:2") != std::string::npos);
  CHECK(line_of("EU\tA\nbroken line\n", StoreKind::context_agnostic).find("store.tsv:2") != std::string::npos);
  CHECK(line_of("EU\t\n", StoreKind::context_agnostic).find("store.tsv:1") != std::string::npos);
  CHECK(line_of("d\t0\t2\tEU\tA\nd\t0\t2\tEU\tB\n", StoreKind::context_aware).find("store.tsv:2") !=
        std::string::npos);
  CHECK(line_of("d\tx\t2\tEU\tA\n", StoreKind::context_aware).find("store.tsv:1") != std::string::npos);
  CHECK(line_of("d\t3\t2\tEU\tA\n", StoreKind::context_aware).find("store.tsv:1") != std::string::npos);
}

TEST_CASE("aware store: occurrence first, then surface fallback") {
  const auto store = parse("doc1\t0\t2\tEU\tEuropean_Union\ndoc3\t4\t6\tEU\tEuropean_Parliament\n",
                           StoreKind::context_aware);
  const OccurrenceKey doc1{"doc1", 0, 2};
  const OccurrenceKey doc2{"doc2", 0, 2};
  CHECK(as_vector(store.lookup("EU", &doc1)) == std::vector<std::string>{"European_Union"});
  CHECK(as_vector(store.lookup("EU", &doc2)) == std::vector<std::string>{"European_Union", "European_Parliament"});
  CHECK(as_vector(store.lookup("EU")) == std::vector<std::string>{"European_Union", "European_Parliament"});
  CHECK_FALSE(store.lookup("UN", &doc2).has_value());
  CHECK(store.entry_count() == 2);
}

TEST_CASE("case-insensitive stores and surface trimming") {
  const auto sensitive = parse("EU\tEuropean_Union\n", StoreKind::context_agnostic);
  CHECK(sensitive.lookup(" EU ").has_value());
  CHECK_FALSE(sensitive.lookup("eu").has_value());
  const auto insensitive = parse("EU\tEuropean_Union\n", StoreKind::context_agnostic, {false});
  CHECK(insensitive.lookup("eu").has_value());
  CHECK(insensitive.lookup("Eu").has_value());
}

TEST_CASE("entity lists escape commas and backslashes") {
  const std::vector<std::string> ids = {"Washington,_D.C.", "a\\b", "plain"};
  const auto joined = join_entity_list(ids);
  CHECK(joined == "Washington\\,_D.C.,a\\\\b,plain");
  CHECK(split_entity_list(joined) == ids);
}

TEST_CASE("write_store round trips both kinds") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::string, std::vector<std::string>>> agnostic;
    std::vector<CandidateStore::AwareEntry> aware;
    for (int i = 0; i < 10; ++i) {
      std::vector<std::string> list;
      for (int j = 0; j <= static_cast<int>(rng() % 3); ++j) list.push_back("E," + std::to_string(rng() % 20));
      agnostic.push_back({"surface " + std::to_string(i), list});
      aware.push_back({{"d" + std::to_string(rng() % 3), static_cast<std::size_t>(i * 3),
                        static_cast<std::size_t>(i * 3 + 2)},
                       "s" + std::to_string(rng() % 4), list});
    }
    for (const auto& store : {CandidateStore::agnostic(agnostic), CandidateStore::aware(aware)}) {
      std::ostringstream out;
      write_store(out, store);
      const auto back = parse(out.str(), store.kind());
      CHECK(back.surfaces() == store.surfaces());
      CHECK(back.entry_count() == store.entry_count());
      std::ostringstream again;
      write_store(again, back);
      CHECK(again.str() == out.str());
    }
  }
}

TEST_CASE("projection to a context-agnostic store") {
  const auto store = CandidateStore::aware({{{"d1", 0, 4}, "Java", {"Java_(island)"}},
                                            {{"d2", 3, 7}, "Java", {"Java_(programming_language)", "Java_(island)"}},
                                            {{"d2", 9, 11}, "EU", {"European_Union"}}});
  const auto projected = project_context_agnostic(store);
  CHECK(projected.kind() == StoreKind::context_agnostic);
  CHECK(as_vector(projected.lookup("Java")) ==
        std::vector<std::string>{"Java_(island)", "Java_(programming_language)"});
  CHECK(as_vector(projected.lookup("EU")) == std::vector<std::string>{"European_Union"});
}

TEST_CASE("projected lookups contain every occurrence list") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<CandidateStore::AwareEntry> entries;
    const int n = 1 + static_cast<int>(rng() % 15);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> list;
      const int len = 1 + static_cast<int>(rng() % 4);
      for (int j = 0; j < len; ++j) {
        std::string e = "E" + std::to_string(rng() % 8);
        if (std::find(list.begin(), list.end(), e) == list.end()) list.push_back(e);
      }
      entries.push_back({{"d", static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1)},
                         "s" + std::to_string(rng() % 3), list});
    }
    const auto store = CandidateStore::aware(entries);
    const auto projected = project_context_agnostic(store);
    for (const auto& entry : entries) {
      const auto merged = as_vector(projected.lookup(entry.surface));
      for (const auto& e : entry.entities) CHECK(std::find(merged.begin(), merged.end(), e) != merged.end());
      CHECK(as_vector(store.lookup(entry.surface, &entry.key)) == entry.entities);
    }
    for (const auto& [surface, list] : projected.surfaces()) {
      CHECK(std::set<std::string>(list.begin(), list.end()).size() == list.size());
    }
  }
}

TEST_CASE("redirect normalization") {
  const EntityVocabulary vocab(std::vector<std::string>{"Leicestershire_County_Cricket_Club", "Paris", "O"});
  std::size_t dropped = 0;
  const auto table = RedirectTable::build({{"Leicestershire_CCC_old_title", "Leicestershire_County_Cricket_Club"},
                                           {"Paris", "Paris_(mythology)"},
                                           {"Lutetia", "Not_in_vocab"}},
                                          vocab, &dropped);
  CHECK(dropped == 2);
  CHECK(table.size() == 1);
  const std::vector<SpanAnnotation> in = {{0, 5, "Leicestershire_CCC_old_title"}, {7, 12, "Paris"}};
  const auto out = normalize_redirects(in, table);
  CHECK(out[0] == SpanAnnotation{0, 5, "Leicestershire_County_Cricket_Club"});
  CHECK(out[1] == in[1]);
  CHECK(kind_of([&] {
          RedirectTable::build({{"u", "Paris"}, {"u", "Leicestershire_County_Cricket_Club"}}, vocab);
        }) == ErrorKind::parse);
}

TEST_CASE("redirect normalization is idempotent and span-preserving") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> ids;
    for (int i = 0; i < 6; ++i) ids.push_back("V" + std::to_string(i));
    ids.push_back("O");
    const EntityVocabulary vocab(ids);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < 6; ++i)
      if (rng() % 2) pairs.push_back({"U" + std::to_string(i), ids[rng() % 6]});
    const auto table = RedirectTable::build(pairs, vocab);
    std::vector<SpanAnnotation> spans;
    for (std::size_t i = 0; i < 8; ++i) {
      const std::string e = rng() % 2 ? "U" + std::to_string(rng() % 8) : ids[rng() % ids.size()];
      spans.push_back({i * 4, i * 4 + 3, e});
    }
    const auto once = normalize_redirects(spans, table);
    CHECK(normalize_redirects(once, table) == once);
    for (std::size_t i = 0; i < spans.size(); ++i) {
      CHECK(once[i].start == spans[i].start);
      CHECK(once[i].end == spans[i].end);
      if (vocab.contains(spans[i].entity)) CHECK(once[i].entity == spans[i].entity);
    }
  }
}

TEST_CASE("redirect files") {
  testing_support::TempDir dir;
  {
    std::ofstream f(dir / "r.tsv");
    f << "Old\tNew\nbad line\n";
  }
  const EntityVocabulary vocab(std::vector<std::string>{"New", "O"});
  CHECK(kind_of([&] { load_redirects(dir / "r.tsv", vocab); }) == ErrorKind::parse);
  {
    std::ofstream f(dir / "r.tsv");
    f << "Old\tNew\n";
  }
  CHECK(load_redirects(dir / "r.tsv", vocab).resolve("Old") == "New");
}
