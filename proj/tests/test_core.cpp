#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "sublink/corpus.hpp"
#include "sublink/error.hpp"
#include "sublink/matrix.hpp"
#include "sublink/types.hpp"
#include "sublink/utf8.hpp"
#include "sublink/vocabulary.hpp"
#include "support/expect.hpp"
#include "support/synthetic.hpp"

using namespace sublink;

using testing_support::kind_of;

TEST_CASE("utf8 decode/encode counts scalar values") {
  const std::string s = "Zürich – 東京 😀";
  CHECK(utf8::length(s) == 13);
  CHECK(utf8::encode(utf8::decode(s)) == s);
  CHECK(utf8::slice(s, 9, 11) == "東京");
  CHECK(utf8::slice(s, 11, 12) == " ");
  CHECK(utf8::slice(s, 12, 13) == "😀");
  CHECK(kind_of([] { utf8::decode(std::string("\xC3", 1)); }) == ErrorKind::parse);
  CHECK(kind_of([] { utf8::decode(std::string("\xFF\x41")); }) == ErrorKind::parse);
}

TEST_CASE("utf8 helpers") {
  CHECK(utf8::trim("  a b \t") == "a b");
  CHECK(utf8::trim("   ").empty());
  CHECK(utf8::ascii_lower("ÉtÉ ABC") == "ÉtÉ abc");
  CHECK(utf8::is_space(U' '));
  CHECK(utf8::is_default_punctuation(U','));
  CHECK_FALSE(utf8::is_default_punctuation(U'a'));
}

TEST_CASE("validate accepts consistent documents") {
  AnnotatedDocument doc{"d", "EU rejects", {}, {{0, 2, "European_Union"}}, {}};
  doc.tokens = {{"EU", 0, 2, 0}, {"reje", 3, 7, 1}, {"cts", 7, 10, 1}};
  CHECK_NOTHROW(validate(doc));
}

TEST_CASE("validate rejects offset violations") {
  AnnotatedDocument base{"d", "EU rejects", {}, {}, {}};
  SUBCASE("span past the end") {
    base.gold = {{5, 11, "X"}};
    CHECK(kind_of([&] { validate(base); }) == ErrorKind::offset);
  }
  SUBCASE("inverted span") {
    base.gold = {{4, 3, "X"}};
    CHECK(kind_of([&] { validate(base); }) == ErrorKind::offset);
  }
  SUBCASE("overlapping spans") {
    base.gold = {{0, 5, "X"}, {3, 7, "Y"}};
    CHECK(kind_of([&] { validate(base); }) == ErrorKind::offset);
  }
  SUBCASE("token surface mismatch") {
    base.tokens = {{"EX", 0, 2, 0}};
    CHECK(kind_of([&] { validate(base); }) == ErrorKind::offset);
  }
  SUBCASE("tokens out of order") {
    base.tokens = {{"reje", 3, 7, 1}, {"EU", 0, 2, 0}};
    CHECK(kind_of([&] { validate(base); }) == ErrorKind::offset);
  }
}

TEST_CASE("build_vocabulary keeps order, drops duplicates and appends O") {
  const std::vector<std::string> ids = {"A", "B", "A"};
  const auto v = build_vocabulary(ids, true);
  CHECK(v.size() == 3);
  CHECK(v.id_of(0) == "A");
  CHECK(v.id_of(1) == "B");
  CHECK(v.id_of(2) == "O");
  CHECK(v.o_index() == 2u);
  CHECK(v.index_of("B") == 1u);
  CHECK_FALSE(v.index_of("C").has_value());

  const auto without = build_vocabulary(ids, false);
  CHECK(without.size() == 2);
  CHECK_FALSE(without.o_index().has_value());
  CHECK(kind_of([&] { without.require_o_index(); }) == ErrorKind::configuration);
}

TEST_CASE("build_vocabulary on empty input fails") {
  const std::vector<std::string> none;
  CHECK(kind_of([&] { build_vocabulary(none, true); }) == ErrorKind::empty_vocabulary);
  CHECK(kind_of([&] { build_vocabulary(none, false); }) == ErrorKind::empty_vocabulary);
}

TEST_CASE("vocabulary file round trip with 5600 entries") {
  testing_support::TempDir dir;
  std::vector<std::string> ids;
  for (int i = 0; i < 5599; ++i) ids.push_back("Entity_" + std::to_string(i));
  const auto v = build_vocabulary(ids, true);
  REQUIRE(v.size() == 5600);
  save_vocabulary(dir / "vocab.txt", v);
  const auto back = load_vocabulary(dir / "vocab.txt");
  CHECK(back == v);
  CHECK(back.o_index() == 5599u);
}

TEST_CASE("vocabulary file with an O header") {
  const auto v = parse_vocabulary("#O=1\nA\nB\n");
  REQUIRE(v.size() == 3);
  CHECK(v.id_of(0) == "A");
  CHECK(v.id_of(1) == "O");
  CHECK(v.id_of(2) == "B");
  CHECK(parse_vocabulary(format_vocabulary(v)) == v);
  CHECK(kind_of([] { parse_vocabulary("#O=9\nA\n"); }) == ErrorKind::parse);
  CHECK(kind_of([] { parse_vocabulary("A\nA\n"); }) == ErrorKind::parse);
  CHECK(kind_of([] { parse_vocabulary(""); }) == ErrorKind::empty_vocabulary);
}

TEST_CASE("matrix files round trip float-representable values") {
  testing_support::TempDir dir;
  Matrix m(3, 4);
  for (std::size_t i = 0; i < 12; ++i) m.values()[i] = static_cast<double>(static_cast<float>(i * 0.37 - 2));
  write_matrix(dir / "m.splm", m);
  CHECK(read_matrix(dir / "m.splm") == m);
  const auto shape = read_matrix_shape(dir / "m.splm");
  CHECK(shape.rows == 3);
  CHECK(shape.cols == 4);
  const auto rows = read_matrix_rows(dir / "m.splm", 1, 3);
  REQUIRE(rows.rows() == 2);
  CHECK(rows(0, 0) == m(1, 0));
  CHECK(rows(1, 3) == m(2, 3));
  CHECK(kind_of([&] { read_matrix_rows(dir / "m.splm", 2, 5); }) == ErrorKind::shape);
  CHECK(kind_of([&] { read_matrix(dir / "missing.splm"); }) == ErrorKind::io);
  {
    std::ofstream bad(dir / "bad.splm", std::ios::binary);
    bad << "NOPE";
  }
  CHECK(kind_of([&] { read_matrix(dir / "bad.splm"); }) == ErrorKind::parse);
}

TEST_CASE("corpus documents round trip through JSON lines") {
  auto corpus = testing_support::make_synthetic_corpus(5, 20, 4, 11).docs;
  const std::string first = corpus[0].text.substr(0, corpus[0].text.find(' '));
  corpus[0].tokens = {{first, 0, first.size(), 0}};
  testing_support::TempDir dir;
  write_corpus(dir / "c.jsonl", corpus);
  CHECK(read_corpus(dir / "c.jsonl") == corpus);
}

TEST_CASE("corpus parse errors name the line") {
  std::istringstream in("{\"id\":\"a\",\"text\":\"x\"}\n{not json}\n");
  try {
    parse_corpus(in, "c.jsonl");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("c.jsonl:2") != std::string::npos);
  }
  std::istringstream offsets("{\"id\":\"a\",\"text\":\"x\",\"gold\":[{\"start\":0,\"end\":4,\"entity\":\"E\"}]}\n");
  CHECK(kind_of([&] { parse_corpus(offsets, "c"); }) == ErrorKind::offset);
}

TEST_CASE("annotation records round trip") {
  std::vector<AnnotationRecord> records = {{"d1", 0, 2, "European_Union", 0.9}, {"d1", 5, 9, "O\"dd", 0.5},
                                           {"d2", 1, 3, "Zürich", 0.25}};
  std::ostringstream out;
  write_records(out, records);
  std::istringstream lines(out.str());
  std::string line;
  std::vector<AnnotationRecord> back;
  while (std::getline(lines, line)) back.push_back(parse_record(line, "x"));
  CHECK(back == records);
  CHECK(format_record(records[0]).find("{\"doc_id\":\"d1\",\"start\":0,\"end\":2,") == 0);
}

TEST_CASE("error kinds classify input and runtime failures") {
  CHECK(Error(ErrorKind::parse, "x").is_input_error());
  CHECK(Error(ErrorKind::offset, "x").is_input_error());
  CHECK_FALSE(Error(ErrorKind::shape, "x").is_input_error());
  CHECK_FALSE(Error(ErrorKind::divergence, "x").is_input_error());
  CHECK_FALSE(Error(ErrorKind::degenerate_batch, "x").is_input_error());
}
