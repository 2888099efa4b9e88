#include "sublink/corpus.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sublink/error.hpp"

namespace sublink {

using ordered_json = nlohmann::ordered_json;

namespace {

std::size_t get_offset(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
    throw Error(ErrorKind::parse, where + ": field '" + key + "' must be a non-negative integer");
  }
  return j.at(key).get<std::size_t>();
}

std::string get_string(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error(ErrorKind::parse, where + ": field '" + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

ordered_json parse_json_line(const std::string& line, const std::string& where) {
  try {
    auto j = ordered_json::parse(line);
    if (!j.is_object()) throw Error(ErrorKind::parse, where + ": record is not an object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, where + ": " + e.what());
  }
}

std::ifstream open_input(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, std::string("cannot open ") + what + " " + path.string());
  return in;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

AnnotatedDocument parse_document(const std::string& line, const std::string& where) {
  const auto j = parse_json_line(line, where);
  AnnotatedDocument doc;
  doc.id = get_string(j, "id", where);
  doc.text = get_string(j, "text", where);
  if (j.contains("tokens")) {
    for (const auto& t : j.at("tokens")) {
      SubwordToken token;
      token.surface = get_string(t, "surface", where);
      token.start = get_offset(t, "start", where);
      token.end = get_offset(t, "end", where);
      token.word_index = get_offset(t, "word_index", where);
      doc.tokens.push_back(std::move(token));
    }
  }
  if (j.contains("gold")) {
    for (const auto& s : j.at("gold")) {
      doc.gold.push_back({get_offset(s, "start", where), get_offset(s, "end", where),
                          get_string(s, "entity", where)});
    }
  }
  try {
    validate(doc);
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + e.what());
  }
  return doc;
}

std::string format_document(const AnnotatedDocument& doc) {
  ordered_json j;
  j["id"] = doc.id;
  j["text"] = doc.text;
  j["tokens"] = ordered_json::array();
  for (const auto& t : doc.tokens) {
    j["tokens"].push_back({{"surface", t.surface}, {"start", t.start}, {"end", t.end}, {"word_index", t.word_index}});
  }
  j["gold"] = ordered_json::array();
  for (const auto& s : doc.gold) {
    j["gold"].push_back({{"start", s.start}, {"end", s.end}, {"entity", s.entity}});
  }
  return j.dump();
}

std::vector<AnnotatedDocument> parse_corpus(std::istream& in, const std::string& source) {
  std::vector<AnnotatedDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    docs.push_back(parse_document(line, source + ":" + std::to_string(line_no)));
  }
  return docs;
}

std::vector<AnnotatedDocument> read_corpus(const std::filesystem::path& path) {
  auto in = open_input(path, "corpus");
  return parse_corpus(in, path.string());
}

void write_corpus(const std::filesystem::path& path, const std::vector<AnnotatedDocument>& docs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write corpus " + path.string());
  for (const auto& doc : docs) out << format_document(doc) << '\n';
}

std::string format_record(const AnnotationRecord& record) {
  ordered_json j;
  j["doc_id"] = record.doc_id;
  j["start"] = record.start;
  j["end"] = record.end;
  j["entity"] = record.entity;
  j["score"] = record.score;
  return j.dump();
}

AnnotationRecord parse_record(const std::string& line, const std::string& where) {
  const auto j = parse_json_line(line, where);
  AnnotationRecord r;
  r.doc_id = get_string(j, "doc_id", where);
  r.start = get_offset(j, "start", where);
  r.end = get_offset(j, "end", where);
  r.entity = get_string(j, "entity", where);
  if (j.contains("score")) {
    if (!j.at("score").is_number()) throw Error(ErrorKind::parse, where + ": field 'score' must be a number");
    r.score = j.at("score").get<double>();
  }
  if (r.start >= r.end) throw Error(ErrorKind::parse, where + ": empty span");
  return r;
}

std::vector<AnnotationRecord> read_records(const std::filesystem::path& path) {
  auto in = open_input(path, "annotation file");
  std::vector<AnnotationRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    records.push_back(parse_record(line, path.string() + ":" + std::to_string(line_no)));
  }
  return records;
}

void write_records(std::ostream& out, const std::vector<AnnotationRecord>& records) {
  for (const auto& r : records) out << format_record(r) << '\n';
}

std::vector<AnnotatedDocument> read_annotations(const std::filesystem::path& path, bool* is_corpus) {
  auto in = open_input(path, "annotation file");
  std::string line;
  std::size_t line_no = 0;
  std::vector<AnnotatedDocument> corpus;
  std::map<std::string, AnnotatedDocument> by_id;
  std::vector<std::string> order;
  std::optional<bool> corpus_format;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (!corpus_format) corpus_format = parse_json_line(line, where).contains("text");
    if (*corpus_format) {
      corpus.push_back(parse_document(line, where));
    } else {
      auto r = parse_record(line, where);
      auto [it, inserted] = by_id.try_emplace(r.doc_id);
      if (inserted) {
        it->second.id = r.doc_id;
        order.push_back(r.doc_id);
      }
      it->second.predicted.push_back({r.start, r.end, r.entity});
    }
  }
  if (is_corpus != nullptr) *is_corpus = corpus_format.value_or(false);
  if (corpus_format.value_or(false)) return corpus;
  std::vector<AnnotatedDocument> docs;
  for (const auto& id : order) docs.push_back(std::move(by_id.at(id)));
  return docs;
}

}  // namespace sublink
