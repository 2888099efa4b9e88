#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sublink/types.hpp"

namespace sublink {

// Tokenized corpus: one JSON object per line with fields
// {id, text, tokens:[{surface,start,end,word_index}], gold:[{start,end,entity}]}.
// `tokens` and `gold` may be absent. Token flags are not stored.
std::vector<AnnotatedDocument> read_corpus(const std::filesystem::path& path);
std::vector<AnnotatedDocument> parse_corpus(std::istream& in, const std::string& source);
void write_corpus(const std::filesystem::path& path, const std::vector<AnnotatedDocument>& docs);
std::string format_document(const AnnotatedDocument& doc);
AnnotatedDocument parse_document(const std::string& line, const std::string& where);

// One predicted span, as written to annotation output files.
struct AnnotationRecord {
  std::string doc_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string entity;
  double score = 0.0;

  bool operator==(const AnnotationRecord&) const = default;
};

// Fields are written in the fixed order doc_id, start, end, entity, score.
std::string format_record(const AnnotationRecord& record);
AnnotationRecord parse_record(const std::string& line, const std::string& where);
std::vector<AnnotationRecord> read_records(const std::filesystem::path& path);
void write_records(std::ostream& out, const std::vector<AnnotationRecord>& records);

// Reads either a corpus file or an annotation-record file into documents.
// Record files yield one document per distinct doc_id with `predicted` set;
// corpus files are returned as is. `is_corpus` reports which was found.
std::vector<AnnotatedDocument> read_annotations(const std::filesystem::path& path, bool* is_corpus = nullptr);

}  // namespace sublink
