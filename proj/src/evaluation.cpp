#include "sublink/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "sublink/error.hpp"

namespace sublink {

void fill_micro_scores(MatchReport& report) {
  const auto& c = report.counts;
  const double tp = static_cast<double>(c.tp);
  report.micro_p = c.tp + c.fp == 0 ? 0.0 : tp / static_cast<double>(c.tp + c.fp);
  report.micro_r = c.tp + c.fn == 0 ? 0.0 : tp / static_cast<double>(c.tp + c.fn);
  const double sum = report.micro_p + report.micro_r;
  report.micro_f1 = sum == 0.0 ? 0.0 : 2.0 * report.micro_p * report.micro_r / sum;
}

namespace {

using Key = std::tuple<std::size_t, std::size_t, std::string>;

Key key_of(const SpanAnnotation& s, MatchMode mode) {
  return {s.start, s.end, mode == MatchMode::entity_linking ? s.entity : std::string()};
}

bool in_kb(const std::string& entity, const EvaluationOptions& options) {
  if (entity == kNonEntity) return false;
  return options.vocabulary == nullptr || options.vocabulary->contains(entity);
}

MatchCounts count_document(const AnnotatedDocument& gold, const AnnotatedDocument* predicted, MatchMode mode,
                           const EvaluationOptions& options) {
  std::set<Key> gold_keys;
  for (const auto& s : gold.gold) {
    std::string entity = options.redirects ? std::string(options.redirects->resolve(s.entity)) : s.entity;
    if (!in_kb(entity, options)) continue;
    gold_keys.insert(key_of({s.start, s.end, std::move(entity)}, mode));
  }
  std::set<Key> predicted_keys;
  if (predicted != nullptr) {
    for (const auto& s : predicted->predicted) {
      if (s.entity == kNonEntity) continue;
      predicted_keys.insert(key_of(s, mode));
    }
  }
  MatchCounts counts;
  for (const auto& k : predicted_keys) {
    if (gold_keys.contains(k)) ++counts.tp;
    else ++counts.fp;
  }
  counts.fn = gold_keys.size() - counts.tp;
  return counts;
}

}  // namespace

MatchReport score(const std::vector<AnnotatedDocument>& gold, const std::vector<AnnotatedDocument>& predicted,
                  MatchMode mode, const EvaluationOptions& options) {
  std::unordered_map<std::string, const AnnotatedDocument*> gold_by_id;
  for (const auto& doc : gold) {
    if (!gold_by_id.emplace(doc.id, &doc).second) {
      throw Error(ErrorKind::alignment, "duplicate gold document id " + doc.id);
    }
  }
  std::unordered_map<std::string, const AnnotatedDocument*> predicted_by_id;
  for (const auto& doc : predicted) {
    if (!gold_by_id.contains(doc.id)) {
      throw Error(ErrorKind::alignment, "predicted document " + doc.id + " has no gold counterpart");
    }
    if (!predicted_by_id.emplace(doc.id, &doc).second) {
      throw Error(ErrorKind::alignment, "duplicate predicted document id " + doc.id);
    }
  }
  MatchReport report;
  for (const auto& doc : gold) {
    const auto it = predicted_by_id.find(doc.id);
    const auto counts = count_document(doc, it == predicted_by_id.end() ? nullptr : it->second, mode, options);
    report.counts += counts;
    report.per_document.push_back({doc.id, counts});
  }
  fill_micro_scores(report);
  return report;
}

double subword_f1(std::span<const std::size_t> gold, std::span<const std::size_t> predicted, std::size_t o_index) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorKind::shape, "subword F1 over " + std::to_string(gold.size()) + " gold and " +
                                      std::to_string(predicted.size()) + " predicted labels");
  }
  MatchReport report;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool gold_entity = gold[i] != o_index;
    const bool predicted_entity = predicted[i] != o_index;
    if (gold_entity && predicted[i] == gold[i]) {
      ++report.counts.tp;
      continue;
    }
    if (predicted_entity) ++report.counts.fp;
    if (gold_entity) ++report.counts.fn;
  }
  fill_micro_scores(report);
  return report.micro_f1;
}

namespace {

const char* mode_name(MatchMode mode) { return mode == MatchMode::entity_linking ? "el" : "md"; }

}  // namespace

std::string format_report_record(const MatchReport& report, MatchMode mode) {
  nlohmann::ordered_json j;
  j["mode"] = mode_name(mode);
  j["tp"] = report.counts.tp;
  j["fp"] = report.counts.fp;
  j["fn"] = report.counts.fn;
  j["precision"] = report.micro_p;
  j["recall"] = report.micro_r;
  j["f1"] = report.micro_f1;
  j["documents"] = report.per_document.size();
  return j.dump();
}

std::string format_report_table(const MatchReport& report, MatchMode mode) {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof line, "%-4s %8s %8s %8s %10s %10s %10s\n", mode_name(mode), "tp", "fp", "fn",
                "micro-P", "micro-R", "micro-F1");
  out += line;
  std::snprintf(line, sizeof line, "%-4s %8zu %8zu %8zu %10.4f %10.4f %10.4f\n", "all", report.counts.tp,
                report.counts.fp, report.counts.fn, report.micro_p, report.micro_r, report.micro_f1);
  out += line;
  return out;
}

}  // namespace sublink
