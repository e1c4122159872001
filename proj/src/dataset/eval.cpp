#include "pagesift/eval.hpp"

#include <string>

#include "pagesift/error.hpp"

namespace pagesift::eval {

std::string_view to_string(Target target) {
  switch (target) {
    case Target::Text: return "text";
    case Target::Images: return "images";
    case Target::All: return "all";
  }
  return "all";
}

std::optional<Target> parse_target(std::string_view text) {
  if (text == "text") return Target::Text;
  if (text == "images") return Target::Images;
  if (text == "all") return Target::All;
  return std::nullopt;
}

double f1_score(double precision, double recall) {
  double sum = precision + recall;
  return sum > 0 ? 2 * precision * recall / sum : 0.0;
}

Metrics metrics_from(const Confusion& c) {
  Metrics m;
  m.precision = c.tp + c.fp ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  m.recall = c.tp + c.fn ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

namespace {

bool in_target(const dataset::LabelRecord& r, Target target) {
  switch (target) {
    case Target::Text: return r.tag != "IMG";
    case Target::Images: return r.tag == "IMG";
    case Target::All: return true;
  }
  return true;
}

}  // namespace

EvalReport evaluate(const Predictions& predictions, std::span<const dataset::LabeledPage> truth, Target target) {
  if (truth.empty()) throw Error(ErrorKind::EmptyTruth, "no ground-truth pages");
  EvalReport report;
  report.target = target;
  double sum_p = 0, sum_r = 0, sum_f1 = 0;
  std::size_t macro_pages = 0;

  for (const auto& page : truth) {
    auto page_predictions = predictions.find(page.page_id);
    Confusion c;
    for (const auto& record : page.labels) {
      if (!in_target(record, target)) continue;
      Label predicted = Label::NR;
      bool found = false;
      if (page_predictions != predictions.end()) {
        auto it = page_predictions->second.find(static_cast<NodeId>(std::stoul(record.id)));
        if (it != page_predictions->second.end()) {
          predicted = it->second;
          found = true;
        }
      }
      if (!found) report.warnings.push_back(page.page_id + ": no prediction for id " + record.id + ", counted as NR");
      bool actual_r = record.label == Label::R;
      bool predicted_r = predicted == Label::R;
      if (actual_r && predicted_r) ++c.tp;
      else if (!actual_r && predicted_r) ++c.fp;
      else if (actual_r) ++c.fn;
      else ++c.tn;
    }
    if (c.total() == 0) continue;
    ++report.pages_evaluated;
    report.counts += c;
    if (c.tp + c.fn == 0) {
      ++report.pages_skipped_macro;
      continue;
    }
    Metrics m = metrics_from(c);
    sum_p += m.precision;
    sum_r += m.recall;
    sum_f1 += m.f1;
    ++macro_pages;
  }

  if (report.counts.total() > 0) {
    Metrics micro = metrics_from(report.counts);
    report.precision = micro.precision;
    report.recall = micro.recall;
    report.f1 = micro.f1;
  }
  if (macro_pages > 0) {
    auto n = static_cast<double>(macro_pages);
    report.macro_precision = sum_p / n;
    report.macro_recall = sum_r / n;
    report.macro_f1 = sum_f1 / n;
  }
  return report;
}

Predictions truth_as_predictions(std::span<const dataset::LabeledPage> pages) {
  Predictions out;
  for (const auto& page : pages) {
    auto& map = out[page.page_id];
    for (const auto& r : page.labels) map[static_cast<NodeId>(std::stoul(r.id))] = r.label;
  }
  return out;
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["target"] = to_string(report.target);
  j["tp"] = report.counts.tp;
  j["fp"] = report.counts.fp;
  j["fn"] = report.counts.fn;
  j["tn"] = report.counts.tn;
  j["precision"] = opt(report.precision);
  j["recall"] = opt(report.recall);
  j["f1"] = opt(report.f1);
  j["macro_precision"] = opt(report.macro_precision);
  j["macro_recall"] = opt(report.macro_recall);
  j["macro_f1"] = opt(report.macro_f1);
  j["pages_evaluated"] = report.pages_evaluated;
  j["pages_skipped_macro"] = report.pages_skipped_macro;
  j["warnings"] = report.warnings;
  return j;
}

}  // namespace pagesift::eval
