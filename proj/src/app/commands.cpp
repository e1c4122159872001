#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pagesift/app.hpp"
#include "pagesift/dataset.hpp"
#include "pagesift/eval.hpp"
#include "pagesift/extractors.hpp"
#include "pagesift/features.hpp"
#include "pagesift/fetch.hpp"
#include "pagesift/gbm.hpp"
#include "pagesift/layout.hpp"
#include "pagesift/pipeline.hpp"
#include "pagesift/service.hpp"

namespace pagesift::app {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidViewport:
    case ErrorKind::UnknownExtractor:
      return kExitUsage;
    case ErrorKind::DegenerateLabels:
      return kExitDegenerateLabels;
    default:
      return kExitFailure;
  }
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ordered_json header(std::string_view command) {
  return {{"tool", kToolName}, {"version", kVersion}, {"command", command}};
}

void emit(const ordered_json& doc, const std::string& path, std::ostream& out) {
  std::string text = doc.dump(2) + "\n";
  if (!path.empty()) dataset::write_file_atomic(path, text);
  out << text;
}

std::shared_ptr<const gbm::GbmModel> load_model_file(const std::string& path) {
  return std::make_shared<const gbm::GbmModel>(gbm::load_model(dataset::read_file(path)));
}

void check_extractor_name(const std::string& name, bool allow_oracle) {
  if (allow_oracle && name == "oracle") return;
  const auto& names = extract::extractor_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string known;
    for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
    if (allow_oracle) known += ", oracle";
    throw UsageError("unknown extractor '" + name + "' (known: " + known + ")");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ExtractOptions {
  std::string input;
  std::string model;
  std::string extractor;
  std::string viewport = "1280x800";
  std::string format = "json";
  std::string out;
};

int cmd_extract(const ExtractOptions& o, std::ostream& out) {
  std::string name = o.extractor.empty() ? (o.model.empty() ? "" : "gbm") : o.extractor;
  if (name.empty()) throw UsageError("extract needs --model or --extractor");
  check_extractor_name(name, false);
  if (name == "gbm" && o.model.empty()) throw UsageError("extractor 'gbm' needs --model");
  layout::Viewport viewport = layout::parse_viewport(o.viewport);
  auto extractor = extract::make_extractor(name, o.model.empty() ? nullptr : load_model_file(o.model));

  dom::Document doc = dom::parse_document(dataset::read_file(o.input));
  layout::LayoutTree tree = layout::compute_layout(doc, viewport);
  auto predictions = extractor(doc, tree);
  std::string text;
  if (o.format == "json") {
    text = pipeline::to_json(predictions).dump(2) + "\n";
  } else {
    text = dom::serialize_annotated(doc, extract::to_label_map(predictions), {.outline = true}) + "\n";
  }
  if (!o.out.empty()) dataset::write_file_atomic(o.out, text);
  out << text;
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TrainOptions {
  std::string dataset;
  std::string out;
  std::string report;
  gbm::TrainingConfig config;
  double split = 0.7;
  std::string viewport = "1280x800";
};

int cmd_train(TrainOptions o, std::ostream& out, std::ostream& err) {
  if (!(o.split > 0 && o.split < 1)) throw UsageError("--split must be in (0, 1) so the test split is non-empty");
  o.config.validate();
  layout::Viewport viewport = layout::parse_viewport(o.viewport);

  auto pages = dataset::load_dataset(o.dataset);
  auto [train_pages, test_pages] = dataset::split_dataset(pages, o.split, o.config.seed);
  pipeline::TrainingSet set = pipeline::build_training_set(train_pages, viewport);
  if (set.x.rows() == 0) throw Error(ErrorKind::EmptyTraining, "training split has no labeled candidates");

  gbm::TrainingLog log;
  auto model = std::make_shared<const gbm::GbmModel>(gbm::train(set.x, set.y, o.config, features::schema(), &log));
  dataset::write_file_atomic(o.out, gbm::save_model(*model));

  auto predictions = pipeline::predict_pages(extract::make_extractor("gbm", model), test_pages, viewport);
  std::size_t positives = std::count(set.y.begin(), set.y.end(), 1);

  ordered_json report = header("train");
  ordered_json split = {{"ratio", o.split}, {"seed", o.config.seed}};
  split["train_pages"] = ordered_json::array();
  split["test_pages"] = ordered_json::array();
  for (const auto& p : train_pages) split["train_pages"].push_back(p.page_id);
  for (const auto& p : test_pages) split["test_pages"].push_back(p.page_id);
  report["split"] = split;
  report["training_rows"] = set.x.rows();
  report["training_positives"] = positives;
  report["unlabeled_candidates"] = set.unlabeled_candidates;
  report["trees"] = model->trees.size();
  report["training_loss"] = {{"initial", log.loss.front()}, {"final", log.loss.back()}};
  report["test"] = pipeline::report_json(predictions, test_pages, eval::Target::All);
  emit(report, o.report, out);
  err << "model written to " << o.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string dataset;
  std::string extractor;
  std::string model;
  std::string target = "all";
  std::string compare;
  std::optional<double> split;
  std::uint64_t seed = 0;
  std::string viewport = "1280x800";
  std::string report;
};

eval::Predictions predictions_for(const std::string& name, const std::shared_ptr<const gbm::GbmModel>& model,
                                  std::span<const dataset::LabeledPage> pages, const layout::Viewport& viewport) {
  if (name == "oracle") return eval::truth_as_predictions(pages);
  return pipeline::predict_pages(extract::make_extractor(name, model), pages, viewport);
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  auto target = eval::parse_target(o.target);
  if (!target) throw UsageError("--target must be text, images or all");
  std::vector<std::string> names;
  if (!o.compare.empty()) {
    names = split_list(o.compare);
    if (names.empty()) throw UsageError("--compare needs at least one extractor");
  } else if (!o.extractor.empty()) {
    names = {o.extractor};
  } else if (!o.model.empty()) {
    names = {"gbm"};
  } else {
    throw UsageError("eval needs --extractor, --model or --compare");
  }
  for (const auto& name : names) {
    check_extractor_name(name, true);
    if (name == "gbm" && o.model.empty()) throw UsageError("extractor 'gbm' needs --model");
  }
  layout::Viewport viewport = layout::parse_viewport(o.viewport);
  std::shared_ptr<const gbm::GbmModel> model = o.model.empty() ? nullptr : load_model_file(o.model);

  std::vector<dataset::LabeledPage> pages = dataset::load_dataset(o.dataset);
  ordered_json split = nullptr;
  if (o.split) {
    if (!(*o.split > 0 && *o.split < 1)) throw UsageError("--split must be in (0, 1)");
    auto parts = dataset::split_dataset(pages, *o.split, o.seed);
    pages = std::move(parts.second);
    split = {{"ratio", *o.split}, {"seed", o.seed}};
    split["test_pages"] = ordered_json::array();
    for (const auto& p : pages) split["test_pages"].push_back(p.page_id);
  }

  ordered_json doc = header("eval");
  doc["target"] = o.target;
  doc["split"] = split;
  doc["pages"] = pages.size();
  ordered_json warnings = ordered_json::array();
  for (const auto& p : pages) {
    for (const auto& w : p.warnings) warnings.push_back(p.page_id + ": " + w);
  }
  doc["dataset_warnings"] = warnings;

  if (o.compare.empty()) {
    doc["extractor"] = names.front();
    doc["reports"] = pipeline::report_json(predictions_for(names.front(), model, pages, viewport), pages, *target);
    emit(doc, o.report, out);
    return kExitOk;
  }

  doc["columns"] = {"precision", "recall", "f1", "macro_precision", "macro_recall", "macro_f1"};
  ordered_json rows = ordered_json::array();
  ordered_json reports = ordered_json::object();
  for (const auto& name : names) {
    ordered_json report = pipeline::report_json(predictions_for(name, model, pages, viewport), pages, *target);
    ordered_json row = {{"extractor", name}};
    for (const auto& [slice, r] : report.items()) {
      ordered_json cells = ordered_json::object();
      for (const auto& column : doc["columns"]) cells[column.get<std::string>()] = r[column.get<std::string>()];
      row[slice] = cells;
    }
    rows.push_back(row);
    reports[name] = report;
  }
  doc["rows"] = rows;
  doc["reports"] = reports;
  emit(doc, o.report, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_synth(const std::string& dir, std::size_t n_pages, std::uint64_t seed, std::ostream& err) {
  if (n_pages < 1) throw UsageError("--pages must be >= 1");
  auto pages = dataset::synth_generate(n_pages, seed);
  for (const auto& page : pages) dataset::save_page(dir, page);
  err << "wrote " << pages.size() << " pages to " << dir << "\n";
  return kExitOk;
}

int cmd_fetch(const std::string& url_text, const std::string& dir, std::string page_id, int timeout,
              std::ostream& out) {
  fetch::Url url = fetch::parse_url(url_text);
  if (page_id.empty()) page_id = fetch::page_id_for(url);
  if (!dataset::valid_page_id(page_id) || page_id.starts_with('.')) throw UsageError("invalid page id '" + page_id + "'");
  std::string html = fetch::download(url, timeout);
  fs::path page_dir = fs::path(dir) / page_id;
  fs::create_directories(page_dir);
  dataset::write_file_atomic(page_dir / "page.html", html);
  if (!fs::exists(page_dir / "labels.json")) dataset::write_file_atomic(page_dir / "labels.json", dataset::write_labels({}));
  out << page_id << "\n";
  return kExitOk;
}

int cmd_features_dump(const std::string& input, const std::string& viewport_text, const std::string& format,
                      std::ostream& out) {
  layout::Viewport viewport = layout::parse_viewport(viewport_text);
  dom::Document doc = dom::parse_document(dataset::read_file(input));
  layout::LayoutTree tree = layout::compute_layout(doc, viewport);
  if (format == "csv") {
    out << features::to_csv(features::extract_all(doc, tree));
    return kExitOk;
  }
  ordered_json boxes = ordered_json::array();
  for (const auto& b : tree.boxes()) {
    boxes.push_back({{"node_id", b.node_id}, {"x", b.x}, {"y", b.y}, {"w", b.width}, {"h", b.height},
                     {"visible", b.visible}});
  }
  out << boxes.dump(2) << "\n";
  return kExitOk;
}

struct ServeOptions {
  std::string listen = "127.0.0.1:8080";
  std::string dataset;
  std::string model;
  std::string extractor;
  std::string ui;
  std::string viewport = "1280x800";
};

int cmd_serve(const ServeOptions& o, std::ostream& err) {
  auto colon = o.listen.rfind(':');
  if (colon == std::string::npos) throw UsageError("--listen must be HOST:PORT");
  std::string host = o.listen.substr(0, colon);
  int port = -1;
  try {
    std::size_t used = 0;
    port = std::stoi(o.listen.substr(colon + 1), &used);
    if (used != o.listen.size() - colon - 1) port = -1;
  } catch (const std::exception&) {
    port = -1;
  }
  if (port < 0 || port > 65535) throw UsageError("invalid port in --listen '" + o.listen + "'");

  std::string name = o.extractor.empty() ? (o.model.empty() ? "mss" : "gbm") : o.extractor;
  check_extractor_name(name, false);
  if (name == "gbm" && o.model.empty()) throw UsageError("extractor 'gbm' needs --model");

  service::ServiceConfig config;
  config.dataset = o.dataset;
  config.extractor = extract::make_extractor(name, o.model.empty() ? nullptr : load_model_file(o.model));
  config.viewport = layout::parse_viewport(o.viewport);
  if (!o.ui.empty()) config.ui_dir = o.ui;
  service::Service service(std::move(config));
  auto bound = service.bind(host, port);
  if (!bound) {
    err << "error: cannot bind " << o.listen << "\n";
    return kExitBindFailure;
  }
  err << "serving " << o.dataset << " on http://" << host << ":" << *bound << "\n" << std::flush;
  service.run();
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Main-content extraction: layout features, boosted trees and baselines", std::string(kToolName)};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::function<int()> action;

  ExtractOptions ex;
  auto* extract_cmd = app.add_subcommand("extract", "Classify the candidates of one page");
  extract_cmd->add_option("--input", ex.input, "HTML file")->required();
  extract_cmd->add_option("--model", ex.model, "Trained model file");
  extract_cmd->add_option("--extractor", ex.extractor, "shallow, cetr, mss or gbm");
  extract_cmd->add_option("--viewport", ex.viewport, "WxH")->capture_default_str();
  extract_cmd->add_option("--format", ex.format, "json or html")
      ->check(CLI::IsMember({"json", "html"}))
      ->capture_default_str();
  extract_cmd->add_option("--out", ex.out, "Also write the output to this file");
  extract_cmd->callback([&] { action = [&] { return cmd_extract(ex, out); }; });

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train a boosted-tree model on a dataset split");
  train_cmd->add_option("--dataset", tr.dataset, "Dataset directory")->required();
  train_cmd->add_option("--out", tr.out, "Model file to write")->required();
  train_cmd->add_option("--report", tr.report, "Also write the report to this file");
  train_cmd->add_option("--iterations", tr.config.iterations)->capture_default_str();
  train_cmd->add_option("--leaves", tr.config.num_leaves)->capture_default_str();
  train_cmd->add_option("--learning-rate", tr.config.learning_rate)->capture_default_str();
  train_cmd->add_option("--shrinkage", tr.config.shrinkage)->capture_default_str();
  train_cmd->add_option("--min-docs", tr.config.min_docs_per_leaf, "Minimum rows per leaf")->capture_default_str();
  train_cmd->add_option("--split", tr.split, "Train fraction, in (0, 1)")->capture_default_str();
  train_cmd->add_option("--seed", tr.config.seed)->capture_default_str();
  train_cmd->add_option("--viewport", tr.viewport)->capture_default_str();
  train_cmd->callback([&] { action = [&] { return cmd_train(tr, out, err); }; });

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score extractors against dataset labels");
  eval_cmd->add_option("--dataset", ev.dataset, "Dataset directory")->required();
  eval_cmd->add_option("--extractor", ev.extractor, "shallow, cetr, mss, gbm or oracle");
  eval_cmd->add_option("--model", ev.model, "Model file for the gbm extractor");
  eval_cmd->add_option("--target", ev.target, "text, images or all")->capture_default_str();
  eval_cmd->add_option("--compare", ev.compare, "Comma-separated extractors");
  eval_cmd->add_option("--split", ev.split, "Evaluate only the held-out part of this train fraction");
  eval_cmd->add_option("--seed", ev.seed, "Split seed")->capture_default_str();
  eval_cmd->add_option("--viewport", ev.viewport)->capture_default_str();
  eval_cmd->add_option("--report", ev.report, "Also write the report to this file");
  eval_cmd->callback([&] { action = [&] { return cmd_eval(ev, out); }; });

  std::string synth_out;
  std::size_t synth_pages = 40;
  std::uint64_t synth_seed = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
  synth_cmd->add_option("--out", synth_out, "Dataset directory")->required();
  synth_cmd->add_option("--pages", synth_pages)->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed)->capture_default_str();
  synth_cmd->callback([&] { action = [&] { return cmd_synth(synth_out, synth_pages, synth_seed, err); }; });

  std::string fetch_url, fetch_out, fetch_id;
  int fetch_timeout = 30;
  auto* fetch_cmd = app.add_subcommand("fetch", "Download a page into the dataset layout");
  fetch_cmd->add_option("--url", fetch_url)->required();
  fetch_cmd->add_option("--out", fetch_out, "Dataset directory")->required();
  fetch_cmd->add_option("--id", fetch_id, "Page id (derived from the URL by default)");
  fetch_cmd->add_option("--timeout", fetch_timeout, "Seconds")->capture_default_str();
  fetch_cmd->callback([&] { action = [&] { return cmd_fetch(fetch_url, fetch_out, fetch_id, fetch_timeout, out); }; });

  ServeOptions sv;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the labeling and prediction API");
  serve_cmd->add_option("--listen", sv.listen, "HOST:PORT")->capture_default_str();
  serve_cmd->add_option("--dataset", sv.dataset, "Dataset directory")->required();
  serve_cmd->add_option("--model", sv.model, "Model file for predictions");
  serve_cmd->add_option("--extractor", sv.extractor, "Prediction extractor (gbm with a model, else mss)");
  serve_cmd->add_option("--ui", sv.ui, "Static UI directory mounted at /");
  serve_cmd->add_option("--viewport", sv.viewport)->capture_default_str();
  serve_cmd->callback([&] { action = [&] { return cmd_serve(sv, err); }; });

  std::string fd_input, fd_viewport = "1280x800", fd_format = "csv";
  auto* features_cmd = app.add_subcommand("features", "Inspect feature extraction");
  features_cmd->require_subcommand(1);
  auto* dump_cmd = features_cmd->add_subcommand("dump", "Print the feature matrix or layout boxes of a page");
  dump_cmd->add_option("--input", fd_input, "HTML file")->required();
  dump_cmd->add_option("--viewport", fd_viewport)->capture_default_str();
  dump_cmd->add_option("--format", fd_format, "csv or layout")
      ->check(CLI::IsMember({"csv", "layout"}))
      ->capture_default_str();
  dump_cmd->callback([&] { action = [&] { return cmd_features_dump(fd_input, fd_viewport, fd_format, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run '" << kToolName << " --help' for usage\n";
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    err << "run '" << kToolName << " --help' for usage\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace pagesift::app
