#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "pagesift/extractors.hpp"
#include "pagesift/layout.hpp"

namespace pagesift::service {

struct ServiceConfig {
  std::filesystem::path dataset;
  extract::Extractor extractor;
  std::optional<std::filesystem::path> ui_dir;
  layout::Viewport viewport;
};

/// Local JSON API over a dataset directory:
///   GET  /api/pages                 sorted page ids
///   GET  /api/page/{id}             raw page.html
///   GET  /api/page/{id}/labels      canonical labels.json
///   POST /api/page/{id}/labels      replace labels.json (204)
///   GET  /api/predict/{id}          [{node_id, tag, label, score}]
/// Label writes to one page are serialized; everything else runs concurrently.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds `host:port`; port 0 picks a free port. Returns the bound port or
  /// nullopt when binding fails.
  std::optional<int> bind(const std::string& host, int port);
  /// Serves until stop(). Requires a successful bind().
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pagesift::service
