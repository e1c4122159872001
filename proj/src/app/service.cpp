#include "pagesift/service.hpp"

#include <map>
#include <mutex>

#include <httplib.h>
#include <json.hpp>

#include "pagesift/dataset.hpp"
#include "pagesift/error.hpp"
#include "pagesift/pipeline.hpp"

namespace pagesift::service {

namespace fs = std::filesystem;

namespace {

constexpr const char* kJson = "application/json; charset=utf-8";
constexpr const char* kPageIdPattern = "([A-Za-z0-9_.-]+)";

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(nlohmann::ordered_json{{"error", message}}.dump() + "\n", kJson);
}

}  // namespace

struct Service::Impl {
  explicit Impl(ServiceConfig c) : config(std::move(c)) {}

  ServiceConfig config;
  httplib::Server server;
  std::mutex locks_guard;
  std::map<std::string, std::unique_ptr<std::mutex>> page_locks;

  std::mutex& page_lock(const std::string& page_id) {
    std::lock_guard guard(locks_guard);
    auto& slot = page_locks[page_id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
  }

  // The page directory, or nullopt (with a 404 written) when it does not exist.
  std::optional<fs::path> page_dir(const std::string& page_id, httplib::Response& res) const {
    fs::path dir = config.dataset / page_id;
    if (!dataset::valid_page_id(page_id) || page_id.starts_with('.') || !fs::is_regular_file(dir / "page.html")) {
      send_error(res, 404, "unknown page '" + page_id + "'");
      return std::nullopt;
    }
    return dir;
  }

  void list_pages(httplib::Response& res) const {
    std::vector<std::string> ids;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(config.dataset, ec)) {
      std::string name = entry.path().filename().string();
      if (entry.is_directory() && !name.starts_with('.') && dataset::valid_page_id(name) &&
          fs::is_regular_file(entry.path() / "page.html")) {
        ids.push_back(std::move(name));
      }
    }
    std::sort(ids.begin(), ids.end());
    res.set_content(nlohmann::ordered_json(ids).dump() + "\n", kJson);
  }

  void get_page(const std::string& page_id, httplib::Response& res) const {
    auto dir = page_dir(page_id, res);
    if (!dir) return;
    res.set_content(dataset::read_file(*dir / "page.html"), "text/html; charset=utf-8");
  }

  void get_labels(const std::string& page_id, httplib::Response& res) {
    auto dir = page_dir(page_id, res);
    if (!dir) return;
    std::lock_guard guard(page_lock(page_id));
    fs::path path = *dir / "labels.json";
    if (!fs::exists(path)) {
      res.set_content(dataset::write_labels({}), kJson);
      return;
    }
    res.set_content(dataset::write_labels(dataset::parse_labels(dataset::read_file(path))), kJson);
  }

  void post_labels(const std::string& page_id, const httplib::Request& req, httplib::Response& res) {
    auto dir = page_dir(page_id, res);
    if (!dir) return;
    std::vector<dataset::LabelRecord> labels;
    try {
      labels = dataset::parse_labels(req.body);
    } catch (const Error& e) {
      send_error(res, 400, e.what());
      return;
    }
    std::lock_guard guard(page_lock(page_id));
    dataset::write_file_atomic(*dir / "labels.json", dataset::write_labels(labels));
    res.status = 204;
  }

  void predict(const std::string& page_id, httplib::Response& res) const {
    auto dir = page_dir(page_id, res);
    if (!dir) return;
    auto predictions = extract::run_extractor(config.extractor, dataset::read_file(*dir / "page.html"), config.viewport);
    res.set_content(pipeline::to_json(predictions).dump(2) + "\n", kJson);
  }

  void install_routes() {
    using httplib::Request;
    using httplib::Response;
    const std::string id = kPageIdPattern;
    server.Get("/api/pages", [this](const Request&, Response& res) { list_pages(res); });
    server.Get("/api/page/" + id, [this](const Request& req, Response& res) { get_page(req.matches[1], res); });
    server.Get("/api/page/" + id + "/labels",
               [this](const Request& req, Response& res) { get_labels(req.matches[1], res); });
    server.Post("/api/page/" + id + "/labels",
                [this](const Request& req, Response& res) { post_labels(req.matches[1], req, res); });
    server.Get("/api/predict/" + id, [this](const Request& req, Response& res) { predict(req.matches[1], res); });

    server.set_exception_handler([](const Request&, Response& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      } catch (...) {
        send_error(res, 500, "internal error");
      }
    });
    if (config.ui_dir) server.set_mount_point("/", config.ui_dir->string());
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
  if (!impl_->config.extractor) throw Error(ErrorKind::InvalidConfig, "service needs an extractor");
  if (!fs::is_directory(impl_->config.dataset)) {
    throw Error(ErrorKind::MissingFile, "dataset directory " + impl_->config.dataset.string());
  }
  // SO_REUSEPORT (the library default) would let a second server share a
  // busy port; SO_REUSEADDR alone still allows fast restarts.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  impl_->install_routes();
}

Service::~Service() { stop(); }

std::optional<int> Service::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = impl_->server.bind_to_any_port(host);
    if (bound <= 0) return std::nullopt;
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) return std::nullopt;
  return port;
}

void Service::run() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace pagesift::service
