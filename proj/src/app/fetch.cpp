#include "pagesift/fetch.hpp"

#include <charconv>

#include <httplib.h>

#include "pagesift/error.hpp"

namespace pagesift::fetch {

Url parse_url(std::string_view text) {
  Url url;
  auto scheme_end = text.find("://");
  if (scheme_end == std::string_view::npos) throw Error(ErrorKind::InvalidConfig, "URL needs a scheme: " + std::string(text));
  url.scheme = std::string(text.substr(0, scheme_end));
  for (char& c : url.scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (url.scheme != "http" && url.scheme != "https") {
    throw Error(ErrorKind::InvalidConfig, "unsupported URL scheme '" + url.scheme + "'");
  }
  std::string_view rest = text.substr(scheme_end + 3);
  auto path_start = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, path_start);
  std::string_view path = path_start == std::string_view::npos ? "/" : rest.substr(path_start);
  if (auto hash = path.find('#'); hash != std::string_view::npos) path = path.substr(0, hash);
  url.path = path.empty() || path.front() != '/' ? "/" + std::string(path) : std::string(path);

  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority = authority.substr(at + 1);
  url.port = url.scheme == "https" ? 443 : 80;
  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
    std::string_view port_text = authority.substr(colon + 1);
    int port = 0;
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port <= 0 || port > 65535) {
      throw Error(ErrorKind::InvalidConfig, "invalid port in URL: " + std::string(text));
    }
    url.port = port;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) throw Error(ErrorKind::InvalidConfig, "URL has no host: " + std::string(text));
  url.host = std::string(authority);
  return url;
}

std::string page_id_for(const Url& url) {
  std::string raw = url.host + (url.path == "/" ? "" : url.path);
  std::string id;
  for (char c : raw) {
    bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.';
    char mapped = keep ? c : '_';
    if (mapped == '_' && !id.empty() && id.back() == '_') continue;
    id += mapped;
  }
  while (!id.empty() && (id.back() == '_' || id.back() == '.')) id.pop_back();
  while (!id.empty() && id.front() == '.') id.erase(id.begin());
  if (id.size() > 100) id.resize(100);
  return id.empty() ? "page" : id;
}

std::string download(const Url& url, int timeout_seconds) {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (url.scheme == "https") throw Error(ErrorKind::InvalidConfig, "https URLs need a build with OpenSSL");
#endif
  httplib::Client client(url.scheme + "://" + url.host + ":" + std::to_string(url.port));
  client.set_follow_location(true);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);
  httplib::Headers headers = {{"User-Agent", std::string(kUserAgent)}};
  auto result = client.Get(url.path, headers);
  if (!result) {
    throw Error(ErrorKind::Io, "request to " + url.host + " failed: " + httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw Error(ErrorKind::Io, "GET " + url.path + " returned HTTP " + std::to_string(result->status));
  }
  return result->body;
}

}  // namespace pagesift::fetch
