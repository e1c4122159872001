#pragma once

#include <string>
#include <string_view>

namespace pagesift::fetch {

inline constexpr std::string_view kUserAgent = "pagesift-fetch/1.0";

struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path;  // starts with '/', includes the query
};

/// Throws Error(InvalidConfig) for anything but absolute http(s) URLs.
Url parse_url(std::string_view url);

/// Directory-safe page id derived from host and path.
std::string page_id_for(const Url& url);

/// GET with redirects followed. Throws Error(Io) on transport failure or a
/// non-2xx status, Error(InvalidConfig) for https without TLS support.
std::string download(const Url& url, int timeout_seconds = 30);

}  // namespace pagesift::fetch
