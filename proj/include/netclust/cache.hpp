#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "netclust/error.hpp"
#include "netclust/link_prob.hpp"

namespace netclust {

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t file_content_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a64(bytes);
}

// On-disk cache of per-graph features and estimates, keyed by
// (file content hash, method, parameter string).
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  // Directory from NETCLUST_CACHE_DIR, if set and non-empty.
  static std::optional<ResultCache> from_environment() {
    const char* dir = std::getenv("NETCLUST_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return ResultCache(dir);
  }

  const std::filesystem::path& directory() const noexcept { return dir_; }

  std::optional<std::vector<double>> get_values(std::uint64_t content, const std::string& method,
                                                const std::string& params) const {
    std::ifstream in(entry(content, method, params, ".txt"));
    if (!in) return std::nullopt;
    std::vector<double> values;
    std::string token;
    while (in >> token) {
      // std::stod does not parse hexfloat portably; strtod does.
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0') return std::nullopt;  // corrupt entry: recompute
      values.push_back(v);
    }
    return values;
  }

  void put_values(std::uint64_t content, const std::string& method, const std::string& params,
                  const std::vector<double>& values) const {
    const auto path = entry(content, method, params, ".txt");
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
      std::ofstream out(tmp);
      if (!out) return;  // an unwritable cache is not an error
      out << std::hexfloat;
      for (double v : values) out << v << '\n';
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
  }

  std::optional<LinkProbMatrix> get_lpm(std::uint64_t content, const std::string& method,
                                        const std::string& params) const {
    const auto path = entry(content, method, params, ".lpm");
    if (!std::filesystem::exists(path)) return std::nullopt;
    try {
      return load_lpm(path.string());
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  void put_lpm(std::uint64_t content, const std::string& method, const std::string& params,
               const LinkProbMatrix& p) const {
    const auto path = entry(content, method, params, ".lpm");
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    try {
      save_lpm(p, tmp.string());
    } catch (const Error&) {
      return;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
  }

 private:
  std::filesystem::path entry(std::uint64_t content, const std::string& method, const std::string& params,
                              const char* ext) const {
    std::ostringstream name;
    name << std::hex << std::setw(16) << std::setfill('0') << content << '-' << method << '-' << std::setw(16)
         << fnv1a64(params) << ext;
    return dir_ / name.str();
  }

  std::filesystem::path dir_;
};

}  // namespace netclust
