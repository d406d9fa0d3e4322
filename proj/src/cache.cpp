#include "homgrowth/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace homgrowth {

std::uint64_t stable_hash64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {
std::string entry_path(const std::string& dir, const std::string& key) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(stable_hash64(key)));
    return (std::filesystem::path(dir) / (std::string(buf) + ".json")).string();
}
}  // namespace

std::optional<std::string> cache_load(const std::string& dir, const std::string& key) {
    if (dir.empty()) return std::nullopt;
    std::ifstream in(entry_path(dir, key));
    if (!in) return std::nullopt;
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    if (!j.contains("key") || !j.contains("payload")) return std::nullopt;
    if (!j["key"].is_string() || j["key"].get<std::string>() != key) return std::nullopt;
    if (!j["payload"].is_string()) return std::nullopt;
    return j["payload"].get<std::string>();
}

void cache_store(const std::string& dir, const std::string& key,
                 const std::string& payload) {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    nlohmann::json j;
    j["key"] = key;
    j["payload"] = payload;
    const std::string path = entry_path(dir, key);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) return;  // cache is best-effort
        out << j.dump();
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace homgrowth
