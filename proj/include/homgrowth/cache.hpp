#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace homgrowth {

// FNV-1a; stable across platforms and runs, used for cache keys.
std::uint64_t stable_hash64(std::string_view s);

// On-disk result cache. Entries are JSON envelopes {"key":..., "payload":...}
// under <dir>/<hex key>.json; a missing, unreadable, or mismatched entry
// reads as absent. Stores atomically (temp file + rename).
std::optional<std::string> cache_load(const std::string& dir, const std::string& key);
void cache_store(const std::string& dir, const std::string& key,
                 const std::string& payload);

}  // namespace homgrowth
