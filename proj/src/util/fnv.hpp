#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace asqg {

constexpr uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

constexpr uint64_t fnv1a64(std::string_view data, uint64_t h = kFnvOffset) {
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::string fnv_hex(uint64_t h);

// FNV-1a over a file's bytes. Throws UsageError if the file cannot be read.
uint64_t fnv1a64_file(const std::string& path);

}  // namespace asqg
