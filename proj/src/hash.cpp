#include "warrantscore/hash.hpp"

#include <array>
#include <cstdio>

namespace warrantscore {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view data) {
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return std::string(buf.data(), 16);
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double splitmix_unit(std::uint64_t& state) {
    // 53 mantissa bits -> uniform double in [0, 1)
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

} // namespace warrantscore
