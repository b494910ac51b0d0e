#include "addfunc/rng.hpp"

#include <cmath>
#include <numbers>

namespace addfunc::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> block(std::uint64_t seed, Stream stream, std::uint64_t rep,
                                   std::uint64_t index) {
    // The stream tag is folded into the key so that (rep, index) keep their full
    // 64-bit range in the counter.
    const std::uint64_t k = mix64(seed ^ (static_cast<std::uint64_t>(stream) << 56));
    return philox4x32({static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32),
                       static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)},
                      {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)});
}

inline std::uint64_t join(std::uint32_t hi, std::uint32_t lo) {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::array<double, 2> normal_pair(std::uint64_t seed, Stream stream, std::uint64_t rep,
                                  std::uint64_t index) {
    const auto b = block(seed, stream, rep, index);
    // u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(join(b[0], b[1]) >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(join(b[2], b[3]) >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

double uniform(std::uint64_t seed, Stream stream, std::uint64_t rep, std::uint64_t index) {
    const auto b = block(seed, stream, rep, index);
    return static_cast<double>(join(b[0], b[1]) >> 11) * 0x1.0p-53;
}

}  // namespace addfunc::rng
