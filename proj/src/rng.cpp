#include "dgd/rng.hpp"

#include <cassert>

namespace dgd {
namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> c,
                                        std::array<std::uint64_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMult0, c[0], hi0, lo0);
    mulhilo(kMult1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

RandomStream::RandomStream(std::array<std::uint64_t, 2> key,
                           std::uint64_t major, std::uint64_t minor,
                           std::uint32_t step, std::uint16_t entity,
                           Purpose purpose)
    : key_(key),
      counter_{major, minor,
               (static_cast<std::uint64_t>(step) << 32) |
                   (static_cast<std::uint64_t>(entity) << 16) |
                   static_cast<std::uint64_t>(purpose),
               0} {}

std::uint64_t RandomStream::next_u64() {
  if (pos_ == 4) {
    buffer_ = philox4x64(counter_, key_);
    ++counter_[3];
    pos_ = 0;
  }
  return buffer_[pos_++];
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint32_t RandomStream::uniform_int(std::uint32_t n) {
  assert(n > 0);
  // Lemire's multiply-shift with rejection
  std::uint64_t x = next_u64();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < n) {
    const std::uint64_t threshold = (0 - static_cast<std::uint64_t>(n)) % n;
    while (lo < threshold) {
      x = next_u64();
      m = static_cast<unsigned __int128>(x) * n;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 64);
}

int RandomStream::sample(std::span<const double> probs) {
  assert(!probs.empty());
  const double u = uniform();
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  // numerical leftovers: return the last index with positive mass
  for (std::size_t i = probs.size(); i-- > 0;)
    if (probs[i] > 0.0) return static_cast<int>(i);
  return static_cast<int>(probs.size() - 1);
}

void RandomStream::shuffle(std::span<int> items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::uint32_t j = uniform_int(static_cast<std::uint32_t>(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace dgd
