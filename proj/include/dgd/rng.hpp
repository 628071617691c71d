#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace dgd {

// Philox 4x64-10 block function (Salmon et al. counter-based generator).
// Verified against the numpy.random.Philox reference outputs.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key);

// What a stream is consumed for. Part of the stream identity, so a draw
// never depends on which other draws happened around it.
enum class Purpose : std::uint16_t {
  init_state = 1,
  placement,
  possession,
  observation,
  agent_init,
  agent_transition,
  agent_action,
  opponent_action,
  move_permutation,
  q_explore,
  q_tie_break,
  param_init,
  generic,
};

// One logical random stream, identified by (key, major, minor, step,
// entity, purpose). Streams with different identities are independent;
// draws within a stream advance a block counter.
class RandomStream {
 public:
  RandomStream(std::array<std::uint64_t, 2> key, std::uint64_t major,
               std::uint64_t minor, std::uint32_t step, std::uint16_t entity,
               Purpose purpose);

  std::uint64_t next_u64();
  double uniform();                        // [0, 1), 53-bit
  std::uint32_t uniform_int(std::uint32_t n);  // unbiased, [0, n)
  int sample(std::span<const double> probs);   // categorical via CDF walk

  // Fisher-Yates
  void shuffle(std::span<int> items);

 private:
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 4> buffer_{};
  int pos_ = 4;  // empty
};

// Stream factory bound to one (seed, run) pair.
class RunRng {
 public:
  RunRng(std::uint64_t seed, std::uint64_t run) : key_{seed, run} {}

  RandomStream stream(std::uint64_t major, std::uint64_t minor,
                      std::uint32_t step, std::uint16_t entity,
                      Purpose purpose) const {
    return RandomStream(key_, major, minor, step, entity, purpose);
  }

  std::uint64_t seed() const { return key_[0]; }
  std::uint64_t run() const { return key_[1]; }

 private:
  std::array<std::uint64_t, 2> key_;
};

// Per-episode view: fixes (major, minor) so environments and policies only
// name (step, entity, purpose). Training episodes use minor = 0 and
// major = trial index; evaluation episodes use major = checkpoint trial and
// minor = 1 + episode index.
class EpisodeRng {
 public:
  EpisodeRng(const RunRng& rng, std::uint64_t major, std::uint64_t minor)
      : rng_(&rng), major_(major), minor_(minor) {}

  RandomStream at(std::uint32_t step, std::uint16_t entity,
                  Purpose purpose) const {
    return rng_->stream(major_, minor_, step, entity, purpose);
  }

 private:
  const RunRng* rng_;
  std::uint64_t major_;
  std::uint64_t minor_;
};

// Entity ids outside the per-agent range.
inline constexpr std::uint16_t kEnvEntity = 0xFFFF;
inline constexpr std::uint16_t kCentralEntity = 0xFFFE;

}  // namespace dgd
