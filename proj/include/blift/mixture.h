#ifndef BLIFT_MIXTURE_H_
#define BLIFT_MIXTURE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blift {

// a:b = behavior records : instruction records per window.
struct SamplingRatio {
  std::uint32_t blift = 1;
  std::uint32_t ift = 1;

  std::uint32_t window() const { return blift + ift; }
  bool operator==(const SamplingRatio&) const = default;
};

// Parses "a:b" with positive integers. Throws ConfigError.
SamplingRatio ParseSamplingRatio(std::string_view text);
std::string ToString(const SamplingRatio& ratio);

struct MixtureSpec {
  std::uint64_t blift_count = 1;
  std::uint64_t ift_count = 1;
  SamplingRatio ratio;
  std::uint64_t seed = 0;
  double target_epochs = 1.0;  // counted over the BLIFT pool

  // Throws ValidationError.
  void Validate() const;
};

enum class DataSource { kBlift, kIft };
std::string_view ToString(DataSource source);

struct ScheduleEntry {
  DataSource source = DataSource::kBlift;
  std::uint64_t item_index = 0;

  bool operator==(const ScheduleEntry&) const = default;
};

struct MixtureSchedule {
  MixtureSpec spec;
  std::vector<ScheduleEntry> entries;
};

// ceil(target_epochs * blift_count), treating products within 1e-9 (relative)
// of an integer as that integer so 2.2 * 100 gives 220 rather than 221.
std::uint64_t BliftEntryTarget(const MixtureSpec& spec);

// Windows of `a` BLIFT entries followed by `b` IFT entries until the BLIFT
// target is met. A final partial window carries the remaining r < a BLIFT
// entries and ceil(r * b / a) IFT entries, so the length is
// ceil(target * (a + b) / a). Each pool is walked through a seeded
// permutation that is redrawn every time the pool wraps around.
MixtureSchedule PlanMixture(const MixtureSpec& spec);

// BLIFT entries among the first `position` entries, divided by the pool size.
double EpochsElapsed(const MixtureSchedule& schedule, std::size_t position);

// Deterministic permutation of [0, n) for one pass over one pool. Built on
// mt19937_64 and explicit rejection sampling, so the sequence is the same on
// every standard library.
std::vector<std::uint64_t> SeededPermutation(std::uint64_t n,
                                             std::uint64_t seed,
                                             DataSource pool,
                                             std::uint64_t pass);

// Line-delimited {"step", "source", "item_index"}, newline-terminated.
std::string SerializeSchedule(const MixtureSchedule& schedule);

}  // namespace blift

#endif  // BLIFT_MIXTURE_H_
