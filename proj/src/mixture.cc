#include "blift/mixture.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <random>

#include <nlohmann/json.hpp>

#include "blift/errors.h"

namespace blift {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound) {
  // Largest multiple of bound that fits, to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Hands out pool indices pass by pass.
class PoolCursor {
 public:
  PoolCursor(std::uint64_t size, std::uint64_t seed, DataSource pool)
      : size_(size), seed_(seed), pool_(pool) {}

  std::uint64_t Next() {
    if (pos_ == order_.size()) {
      order_ = SeededPermutation(size_, seed_, pool_, pass_++);
      pos_ = 0;
    }
    return order_[pos_++];
  }

 private:
  std::uint64_t size_;
  std::uint64_t seed_;
  DataSource pool_;
  std::uint64_t pass_ = 0;
  std::vector<std::uint64_t> order_;
  std::size_t pos_ = 0;
};

}  // namespace

SamplingRatio ParseSamplingRatio(std::string_view text) {
  const auto colon = text.find(':');
  SamplingRatio r;
  auto parse = [&](std::string_view part, std::uint32_t* out) {
    const char* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, *out);
    return ec == std::errc() && ptr == end && *out > 0;
  };
  if (colon == std::string_view::npos ||
      !parse(text.substr(0, colon), &r.blift) ||
      !parse(text.substr(colon + 1), &r.ift)) {
    throw ConfigError("sampling ratio must look like a:b with a, b >= 1, got '" +
                      std::string(text) + "'");
  }
  return r;
}

std::string ToString(const SamplingRatio& ratio) {
  return std::to_string(ratio.blift) + ":" + std::to_string(ratio.ift);
}

std::string_view ToString(DataSource source) {
  return source == DataSource::kBlift ? "blift" : "ift";
}

void MixtureSpec::Validate() const {
  if (blift_count < 1) throw ValidationError("blift_count must be >= 1");
  if (ift_count < 1) throw ValidationError("ift_count must be >= 1");
  if (ratio.blift < 1 || ratio.ift < 1) {
    throw ValidationError("sampling ratio terms must be >= 1");
  }
  if (!(target_epochs > 0.0) || !std::isfinite(target_epochs)) {
    throw ValidationError("target_epochs must be positive");
  }
}

std::uint64_t BliftEntryTarget(const MixtureSpec& spec) {
  const double x = spec.target_epochs * static_cast<double>(spec.blift_count);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) {
    return static_cast<std::uint64_t>(nearest);
  }
  return static_cast<std::uint64_t>(std::ceil(x));
}

std::vector<std::uint64_t> SeededPermutation(std::uint64_t n,
                                             std::uint64_t seed,
                                             DataSource pool,
                                             std::uint64_t pass) {
  std::vector<std::uint64_t> perm(n);
  for (std::uint64_t i = 0; i < n; ++i) perm[i] = i;
  std::uint64_t key = SplitMix64(seed);
  key = SplitMix64(key ^ (pool == DataSource::kBlift ? 0x626C696674ull
                                                     : 0x696674ull));
  key = SplitMix64(key ^ pass);
  std::mt19937_64 rng(key);
  for (std::uint64_t i = n; i > 1; --i) {
    const std::uint64_t j = UniformBelow(rng, i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

MixtureSchedule PlanMixture(const MixtureSpec& spec) {
  spec.Validate();
  MixtureSchedule schedule;
  schedule.spec = spec;
  const std::uint64_t target = BliftEntryTarget(spec);
  const std::uint64_t a = spec.ratio.blift;
  const std::uint64_t b = spec.ratio.ift;
  const std::uint64_t full = target / a;
  const std::uint64_t rem = target % a;
  const std::uint64_t tail_ift = (rem * b + a - 1) / a;
  schedule.entries.reserve(full * (a + b) + rem + tail_ift);

  PoolCursor blift(spec.blift_count, spec.seed, DataSource::kBlift);
  PoolCursor ift(spec.ift_count, spec.seed, DataSource::kIft);
  auto emit = [&](std::uint64_t n_blift, std::uint64_t n_ift) {
    for (std::uint64_t i = 0; i < n_blift; ++i) {
      schedule.entries.push_back({DataSource::kBlift, blift.Next()});
    }
    for (std::uint64_t i = 0; i < n_ift; ++i) {
      schedule.entries.push_back({DataSource::kIft, ift.Next()});
    }
  };
  for (std::uint64_t w = 0; w < full; ++w) emit(a, b);
  if (rem > 0) emit(rem, tail_ift);
  return schedule;
}

double EpochsElapsed(const MixtureSchedule& schedule, std::size_t position) {
  if (position > schedule.entries.size()) {
    throw ValidationError("schedule position past the end");
  }
  std::size_t blift = 0;
  for (std::size_t i = 0; i < position; ++i) {
    if (schedule.entries[i].source == DataSource::kBlift) ++blift;
  }
  return static_cast<double>(blift) /
         static_cast<double>(schedule.spec.blift_count);
}

std::string SerializeSchedule(const MixtureSchedule& schedule) {
  std::string out;
  for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
    nlohmann::ordered_json j;
    j["step"] = i;
    j["source"] = ToString(schedule.entries[i].source);
    j["item_index"] = schedule.entries[i].item_index;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace blift
