#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>

#include "pdnsa/error.hpp"
#include "pdnsa/hashing.hpp"
#include "pdnsa/ingest.hpp"

namespace pdnsa {
namespace {

// Exact string set: key bytes live in an append-only arena, the table holds
// (hash, pointer, length) slots with linear probing.
class ArenaStringSet {
 public:
  bool insert(std::string_view key, std::uint64_t h) {
    if ((size_ + 1) * 10 > slots_.size() * 7) grow();
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t i = h & mask;; i = (i + 1) & mask) {
      Slot& s = slots_[i];
      if (!s.data) {
        s = {h, store(key), static_cast<std::uint32_t>(key.size())};
        ++size_;
        return true;
      }
      if (s.hash == h && s.len == key.size() && std::memcmp(s.data, key.data(), key.size()) == 0) return false;
    }
  }

  bool contains(std::string_view key, std::uint64_t h) const {
    if (slots_.empty()) return false;
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t i = h & mask;; i = (i + 1) & mask) {
      const Slot& s = slots_[i];
      if (!s.data) return false;
      if (s.hash == h && s.len == key.size() && std::memcmp(s.data, key.data(), key.size()) == 0) return true;
    }
  }

  std::size_t size() const { return size_; }
  std::size_t memory_bytes() const { return slots_.capacity() * sizeof(Slot) + blocks_.size() * kBlock; }

 private:
  struct Slot {
    std::uint64_t hash = 0;
    const char* data = nullptr;
    std::uint32_t len = 0;
  };
  static constexpr std::size_t kBlock = 1 << 20;

  const char* store(std::string_view key) {
    if (key.size() > kBlock) {
      big_.push_back(std::make_unique<char[]>(key.size()));
      std::memcpy(big_.back().get(), key.data(), key.size());
      return big_.back().get();
    }
    if (blocks_.empty() || used_ + key.size() > kBlock) {
      blocks_.push_back(std::make_unique<char[]>(kBlock));
      used_ = 0;
    }
    char* dst = blocks_.back().get() + used_;
    std::memcpy(dst, key.data(), key.size());
    used_ += key.size();
    // Empty keys still need a non-null marker.
    return key.empty() ? blocks_.back().get() : dst;
  }

  void grow() {
    std::vector<Slot> old;
    old.swap(slots_);
    slots_.resize(old.empty() ? 1024 : old.size() * 2);
    const std::size_t mask = slots_.size() - 1;
    for (const Slot& s : old) {
      if (!s.data) continue;
      std::size_t i = s.hash & mask;
      while (slots_[i].data) i = (i + 1) & mask;
      slots_[i] = s;
    }
  }

  std::vector<Slot> slots_;
  std::vector<std::unique_ptr<char[]>> blocks_;
  std::vector<std::unique_ptr<char[]>> big_;
  std::size_t used_ = 0;
  std::size_t size_ = 0;
};

class BloomFilter {
 public:
  BloomFilter(std::size_t capacity, double fp_rate) {
    const double n = static_cast<double>(std::max<std::size_t>(capacity, 1));
    const double ln2 = std::log(2.0);
    bits_ = static_cast<std::size_t>(std::ceil(-n * std::log(fp_rate) / (ln2 * ln2)));
    bits_ = std::max<std::size_t>(bits_, 64);
    hashes_ = std::max(1, static_cast<int>(std::round(static_cast<double>(bits_) / n * ln2)));
    words_.assign((bits_ + 63) / 64, 0);
  }

  // Kirsch-Mitzenmacher double hashing.
  bool insert(std::uint64_t h) {
    const std::uint64_t h1 = h;
    const std::uint64_t h2 = mix64(h ^ 0x9e3779b97f4a7c15ULL) | 1;
    bool fresh = false;
    for (int i = 0; i < hashes_; ++i) {
      const std::size_t bit = (h1 + static_cast<std::uint64_t>(i) * h2) % bits_;
      std::uint64_t& w = words_[bit / 64];
      const std::uint64_t m = 1ULL << (bit % 64);
      if (!(w & m)) {
        fresh = true;
        w |= m;
      }
    }
    return fresh;
  }

  std::size_t memory_bytes() const { return words_.size() * sizeof(std::uint64_t); }

 private:
  std::size_t bits_ = 0;
  int hashes_ = 1;
  std::vector<std::uint64_t> words_;
};

}  // namespace

struct FirstSeenState::Impl {
  Policy policy = Policy::Exact;
  std::optional<std::size_t> capacity;
  double fp_rate = 0.0;
  std::mutex mu;
  std::size_t size = 0;
  std::unique_ptr<ArenaStringSet> exact;
  std::unique_ptr<BloomFilter> bloom;
};

FirstSeenState::FirstSeenState(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
FirstSeenState::FirstSeenState(FirstSeenState&&) noexcept = default;
FirstSeenState& FirstSeenState::operator=(FirstSeenState&&) noexcept = default;
FirstSeenState::~FirstSeenState() = default;

FirstSeenState FirstSeenState::exact(std::optional<std::size_t> capacity) {
  auto impl = std::make_unique<Impl>();
  impl->policy = Policy::Exact;
  impl->capacity = capacity;
  impl->exact = std::make_unique<ArenaStringSet>();
  return FirstSeenState(std::move(impl));
}

FirstSeenState FirstSeenState::approximate(std::size_t capacity, double false_positive_rate) {
  if (!(false_positive_rate > 0.0 && false_positive_rate < 1.0)) {
    throw ConfigError("false-positive rate must be in (0, 1)");
  }
  if (capacity == 0) throw ConfigError("approximate first-seen state needs a capacity");
  auto impl = std::make_unique<Impl>();
  impl->policy = Policy::Approximate;
  impl->capacity = capacity;
  impl->fp_rate = false_positive_rate;
  impl->bloom = std::make_unique<BloomFilter>(capacity, false_positive_rate);
  return FirstSeenState(std::move(impl));
}

bool FirstSeenState::check_and_insert(std::string_view key) {
  const std::uint64_t h = hash64(key);
  std::lock_guard lock(impl_->mu);
  if (impl_->policy == Policy::Exact) {
    if (impl_->capacity && impl_->size >= *impl_->capacity) {
      // Full: a known key is still a duplicate, a new one cannot be admitted.
      if (impl_->exact->contains(key, h)) return false;
      throw CapacityExceeded("first-seen exact set reached capacity " + std::to_string(*impl_->capacity));
    }
    const bool fresh = impl_->exact->insert(key, h);
    if (fresh) ++impl_->size;
    return fresh;
  }
  if (impl_->size >= *impl_->capacity) {
    throw CapacityExceeded("first-seen Bloom filter reached its sizing capacity " +
                           std::to_string(*impl_->capacity));
  }
  const bool fresh = impl_->bloom->insert(h);
  if (fresh) ++impl_->size;
  return fresh;
}

FirstSeenState::Policy FirstSeenState::policy() const { return impl_->policy; }
std::size_t FirstSeenState::size() const { return impl_->size; }
std::optional<std::size_t> FirstSeenState::capacity() const { return impl_->capacity; }
double FirstSeenState::declared_false_positive_rate() const { return impl_->fp_rate; }

std::size_t FirstSeenState::memory_bytes() const {
  if (impl_->exact) return impl_->exact->memory_bytes();
  return impl_->bloom->memory_bytes();
}

}  // namespace pdnsa
