#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace pdnsa {

inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// FNV-1a with a splitmix finalizer. Stable across platforms and runs, which
/// shard assignment and golden outputs rely on.
inline std::uint64_t hash64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

/// Open-addressing set of 64-bit fingerprints, used for per-domain distinct
/// FQDN counting. Zero is reserved as the empty marker; a fingerprint of 0 is
/// stored as 1.
class FingerprintSet {
 public:
  /// Returns true when the value was not present.
  bool insert(std::uint64_t v) {
    if (v == 0) v = 1;
    if ((size_ + 1) * 4 > slots_.size() * 3) grow();
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t i = v & mask;; i = (i + 1) & mask) {
      if (slots_[i] == v) return false;
      if (slots_[i] == 0) {
        slots_[i] = v;
        ++size_;
        return true;
      }
    }
  }

  bool contains(std::uint64_t v) const {
    if (v == 0) v = 1;
    if (slots_.empty()) return false;
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t i = v & mask;; i = (i + 1) & mask) {
      if (slots_[i] == v) return true;
      if (slots_[i] == 0) return false;
    }
  }

  void merge(const FingerprintSet& other) {
    for (auto v : other.slots_) {
      if (v) insert(v);
    }
  }

  template <typename F>
  void for_each(F&& f) const {
    for (auto v : slots_) {
      if (v) f(v);
    }
  }

  std::size_t size() const { return size_; }
  std::size_t memory_bytes() const { return slots_.capacity() * sizeof(std::uint64_t); }

  friend bool operator==(const FingerprintSet& a, const FingerprintSet& b) {
    if (a.size_ != b.size_) return false;
    for (auto v : a.slots_) {
      if (v && !b.contains(v)) return false;
    }
    return true;
  }

 private:
  void grow() {
    std::vector<std::uint64_t> old;
    old.swap(slots_);
    slots_.assign(old.empty() ? 8 : old.size() * 2, 0);
    size_ = 0;
    for (auto v : old) {
      if (v) insert(v);
    }
  }

  std::vector<std::uint64_t> slots_;
  std::size_t size_ = 0;
};

}  // namespace pdnsa
