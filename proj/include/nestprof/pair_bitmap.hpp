#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace nestprof {

/// Index of the unordered document pair (i, j) with 1 <= i < j.
/// Pairs enumerate as (1,2), (1,3), (2,3), (1,4), ... grouped by the
/// larger id. Self-pairs have no index by construction.
inline std::uint64_t pair_index(std::uint64_t i, std::uint64_t j) {
  return (j - 1) * (j - 2) / 2 + (i - 1);
}

/// Inverse of pair_index.
inline std::pair<std::uint32_t, std::uint32_t> pair_from_index(std::uint64_t idx) {
  // Solve (j-1)(j-2)/2 <= idx for the largest j, then fix up.
  auto j = static_cast<std::uint64_t>(
      (3.0 + std::sqrt(8.0 * static_cast<double>(idx) + 1.0)) / 2.0);
  while ((j - 1) * (j - 2) / 2 > idx) --j;
  while (j * (j - 1) / 2 <= idx) ++j;
  const std::uint64_t i = idx - (j - 1) * (j - 2) / 2 + 1;
  return {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
}

/// Compressed sparse bitmap over pair indices: 2^16-wide chunks stored
/// either as a sorted array of low 16-bit offsets or, past 4096 entries,
/// as a packed 8 KiB bit array. Containers normalize back to array form
/// when set operations shrink them, so equal sets compare equal.
class PairBitmap {
  static constexpr std::size_t kDenseThreshold = 4096;
  static constexpr std::size_t kWords = 1024;  // 65536 bits

  struct Container {
    std::vector<std::uint16_t> array;  // sorted, used when words empty
    std::vector<std::uint64_t> words;  // dense form
    std::uint32_t count = 0;

    bool dense() const noexcept { return !words.empty(); }

    void normalize() {
      if (dense() && count <= kDenseThreshold) {
        array.clear();
        array.reserve(count);
        for (std::size_t w = 0; w < kWords; ++w) {
          std::uint64_t bits = words[w];
          while (bits) {
            const int b = std::countr_zero(bits);
            array.push_back(static_cast<std::uint16_t>(w * 64 + static_cast<std::size_t>(b)));
            bits &= bits - 1;
          }
        }
        words.clear();
        words.shrink_to_fit();
      }
    }

    void to_dense() {
      if (dense()) return;
      words.assign(kWords, 0);
      for (std::uint16_t v : array) words[v >> 6] |= 1ull << (v & 63);
      array.clear();
      array.shrink_to_fit();
    }

    void add(std::uint16_t v) {
      if (dense()) {
        std::uint64_t& w = words[v >> 6];
        const std::uint64_t bit = 1ull << (v & 63);
        if (!(w & bit)) {
          w |= bit;
          ++count;
        }
        return;
      }
      auto it = std::lower_bound(array.begin(), array.end(), v);
      if (it != array.end() && *it == v) return;
      array.insert(it, v);
      ++count;
      if (count > kDenseThreshold) to_dense();
    }

    bool contains(std::uint16_t v) const {
      if (dense()) return (words[v >> 6] >> (v & 63)) & 1u;
      return std::binary_search(array.begin(), array.end(), v);
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
      if (dense()) {
        for (std::size_t w = 0; w < kWords; ++w) {
          std::uint64_t bits = words[w];
          while (bits) {
            const int b = std::countr_zero(bits);
            fn(static_cast<std::uint16_t>(w * 64 + static_cast<std::size_t>(b)));
            bits &= bits - 1;
          }
        }
      } else {
        for (std::uint16_t v : array) fn(v);
      }
    }

    friend bool operator==(const Container& a, const Container& b) {
      return a.count == b.count && a.array == b.array && a.words == b.words;
    }
  };

 public:
  PairBitmap() = default;

  /// Builds from an ascending, duplicate-free index list.
  static PairBitmap from_sorted(const std::vector<std::uint64_t>& sorted_unique) {
    PairBitmap out;
    for (std::uint64_t idx : sorted_unique) {
      const std::uint64_t key = idx >> 16;
      if (out.chunks_.empty() || out.chunks_.back().first != key)
        out.chunks_.emplace_back(key, Container{});
      out.chunks_.back().second.add(static_cast<std::uint16_t>(idx & 0xffff));
    }
    return out;
  }

  void add(std::uint64_t idx) {
    const std::uint64_t key = idx >> 16;
    Container& c = chunk(key);
    c.add(static_cast<std::uint16_t>(idx & 0xffff));
  }

  bool contains(std::uint64_t idx) const {
    const auto it = find_chunk(idx >> 16);
    return it != chunks_.end() && it->second.contains(static_cast<std::uint16_t>(idx & 0xffff));
  }

  std::uint64_t cardinality() const noexcept {
    std::uint64_t n = 0;
    for (const auto& [key, c] : chunks_) n += c.count;
    return n;
  }

  bool empty() const noexcept { return chunks_.empty(); }

  PairBitmap intersect(const PairBitmap& other) const {
    PairBitmap out;
    auto a = chunks_.begin();
    auto b = other.chunks_.begin();
    while (a != chunks_.end() && b != other.chunks_.end()) {
      if (a->first < b->first) {
        ++a;
      } else if (b->first < a->first) {
        ++b;
      } else {
        Container c = intersect_containers(a->second, b->second);
        if (c.count) out.chunks_.emplace_back(a->first, std::move(c));
        ++a;
        ++b;
      }
    }
    return out;
  }

  /// this \ other.
  PairBitmap difference(const PairBitmap& other) const {
    PairBitmap out;
    auto b = other.chunks_.begin();
    for (const auto& [key, ca] : chunks_) {
      while (b != other.chunks_.end() && b->first < key) ++b;
      if (b == other.chunks_.end() || b->first != key) {
        out.chunks_.emplace_back(key, ca);
        continue;
      }
      Container c = difference_containers(ca, b->second);
      if (c.count) out.chunks_.emplace_back(key, std::move(c));
    }
    return out;
  }

  bool is_subset_of(const PairBitmap& other) const {
    auto b = other.chunks_.begin();
    for (const auto& [key, ca] : chunks_) {
      while (b != other.chunks_.end() && b->first < key) ++b;
      if (b == other.chunks_.end() || b->first != key) return false;
      if (!container_subset(ca, b->second)) return false;
    }
    return true;
  }

  void union_with(const PairBitmap& other) {
    for (const auto& [key, cb] : other.chunks_) {
      Container& ca = chunk(key);
      union_into(ca, cb);
    }
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [key, c] : chunks_)
      c.for_each([&](std::uint16_t low) { fn((key << 16) | low); });
  }

  std::vector<std::uint64_t> to_vector() const {
    std::vector<std::uint64_t> out;
    out.reserve(cardinality());
    for_each([&](std::uint64_t idx) { out.push_back(idx); });
    return out;
  }

  friend bool operator==(const PairBitmap& a, const PairBitmap& b) {
    return a.chunks_ == b.chunks_;
  }

  /// Rough heap footprint for memory accounting.
  std::uint64_t approx_bytes() const noexcept {
    std::uint64_t n = 0;
    for (const auto& [key, c] : chunks_)
      n += 32 + c.array.capacity() * 2 + c.words.capacity() * 8;
    return n;
  }

 private:
  using ChunkList = std::vector<std::pair<std::uint64_t, Container>>;

  ChunkList::const_iterator find_chunk(std::uint64_t key) const {
    auto it = std::lower_bound(chunks_.begin(), chunks_.end(), key,
                               [](const auto& c, std::uint64_t k) { return c.first < k; });
    return (it != chunks_.end() && it->first == key) ? it : chunks_.end();
  }

  Container& chunk(std::uint64_t key) {
    auto it = std::lower_bound(chunks_.begin(), chunks_.end(), key,
                               [](const auto& c, std::uint64_t k) { return c.first < k; });
    if (it != chunks_.end() && it->first == key) return it->second;
    return chunks_.insert(it, {key, Container{}})->second;
  }

  static Container intersect_containers(const Container& a, const Container& b) {
    Container out;
    if (!a.dense() && !b.dense()) {
      std::set_intersection(a.array.begin(), a.array.end(), b.array.begin(), b.array.end(),
                            std::back_inserter(out.array));
      out.count = static_cast<std::uint32_t>(out.array.size());
      return out;
    }
    if (a.dense() && b.dense()) {
      out.words.assign(kWords, 0);
      std::uint32_t count = 0;
      for (std::size_t w = 0; w < kWords; ++w) {
        out.words[w] = a.words[w] & b.words[w];
        count += static_cast<std::uint32_t>(std::popcount(out.words[w]));
      }
      out.count = count;
      if (!count) {
        out.words.clear();
        return out;
      }
      out.normalize();
      return out;
    }
    const Container& arr = a.dense() ? b : a;
    const Container& dense = a.dense() ? a : b;
    for (std::uint16_t v : arr.array)
      if (dense.contains(v)) out.array.push_back(v);
    out.count = static_cast<std::uint32_t>(out.array.size());
    return out;
  }

  static Container difference_containers(const Container& a, const Container& b) {
    Container out;
    if (!a.dense()) {
      for (std::uint16_t v : a.array)
        if (!b.contains(v)) out.array.push_back(v);
      out.count = static_cast<std::uint32_t>(out.array.size());
      return out;
    }
    out.words.assign(kWords, 0);
    std::uint32_t count = 0;
    if (b.dense()) {
      for (std::size_t w = 0; w < kWords; ++w) {
        out.words[w] = a.words[w] & ~b.words[w];
        count += static_cast<std::uint32_t>(std::popcount(out.words[w]));
      }
    } else {
      out.words = a.words;
      count = a.count;
      for (std::uint16_t v : b.array) {
        std::uint64_t& w = out.words[v >> 6];
        const std::uint64_t bit = 1ull << (v & 63);
        if (w & bit) {
          w &= ~bit;
          --count;
        }
      }
    }
    out.count = count;
    if (!count) {
      out.words.clear();
      return out;
    }
    out.normalize();
    return out;
  }

  static bool container_subset(const Container& a, const Container& b) {
    if (a.count > b.count) return false;
    if (!a.dense()) {
      for (std::uint16_t v : a.array)
        if (!b.contains(v)) return false;
      return true;
    }
    // a dense implies count > threshold; b must be dense too (count >=
    // a.count > threshold, and containers normalize to arrays below it).
    for (std::size_t w = 0; w < kWords; ++w)
      if (a.words[w] & ~b.words[w]) return false;
    return true;
  }

  static void union_into(Container& a, const Container& b) {
    if (a.dense() && b.dense()) {
      std::uint32_t count = 0;
      for (std::size_t w = 0; w < kWords; ++w) {
        a.words[w] |= b.words[w];
        count += static_cast<std::uint32_t>(std::popcount(a.words[w]));
      }
      a.count = count;
      return;
    }
    if (!b.dense()) {
      for (std::uint16_t v : b.array) a.add(v);
      return;
    }
    // a sparse, b dense: add a's entries into a copy of b.
    Container merged = b;
    for (std::uint16_t v : a.array) merged.add(v);
    a = std::move(merged);
  }

  ChunkList chunks_;
};

}  // namespace nestprof
