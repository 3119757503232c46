#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace erasim {

// Packed bit vector with the word-level operations the Pauli algebra needs:
// XOR accumulation, AND-parity (symplectic products) and popcount.
class BitVec {
 public:
  BitVec() : n_(0) {}
  explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void set(std::size_t i, bool value) {
    const uint64_t mask = uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void flip(std::size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

  void clear() {
    for (auto& w : words_) w = 0;
  }

  BitVec& operator^=(const BitVec& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool any() const {
    for (uint64_t w : words_)
      if (w) return true;
    return false;
  }

  // Parity of popcount(a & b); the workhorse of commutation checks.
  static bool and_parity(const BitVec& a, const BitVec& b) {
    uint64_t acc = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i) acc ^= a.words_[i] & b.words_[i];
    return std::popcount(acc) & 1;
  }

  // Popcount of (a | b), used for Pauli weight.
  static std::size_t or_popcount(const BitVec& a, const BitVec& b) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(a.words_[i] | b.words_[i]));
    return c;
  }

  bool operator==(const BitVec& other) const {
    return n_ == other.n_ && words_ == other.words_;
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

 private:
  std::size_t n_;
  std::vector<uint64_t> words_;
};

}  // namespace erasim
