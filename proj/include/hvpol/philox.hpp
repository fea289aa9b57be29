#pragma once

#include <array>
#include <cstdint>

namespace hvpol {

/// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011).
/// Output is a pure function of (counter, key), so independent streams need
/// no shared state and any partition of the work reproduces the same draws.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

/// Sequential uniform draws from one Philox stream. The key is the 64-bit
/// seed, counter words 2..3 hold the 64-bit stream id and words 0..1 count
/// blocks. Each block yields two doubles with 53 random bits.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal (Box-Muller, both variates used).
  double normal();

 private:
  void refill();

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<double, 2> buf_{};
  int pos_ = 2;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hvpol
