#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace lee {

// splitmix64 finalizer; full-period over 64-bit counters and good enough
// mixing for Monte Carlo work.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based generator: the value of draw #i depends only on (key, i), so
// any consumer keyed by (seed, stream ids...) produces the same numbers
// regardless of scheduling or thread count.
class CounterRng {
 public:
  CounterRng() = default;
  CounterRng(std::uint64_t key, std::uint64_t counter) : key_(key), counter_(counter) {}

  static CounterRng keyed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
    std::uint64_t k = mix64(seed ^ 0x853c49e6748fea9bULL);
    for (std::uint64_t s : stream) k = mix64(k ^ mix64(s + 0x2545f4914f6cdd1dULL));
    return CounterRng(k, 0);
  }

  std::uint64_t next_u64() { return mix64(key_ ^ mix64(counter_++ + 0x6a09e667f3bcc909ULL)); }

  // Uniform on the open interval (0,1).
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes two uniforms per call so the
  // stream position stays a pure function of the call count.
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Uniform integer in [0, n) via 128-bit multiply (Lemire reduction).
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace lee
