#pragma once

#include <cstdint>

namespace couette {

// xoshiro256** seeded through splitmix64. Self-contained so random audits
// reproduce bit-for-bit across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();                      // [0, 1)
  double uniform(double a, double b);    // [a, b)
  int uniform_int(int a, int b);         // {a, ..., b}

 private:
  std::uint64_t s_[4];
};

}  // namespace couette
