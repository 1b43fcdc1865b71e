#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace divstab {

// Counter-based stream: each sample index owns an independent generator
// derived from (seed, index), so results do not depend on how the index
// range is partitioned across workers.
struct SampleRng {
  std::uint64_t state;

  static SampleRng for_index(std::uint64_t seed, std::uint64_t index) {
    SampleRng r{seed + 0x9E3779B97F4A7C15ULL * (index + 1)};
    r.next();
    r.next();
    return r;
  }

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return (next() >> 11) * 0x1.0p-53; }

  double normal() {
    // Box-Muller; one value per call keeps the stream layout simple.
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  std::vector<double> gaussian_direction(int n) {
    std::vector<double> v(n);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int i = 0; i < n; ++i) {
        v[i] = normal();
        norm2 += v[i] * v[i];
      }
    } while (norm2 == 0.0);
    double inv = 1.0 / std::sqrt(norm2);
    for (double& c : v) c *= inv;
    return v;
  }

  // Uniform in the ball of the given radius.
  std::vector<double> ball_point(int n, double radius) {
    std::vector<double> v = gaussian_direction(n);
    double r = radius * std::pow(uniform01(), 1.0 / n);
    for (double& c : v) c *= r;
    return v;
  }

  // Uniform on the sphere of the given radius.
  std::vector<double> sphere_point(int n, double radius) {
    std::vector<double> v = gaussian_direction(n);
    for (double& c : v) c *= radius;
    return v;
  }
};

}  // namespace divstab
