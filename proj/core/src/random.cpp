#include "clustersense/random.hpp"

#include <array>
#include <cmath>

namespace clustersense {
namespace {

constexpr int kLayers = 128;
constexpr double kTailStart = 3.442619855899;
constexpr double kLayerArea = 9.91256303526217e-3;

struct ZigguratTables {
  // x[i] is the right edge of layer i; x[0] is the widened base strip.
  std::array<double, kLayers + 1> x{};
  std::array<double, kLayers + 1> f{};

  ZigguratTables() {
    auto density = [](double v) { return std::exp(-0.5 * v * v); };
    x[0] = kLayerArea / density(kTailStart);
    x[1] = kTailStart;
    for (int i = 1; i < kLayers - 1; ++i) {
      x[i + 1] = std::sqrt(-2.0 * std::log(kLayerArea / x[i] + density(x[i])));
    }
    x[kLayers] = 0.0;
    for (int i = 0; i <= kLayers; ++i) f[i] = density(x[i]);
  }
};

const ZigguratTables& tables() {
  static const ZigguratTables t;
  return t;
}

}  // namespace

double CounterRng::normal() {
  const auto& t = tables();
  for (;;) {
    const std::uint64_t bits = next_u64();
    const int layer = static_cast<int>(bits & (kLayers - 1));
    // Signed uniform in (-1, 1) from the top 53 bits.
    const double u = static_cast<double>(static_cast<std::int64_t>(bits >> 11) -
                                         (std::int64_t{1} << 52)) *
                     0x1.0p-52;
    const double z = u * t.x[layer];
    if (std::abs(z) < t.x[layer + 1]) return z;

    if (layer == 0) {
      // Tail beyond kTailStart (Marsaglia).
      double a = 0.0;
      double b = 0.0;
      do {
        a = -std::log(uniform_open0()) / kTailStart;
        b = -std::log(uniform_open0());
      } while (2.0 * b < a * a);
      return u < 0.0 ? -(kTailStart + a) : kTailStart + a;
    }

    const double y = t.f[layer] + uniform_open0() * (t.f[layer + 1] - t.f[layer]);
    if (y < std::exp(-0.5 * z * z)) return z;
  }
}

}  // namespace clustersense
