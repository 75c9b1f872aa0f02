#pragma once

// Published bounds and existence facts for symmetric configurations v_k.

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace configura::reference {

// G(k) = 2L+1 for the shortest known Golomb ruler with k marks, k = 2..83.
inline constexpr std::array<std::uint32_t, 82> kGolombBound = {
    // k = 2..15
    3, 7, 13, 23, 35, 51, 69, 89, 111, 145, 171, 213, 255, 303,
    // k = 16..41
    355, 399, 433, 493, 567, 667, 713, 745, 851, 961, 985, 1107, 1171, 1247, 1361, 1495, 1569, 1719,
    1877, 1975, 2011, 2199, 2293, 2505, 2565, 2611,
    // k = 42..83
    2795, 3015, 3193, 3375, 3407, 3609, 3775, 3917, 4189, 4381, 4541, 4695, 4747, 5197, 5451, 5547,
    5703, 5823, 6039, 6269, 6431, 6783, 7055, 7187, 7515, 7639, 7913, 8291, 8435, 8661, 8947, 9027,
    9507, 9965, 10179, 10409, 10599, 10817, 11127, 11435, 11629, 12041};

inline constexpr std::uint32_t kGolombMinK = 2;
inline constexpr std::uint32_t kGolombMaxK = 83;

// Upper bounds on the cyclic existence bound, k = 2..83.
inline constexpr std::array<std::uint32_t, 82> kCyclicExistenceBound = {
    // k = 2..15
    3, 7, 13, 23, 35, 48, 63, 85, 107, 135, 161, 193, 225, 267,
    // k = 16..41
    331, 365, 420, 481, 534, 614, 649, 713, 775, 865, 943, 1021, 1085, 1187, 1274, 1351, 1459, 1593,
    1787, 1859, 1961, 2085, 2180, 2403, 2524, 2577,
    // k = 42..83
    2632, 2860, 2917, 3280, 3353, 3453, 3765, 3839, 3871, 4308, 4359, 4463, 4513, 5195, 5341, 5501,
    5551, 5612, 5687, 5994, 6150, 6611, 6796, 6853, 7279, 7359, 7463, 8111, 8125, 8288, 8694, 8813,
    8965, 9883, 10023, 10229, 10395, 10800, 10977, 11396, 11443, 11593};

// Smallest v admitting a cyclic v_k, k = 2..15.
inline constexpr std::array<std::uint32_t, 14> kSmallestCyclic = {3,   7,   13,  21,  31,  48,  57,
                                                                  73,  91,  120, 133, 168, 183, 255};

struct Interval {
  std::uint32_t lo, hi;  // inclusive
};

struct CyclicRow {
  std::uint32_t k;
  std::vector<Interval> exists;  // v in [P(k), G(k)) with a known cyclic v_k
};

inline const std::vector<CyclicRow>& small_k_cyclic_rows() {
  static const std::vector<CyclicRow> rows = {
      {2, {}},
      {3, {}},
      {4, {}},
      {5, {{21, 21}}},
      {6, {{31, 31}}},
      {7, {{48, 50}}},
      {8, {{57, 57}, {63, 68}}},
      {9, {{73, 73}, {80, 80}, {85, 88}}},
      {10, {{91, 91}, {107, 110}}},
      {11, {{120, 120}, {133, 133}, {135, 144}}},
      {12, {{133, 133}, {156, 156}, {158, 159}, {161, 170}}},
      {13, {{168, 168}, {183, 183}, {193, 212}}},
      {14, {{183, 183}, {225, 254}}},
      {15, {{255, 255}, {267, 302}}},
  };
  return rows;
}

// k = 16 row: known cyclic values and the intervals reported as new.
inline const std::vector<std::uint32_t>& k16_known_cyclic() {
  static const std::vector<std::uint32_t> v = {255, 272, 273, 288, 307};
  return v;
}
inline const std::vector<Interval>& k16_targets() {
  static const std::vector<Interval> v = {{318, 318}, {320, 329}, {331, 354}};
  return v;
}

// Any-configuration targets for k = 8, 9 (cyclic and non-cyclic).
inline const std::vector<std::pair<std::uint32_t, std::vector<Interval>>>& any_config_targets() {
  static const std::vector<std::pair<std::uint32_t, std::vector<Interval>>> v = {
      {8, {{57, 57}, {63, 68}}},
      {9, {{73, 73}, {78, 78}, {80, 88}}},
  };
  return v;
}

enum class FactStatus { NoConfig, NoCyclicConfig, SporadicExists };

struct Fact {
  std::uint32_t v, k;
  FactStatus status;
  std::string_view citation;
};

inline const std::vector<Fact>& facts() {
  static const std::vector<Fact> f = [] {
    std::vector<Fact> out = {
        {22, 5, FactStatus::NoConfig, "deficiency-one"},
        {32, 6, FactStatus::NoConfig, "Gropp-nk Th.4.8"},
        {33, 6, FactStatus::NoConfig, "Kaski-Ostergard"},
        {34, 6, FactStatus::NoCyclicConfig, "Lipman"},
        {43, 7, FactStatus::NoConfig, "no plane of order 6"},
        {44, 7, FactStatus::NoConfig, "deficiency-one"},
        {58, 8, FactStatus::NoConfig, "deficiency-one"},
        {74, 9, FactStatus::NoConfig, "deficiency-one"},
        {92, 10, FactStatus::NoConfig, "deficiency-one"},
        {111, 11, FactStatus::NoConfig, "no plane of order 10"},
        {112, 11, FactStatus::NoConfig, "no plane of order 10"},
        {134, 12, FactStatus::NoConfig, "deficiency-one"},
        {158, 13, FactStatus::NoConfig, "deficiency-one"},
        {184, 14, FactStatus::NoConfig, "deficiency-one"},
        {211, 15, FactStatus::NoConfig, "Bruck-Ryser"},
        {212, 15, FactStatus::NoConfig, "deficiency-one"},
        {274, 17, FactStatus::NoConfig, "deficiency-one"},
        {344, 19, FactStatus::NoConfig, "deficiency-one"},
        {382, 20, FactStatus::NoConfig, "deficiency-one"},
        {422, 21, FactStatus::NoConfig, "deficiency-one"},
        {463, 22, FactStatus::NoConfig, "Bruck-Ryser"},
        {464, 22, FactStatus::NoConfig, "deficiency-one"},
        {507, 23, FactStatus::NoConfig, "Bruck-Ryser"},
        {508, 23, FactStatus::NoConfig, "deficiency-one"},
        {554, 24, FactStatus::NoConfig, "deficiency-one"},
        {652, 26, FactStatus::NoConfig, "deficiency-one"},
        {758, 28, FactStatus::NoConfig, "deficiency-one"},
        {814, 29, FactStatus::NoConfig, "deficiency-one"},
        {872, 30, FactStatus::NoConfig, "deficiency-one"},
        {931, 31, FactStatus::NoConfig, "Bruck-Ryser"},
        {932, 31, FactStatus::NoConfig, "deficiency-one"},
        {994, 32, FactStatus::NoConfig, "deficiency-one"},
        {1058, 33, FactStatus::NoConfig, "deficiency-one"},
        {1123, 34, FactStatus::NoConfig, "Bruck-Ryser"},
        {1124, 34, FactStatus::NoConfig, "deficiency-one"},
        {1192, 35, FactStatus::NoConfig, "deficiency-one"},
        {1334, 37, FactStatus::NoConfig, "deficiency-one"},
        {1483, 39, FactStatus::NoConfig, "Bruck-Ryser"},
        {1484, 39, FactStatus::NoConfig, "deficiency-one"},
        {1562, 40, FactStatus::NoConfig, "deficiency-one"},
        {1642, 41, FactStatus::NoConfig, "deficiency-one"},
        {45, 7, FactStatus::SporadicExists, "sporadic"},
        {82, 9, FactStatus::SporadicExists, "sporadic"},
        {135, 12, FactStatus::SporadicExists, "sporadic"},
        {34, 6, FactStatus::SporadicExists, "sporadic"},
    };
    for (std::uint32_t v = 59; v <= 62; ++v) out.push_back({v, 8, FactStatus::NoCyclicConfig, "Lipman"});
    for (std::uint32_t v = 75; v <= 84; ++v)
      if (v != 80) out.push_back({v, 9, FactStatus::NoCyclicConfig, "Funk"});
    // Below the smallest cyclic order nothing cyclic exists.
    for (std::uint32_t k = 2; k <= 15; ++k) {
      const std::uint32_t p = k * k - k + 1;
      for (std::uint32_t v = p; v < kSmallestCyclic[k - 2]; ++v) {
        bool listed = false;
        for (const auto& e : out)
          if (e.v == v && e.k == k && e.status != FactStatus::SporadicExists) listed = true;
        if (!listed) out.push_back({v, k, FactStatus::NoCyclicConfig, "below smallest cyclic order"});
      }
    }
    for (std::uint32_t v = 241; v <= 254; ++v) out.push_back({v, 16, FactStatus::NoCyclicConfig, "Shearer"});
    return out;
  }();
  return f;
}

}  // namespace configura::reference
