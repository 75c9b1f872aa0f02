#include <gtest/gtest.h>

#include <random>

#include "configura/construct.hpp"
#include "configura/extend.hpp"
#include "configura/matrix.hpp"
#include "oracles.hpp"

using namespace configura;

namespace {

std::vector<std::uint32_t> sigma_perm(std::uint32_t t, std::uint32_t d) {
  std::vector<std::uint32_t> p(t * d);
  for (std::uint32_t x = 0; x < t * d; ++x) p[x] = sigma(t, d, x);
  return p;
}

// Class j maximising w_j + (c-1) * min_{h != j} w_h.
std::uint32_t best_class(const std::vector<std::uint32_t>& w, std::uint32_t c) {
  std::uint32_t best = 0, bestK = 0;
  for (std::uint32_t j = 0; j < w.size(); ++j) {
    std::uint32_t wm = UINT32_MAX;
    for (std::uint32_t h = 0; h < w.size(); ++h)
      if (h != j) wm = std::min(wm, w[h]);
    const auto k = w[j] + (c - 1) * wm;
    if (k > bestK) bestK = k, best = j;
  }
  return best;
}

}  // namespace

TEST(Circulant, Examples) {
  const auto fano = circulant_from_ruler(ModularRuler({0, 1, 3}, 7));
  EXPECT_TRUE(oracle::configuration(fano, 3));
  // The PG(2,2) lines are the translates of its Singer set; an affine relabeling
  // maps them onto the rows of the (0,1,3) circulant.
  const auto P = pg_incidence(2);
  bool found = false;
  for (std::uint32_t m = 1; m < 7 && !found; ++m)
    for (std::uint32_t b = 0; b < 7 && !found; ++b) {
      std::set<Marks> lines, rows;
      for (const auto& l : P->lines) {
        Marks img;
        for (auto x : l) img.push_back((m * x + b) % 7);
        std::sort(img.begin(), img.end());
        lines.insert(img);
      }
      for (std::uint32_t i = 0; i < 7; ++i) rows.insert(fano.row_support(i));
      found = lines == rows;
    }
  EXPECT_TRUE(found);

  const auto id = circulant_from_ruler(ModularRuler({0}, 3));
  for (std::uint32_t i = 0; i < 3; ++i)
    for (std::uint32_t j = 0; j < 3; ++j) EXPECT_EQ(id.get(i, j), i == j);

  const auto m20 = circulant_from_ruler(ModularRuler({4, 6, 7, 13}, 20));
  EXPECT_TRUE(oracle::configuration(m20, 4));
  EXPECT_EQ(m20, oracle::circulant({4, 6, 7, 13}, 20));
  EXPECT_THROW(circulant_from_ruler(ModularRuler({0, 1, 2}, 7)), Error);
}

TEST(IsConfiguration, Examples) {
  EXPECT_TRUE(is_configuration(circulant_from_ruler(singer_ruler(5)), 6));
  const auto bad = oracle::circulant({0, 1, 2}, 7);
  const auto res = is_configuration(bad, 3);
  EXPECT_FALSE(res.ok);
  EXPECT_FALSE(res.diagnostic.empty());
  IncidenceMatrix ones(4, 4);
  for (std::uint32_t i = 0; i < 4; ++i)
    for (std::uint32_t j = 0; j < 4; ++j) ones.set(i, j);
  EXPECT_FALSE(is_configuration(ones, 4).ok);
  EXPECT_FALSE(is_configuration(IncidenceMatrix(3, 4), 0).ok);
}

TEST(IsConfiguration, AgreesWithNaiveCheck) {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 400; ++it) {
    const std::uint32_t v = 5 + rng() % 25, k = 2 + rng() % 3;
    IncidenceMatrix m(v, v);
    // Random superposition of k permutations: always regular, sometimes J2-free.
    std::vector<std::uint32_t> p(v);
    for (std::uint32_t r = 0; r < k; ++r) {
      for (std::uint32_t i = 0; i < v; ++i) p[i] = i;
      std::shuffle(p.begin(), p.end(), rng);
      for (std::uint32_t i = 0; i < v; ++i) m.set(i, p[i]);
    }
    ASSERT_EQ(is_configuration(m, k).ok, oracle::configuration(m, k));
  }
}

TEST(Bdc, Examples) {
  const auto b = bdc_assemble(ModularRuler({1, 2}, 6), 2);
  EXPECT_EQ(b.t, 2U);
  EXPECT_EQ(b.d, 3U);
  EXPECT_EQ(weight_vector(b), (std::vector<std::uint32_t>{1, 1}));
  EXPECT_EQ(b.blocks[0][0], (Marks{1}));
  EXPECT_EQ(b.blocks[0][1], (Marks{0}));
  EXPECT_EQ(oracle::permuted(expand(b), sigma_perm(2, 3)), oracle::circulant({1, 2}, 6));

  EXPECT_EQ(weight_vector(bdc_assemble(ModularRuler({4, 6, 7, 13}, 20), 4)),
            (std::vector<std::uint32_t>{1, 1, 1, 1}));
  EXPECT_EQ(oracle::multiset(weight_vector(bdc_assemble(singer_ruler(32), 7))),
            (std::multiset<std::uint32_t>{0, 5, 5, 5, 6, 6, 6}));
  EXPECT_THROW(bdc_assemble(ModularRuler({1, 2}, 6), 4), Error);
}

TEST(Bdc, SigmaConjugationAndBlockStructure) {
  std::mt19937_64 rng(23);
  std::vector<ModularRuler> pool;
  for (auto q : {3U, 4U, 5U, 7U, 8U, 9U, 11U, 13U}) {
    pool.push_back(singer_ruler(q));
    pool.push_back(bose_ruler(q));
  }
  for (auto p : {5U, 7U, 11U, 13U, 17U}) pool.push_back(ruzsa_ruler(p));
  for (int it = 0; it < 60; ++it) {
    auto r = pool[rng() % pool.size()];
    const auto units = num::units_mod(r.v);
    r = affine_map(r, units[rng() % units.size()], rng() % r.v);
    const auto divs = num::divisors(r.v);
    const auto t = divs[rng() % divs.size()];
    const auto b = bdc_assemble(r, t);
    ASSERT_EQ(oracle::permuted(expand(b), sigma_perm(t, r.v / t)), circulant_from_ruler(r));
    const auto parts = quotient(r, t);
    for (std::uint32_t i = 0; i < t; ++i)
      for (std::uint32_t j = 0; j < t; ++j) {
        const auto h = (j + t - i) % t;
        Marks expected = parts[h].ruler.marks;
        if (j < i) {
          for (auto& x : expected) x = (x + 1) % b.d;
          std::sort(expected.begin(), expected.end());
        }
        ASSERT_EQ(b.blocks[i][j], expected);
      }
    EXPECT_NO_THROW(weight_matrix(b));
  }
}

TEST(WeightVector, Examples) {
  const auto w = weight_vector(bdc_assemble(bose_ruler(4), 5));
  EXPECT_EQ(oracle::multiset(w), (std::multiset<std::uint32_t>{0, 1, 1, 1, 1}));
  const auto r = singer_ruler(4);
  EXPECT_EQ(weight_vector(bdc_assemble(r, 1)), (std::vector<std::uint32_t>{r.k()}));
  EXPECT_EQ(oracle::multiset(weight_vector(bdc_assemble(bose_ruler(31), 3))), (std::multiset<std::uint32_t>{14, 9, 8}));
}

TEST(Trim, Examples) {
  std::optional<BdcMatrix> found;
  for (std::uint32_t a = 1; a < 21 && !found; ++a)
    for (std::uint32_t b = a + 1; b < 21 && !found; ++b)
      for (std::uint32_t c = b + 1; c < 21 && !found; ++c) {
        const Marks m{0, a, b, c};
        if (!oracle::modular_golomb(m, 21) || quotient_weights(ModularRuler(m, 21), 3) != std::vector<std::uint32_t>{2, 1, 1})
          continue;
        found = bdc_assemble(ModularRuler(m, 21), 3);
      }
  ASSERT_TRUE(found);
  const auto& b = *found;
  const auto tr = trim_uniform(b, {1, 0, 0});
  EXPECT_EQ(weight_vector(tr), (std::vector<std::uint32_t>{1, 1, 1}));
  EXPECT_TRUE(oracle::configuration(expand(tr), 3));
  EXPECT_EQ(expand(trim_uniform(b, {0, 0, 0})), expand(b));
  EXPECT_THROW(trim_uniform(b, {0, 2, 0}), Error);

  const auto s = bdc_assemble(singer_ruler(32), 7);
  const auto w = weight_vector(s);
  std::vector<std::uint32_t> deltas(7);
  for (std::uint32_t h = 0; h < 7; ++h) deltas[h] = w[h] == 6 ? 1 : 0;
  const auto t30 = trim_uniform(s, deltas);
  EXPECT_EQ(t30.row_weight(), 30U);
  EXPECT_TRUE(is_configuration(expand(t30), 30));
}

TEST(SelectBlocks, SingerThirtyTwoSevenClasses) {
  const auto b = bdc_assemble(singer_ruler(32), 7);
  const auto w = weight_vector(b);
  const auto j = best_class(w, 6);
  EXPECT_EQ(w[j], 0U);
  const auto s = select_blocks(b, j, 6);
  EXPECT_EQ(s.v(), 906U);
  EXPECT_EQ(s.row_weight(), 25U);
  EXPECT_TRUE(is_configuration(expand(s), 25));
}

TEST(SelectBlocks, SingleBlock) {
  const auto b = bdc_assemble(bose_ruler(7), 3);
  const auto w = weight_vector(b);
  for (std::uint32_t j = 0; j < 3; ++j) {
    const auto s = select_blocks(b, j, 1);
    EXPECT_EQ(s.row_weight(), w[j]);
    EXPECT_TRUE(is_configuration(expand(s), w[j]));
  }
  EXPECT_THROW(select_blocks(b, 0, 4), Error);
  EXPECT_THROW(select_blocks(b, 0, 0), Error);
}

TEST(SelectBlocks, BoseRowsReproduced) {
  struct Row {
    std::uint32_t q, t, c, v, k;
  };
  for (auto row : {Row{31, 3, 2, 640, 22}, Row{37, 3, 2, 912, 25}, Row{49, 4, 3, 1800, 34}, Row{49, 6, 5, 2000, 36}}) {
    const auto b = bdc_assemble(bose_ruler(row.q), row.t);
    const auto s = select_blocks(b, best_class(weight_vector(b), row.c), row.c);
    EXPECT_EQ(s.v(), row.v) << row.q << "/" << row.t;
    EXPECT_EQ(s.row_weight(), row.k) << row.q << "/" << row.t;
    EXPECT_TRUE(is_configuration(expand(s), row.k));
  }
}

TEST(SelectBlocksAlternating, BoseRowsReproduced) {
  const auto b81 = bdc_assemble(bose_ruler(81), 4);
  std::uint32_t j81 = 0;
  const auto w81 = weight_vector(b81);
  for (std::uint32_t h = 0; h < 4; ++h)
    if (w81[h] > w81[j81]) j81 = h;
  const auto s81 = select_blocks_alternating(b81, j81, 1);
  EXPECT_EQ(s81.v(), 3280U);
  EXPECT_EQ(s81.row_weight(), 45U);
  EXPECT_TRUE(is_configuration(expand(s81), 45));

  const auto b79 = bdc_assemble(bose_ruler(79), 6);
  std::uint32_t bestK = 0;
  for (std::uint32_t j = 0; j < 6; ++j) {
    const auto s = select_blocks_alternating(b79, j, 2);
    bestK = std::max(bestK, s.row_weight());
  }
  EXPECT_EQ(bestK, 50U);
  EXPECT_EQ(b79.d * 4, 4160U);

  EXPECT_THROW(select_blocks_alternating(bdc_assemble(bose_ruler(7), 3), 0, 1), Error);
  EXPECT_THROW(select_blocks_alternating(b81, 0, 3), Error);
}

TEST(SelectBlocksAlternating, FullGridKeepsEverything) {
  const auto b = bdc_assemble(bose_ruler(7), 4);
  const auto w = weight_vector(b);
  for (std::uint32_t j = 0; j < 4; ++j) {
    const auto s = select_blocks_alternating(b, j, 2);
    EXPECT_EQ(s.v(), b.v());
    const auto a = alternating_weights(b, j);
    EXPECT_EQ(s.row_weight(), w[j] + 2 * a.odd + a.even);
    EXPECT_TRUE(is_configuration(expand(s), s.row_weight()));
  }
}

TEST(Koenig, Examples) {
  const auto fano = circulant_from_ruler(ModularRuler({0, 1, 3}, 7));
  const auto dec = koenig_decompose(fano, 3);
  ASSERT_EQ(dec.perms.size(), 3U);
  std::set<std::uint32_t> shifts;
  for (const auto& p : dec.perms) {
    const auto s = (p[0] + 7 - 0) % 7;
    for (std::uint32_t i = 0; i < 7; ++i) ASSERT_EQ(p[i], (i + s) % 7);
    shifts.insert(s);
  }
  EXPECT_EQ(shifts, (std::set<std::uint32_t>{0, 1, 3}));

  IncidenceMatrix perm(5, 5);
  const std::vector<std::uint32_t> p{3, 0, 4, 1, 2};
  for (std::uint32_t i = 0; i < 5; ++i) perm.set(i, p[i]);
  EXPECT_EQ(koenig_decompose(perm, 1).perms.front(), p);

  const auto m26 = extend_many(removal_family(5, 0, true), 5, 1);
  const auto d26 = koenig_decompose(m26, 5);
  IncidenceMatrix sum(26, 26);
  for (const auto& q : d26.perms)
    for (std::uint32_t i = 0; i < 26; ++i) {
      ASSERT_FALSE(sum.get(i, q[i]));
      sum.set(i, q[i]);
    }
  EXPECT_EQ(sum, m26);
  EXPECT_THROW(koenig_decompose(oracle::circulant({0, 1}, 5), 3), Error);
}

TEST(Koenig, SuperpositionOnConstructedMatrices) {
  std::vector<std::pair<IncidenceMatrix, std::uint32_t>> inputs = {
      {circulant_from_ruler(singer_ruler(4)), 5},
      {circulant_from_ruler(bose_ruler(7)), 7},
      {removal_family(7, 2, false), 5},
  };
  const auto sel = expand(select_blocks(bdc_assemble(bose_ruler(9), 4), 0, 3));
  inputs.emplace_back(sel, static_cast<std::uint32_t>(sel.rows[0].count()));
  for (const auto& [m, k] : inputs) {
    const auto dec = koenig_decompose(m, k);
    IncidenceMatrix sum(m.nRows, m.nCols);
    for (const auto& p : dec.perms) {
      std::vector<char> col(m.nCols, 0);
      for (std::uint32_t i = 0; i < m.nRows; ++i) {
        ASSERT_FALSE(col[p[i]]);
        col[p[i]] = 1;
        ASSERT_FALSE(sum.get(i, p[i]));
        sum.set(i, p[i]);
      }
    }
    ASSERT_EQ(sum, m);
  }
}

TEST(RemovePermutations, Examples) {
  const auto fano = circulant_from_ruler(ModularRuler({0, 1, 3}, 7));
  EXPECT_TRUE(oracle::configuration(remove_permutations(fano, 3, 1), 2));
  EXPECT_EQ(remove_permutations(fano, 3, 0), fano);
  EXPECT_TRUE(oracle::configuration(remove_permutations(removal_family(5, 0, true), 5, 2), 3));
  EXPECT_THROW(remove_permutations(fano, 3, 3), Error);
}

TEST(RemovePermutations, EveryDelta) {
  const auto m = circulant_from_ruler(bose_ruler(9));
  for (std::uint32_t delta = 0; delta < 9; ++delta) ASSERT_TRUE(is_configuration(remove_permutations(m, 9, delta), 9 - delta));
}

TEST(StructureE, Examples) {
  auto ag = ag_block_matrix(5, 0, 0);
  EXPECT_TRUE(structure_e_check(ag, 5, 5));
  const auto b = expand(bdc_assemble(ModularRuler({4, 6, 7, 13}, 20), 4));
  EXPECT_TRUE(structure_e_check(b, 4, 5));
  EXPECT_THROW(structure_e_check(circulant_from_ruler(ModularRuler({0, 1, 3}, 7)), 1, 7), Error);
  // Swapping two points from different blocks keeps the configuration but breaks the block pattern.
  for (auto& row : ag.rows) {
    const bool a = row.test(0), b = row.test(5);
    row.assign(0, b);
    row.assign(5, a);
  }
  EXPECT_TRUE(is_configuration(ag, 5));
  EXPECT_FALSE(structure_e_check(ag, 5, 5));
}
