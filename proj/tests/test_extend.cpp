#include <gtest/gtest.h>

#include "configura/construct.hpp"
#include "configura/extend.hpp"
#include "oracles.hpp"

using namespace configura;

namespace {

void expect_disjoint(const ExtensionPlan& plan) {
  std::set<std::uint32_t> rows, cols;
  for (const auto& a : plan.aggregates) {
    for (auto r : a.rows) ASSERT_TRUE(rows.insert(r).second);
    for (auto c : a.cols) ASSERT_TRUE(cols.insert(c).second);
  }
}

// Independent aggregate check: disjoint lines, non-collinear points, permutation critical submatrix.
bool naive_aggregate(const IncidenceMatrix& m, const EAggregate& a) {
  const auto n = a.rows.size();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t w = u + 1; w < n; ++w) {
      for (std::uint32_t j = 0; j < m.nCols; ++j)
        if (m.get(a.rows[u], j) && m.get(a.rows[w], j)) return false;
      for (std::uint32_t i = 0; i < m.nRows; ++i)
        if (m.get(i, a.cols[u]) && m.get(i, a.cols[w])) return false;
    }
  for (std::size_t u = 0; u < n; ++u) {
    std::uint32_t inRow = 0, inCol = 0;
    for (std::size_t w = 0; w < n; ++w) {
      inRow += m.get(a.rows[u], a.cols[w]);
      inCol += m.get(a.rows[w], a.cols[u]);
    }
    if (inRow != 1 || inCol != 1) return false;
  }
  return true;
}

}  // namespace

TEST(FindAggregates, StructureEAffinePlanes) {
  const auto m25 = ag_block_matrix(5, 0, 0);
  const auto p25 = find_e_aggregates(m25, 5, 5);
  EXPECT_EQ(p25.method, "structure-e");
  ASSERT_EQ(p25.aggregates.size(), 5U);
  expect_disjoint(p25);
  for (const auto& a : p25.aggregates) {
    EXPECT_EQ(a.rows.size(), 4U);
    EXPECT_TRUE(naive_aggregate(m25, a));
  }
  const auto m9 = ag_block_matrix(3, 0, 0);
  const auto p9 = find_e_aggregates(m9, 3, 10);
  ASSERT_EQ(p9.aggregates.size(), 3U);
  expect_disjoint(p9);
  for (const auto& a : p9.aggregates) EXPECT_TRUE(naive_aggregate(m9, a));
}

TEST(FindAggregates, FanoHasNone) {
  const auto fano = circulant_from_ruler(ModularRuler({0, 1, 3}, 7));
  const auto plan = find_e_aggregates(fano, 3, 3);
  EXPECT_TRUE(plan.aggregates.empty());
  EXPECT_FALSE(plan.complete);
}

TEST(FindAggregates, GreedyOnNonStructureInput) {
  const auto m = removal_family(7, 1, false);
  const auto plan = find_e_aggregates(m, 6, 4);
  EXPECT_EQ(plan.method, "greedy");
  expect_disjoint(plan);
  for (const auto& a : plan.aggregates) EXPECT_TRUE(naive_aggregate(m, a));
}

TEST(FindAggregates, StructureEGivesAtLeastT) {
  for (auto q : {3U, 4U, 5U, 7U, 8U, 9U})
    for (std::uint32_t s = 0; s <= 2 && s + 2 <= q; ++s) {
      const auto m = ag_block_matrix(q, s, 0);
      const auto k = q - s;
      ASSERT_TRUE(structure_e_check(m, q - s, q));
      const auto plan = find_e_aggregates(m, k, 1000);
      const auto [theta, theta2] = structure_e_capacity(q - s, q, k);
      EXPECT_GE(plan.aggregates.size(), q - s);
      EXPECT_EQ(plan.aggregates.size(), theta);
      expect_disjoint(plan);
      (void)theta2;
    }
}

TEST(ApplyExtension, Examples) {
  const auto m9 = ag_block_matrix(3, 0, 0);
  const auto a9 = find_e_aggregates(m9, 3, 1).aggregates.at(0);
  const auto m10 = apply_extension(m9, 3, a9);
  EXPECT_EQ(m10.nRows, 10U);
  EXPECT_TRUE(oracle::configuration(m10, 3));

  const auto m25 = ag_block_matrix(5, 0, 0);
  const auto m26 = apply_extension(m25, 5, find_e_aggregates(m25, 5, 1).aggregates.at(0));
  EXPECT_TRUE(oracle::configuration(m26, 5));

  EAggregate bad = a9;
  std::swap(bad.pi[0], bad.pi[1]);
  EXPECT_THROW(apply_extension(m9, 3, bad), Error);
}

TEST(ApplyExtension, ClassicalThreeCase) {
  // 9_3 -> 10_3: the new line is the two chosen points plus the new point, and the
  // new point lies on the two chosen (parallel) lines plus the new line.
  const auto m9 = ag_block_matrix(3, 0, 0);
  const auto a = find_e_aggregates(m9, 3, 1).aggregates.at(0);
  ASSERT_TRUE(naive_aggregate(m9, a));
  const auto m10 = apply_extension(m9, 3, a);
  std::vector<std::uint32_t> newLine{a.cols[0], a.cols[1], 9};
  std::sort(newLine.begin(), newLine.end());
  EXPECT_EQ(m10.row_support(9), newLine);
  std::vector<std::uint32_t> newPoint{a.rows[0], a.rows[1], 9};
  std::sort(newPoint.begin(), newPoint.end());
  EXPECT_EQ(m10.column_supports()[9], newPoint);
  for (std::uint32_t u = 0; u < 2; ++u) EXPECT_FALSE(m10.get(a.rows[u], a.cols[a.pi[u]]));
}

TEST(ExtendMany, Examples) {
  const auto m25 = ag_block_matrix(5, 0, 0);
  const auto m31 = extend_many(m25, 5, 6);
  EXPECT_EQ(m31.nRows, 31U);
  EXPECT_TRUE(oracle::configuration(m31, 5));
  EXPECT_EQ(extend_many(m25, 5, 0), m25);
  EXPECT_THROW(extend_many(m25, 5, 7), Error);

  const auto m49 = ag_block_matrix(7, 0, 1);
  const auto m57 = extend_many(m49, 6, 8);
  EXPECT_EQ(m57.nRows, 57U);
  EXPECT_TRUE(oracle::configuration(m57, 6));
}

TEST(ExtendMany, EveryStepValidAndStepwiseEqual) {
  const auto m = ag_block_matrix(7, 1, 0);
  const auto run = extend_run(m, 6, 7);
  EXPECT_EQ(run.recycled, 1U);
  IncidenceMatrix cur = m;
  for (const auto& a : run.applied) {
    cur = apply_extension(cur, 6, a);
    ASSERT_TRUE(is_configuration(cur, 6));
  }
  EXPECT_EQ(cur, run.matrix);
}

TEST(ExtendMany, CapacityMessage) {
  try {
    extend_many(ag_block_matrix(4, 0, 0), 4, 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapacityExceeded);
    EXPECT_NE(std::string(e.what()).find("5"), std::string::npos);
  }
}

TEST(Capacity, Examples) {
  EXPECT_EQ(structure_e_capacity(5, 5, 5), (std::pair<std::uint64_t, std::uint64_t>{5, 1}));
  EXPECT_EQ(structure_e_capacity(3, 3, 3), (std::pair<std::uint64_t, std::uint64_t>{3, 1}));
  // t = q+1, d = q-1 for q = 8: theta = t * floor(d / (k-1)).
  EXPECT_EQ(structure_e_capacity(9, 7, 4).first, 18U);
  EXPECT_EQ(structure_e_capacity(9, 7, 3).first, 27U);
  EXPECT_THROW(structure_e_capacity(2, 5, 3), Error);
  EXPECT_THROW(structure_e_capacity(5, 2, 5), Error);
}

TEST(WeightFamilies, Examples) {
  const auto b4 = bdc_assemble(bose_ruler(4), 5);
  const auto f4 = family_from_weights(b4);
  const auto it = std::find_if(f4.begin(), f4.end(),
                               [](const FamilyEntry& e) { return e.recipe.c == 4 && e.recipe.theta == 5 && e.recipe.delta == 0; });
  ASSERT_NE(it, f4.end());
  EXPECT_EQ(it->v, 17U);
  EXPECT_EQ(it->k, 3U);
  EXPECT_TRUE(oracle::configuration(build_recipe(b4, it->recipe), 3));

  const auto r5 = ruzsa_ruler(5);
  const auto b54 = bdc_assemble(r5, 4);
  WeightRecipe rec{0, 3, 4, 0, false};
  const auto m19 = build_recipe(b54, rec);
  EXPECT_EQ(m19.nRows, 19U);
  EXPECT_TRUE(oracle::configuration(m19, 3));

  const auto b55 = bdc_assemble(r5, 5);
  const auto f55 = family_from_weights(b55);
  const auto e12 = std::find_if(f55.begin(), f55.end(), [](const FamilyEntry& e) {
    return e.recipe.c == 3 && e.recipe.theta == 0 && e.recipe.delta == 0;
  });
  ASSERT_NE(e12, f55.end());
  EXPECT_EQ(e12->v, 12U);
  EXPECT_EQ(e12->k, 2U);
  EXPECT_TRUE(oracle::configuration(build_recipe(b55, e12->recipe), 2));

  EXPECT_THROW(family_from_weights(bdc_assemble(bose_ruler(7), 3)), Error);
}

TEST(WeightFamilies, EveryEntryBuilds) {
  for (const auto& b : {bdc_assemble(bose_ruler(4), 5), bdc_assemble(ruzsa_ruler(5), 4), bdc_assemble(bose_ruler(5), 6),
                        bdc_assemble(ruzsa_ruler(7), 6)})
    for (const auto& e : family_from_weights(b)) {
      const auto m = build_recipe(b, e.recipe);
      ASSERT_EQ(m.nRows, e.v);
      ASSERT_TRUE(is_configuration(m, e.k)) << e.v << "_" << e.k;
    }
}

TEST(WeightFamilies, BinaryBdcAdmitsTPlusOneExtensions) {
  for (const auto& b : {bdc_assemble(ruzsa_ruler(5), 4), bdc_assemble(ruzsa_ruler(7), 6), bdc_assemble(bose_ruler(4), 5),
                        bdc_assemble(bose_ruler(8), 9)}) {
    const auto m = expand(b);
    const auto k = b.row_weight();
    const auto out = extend_many(m, k, b.t + 1);
    EXPECT_EQ(out.nRows, m.nRows + b.t + 1);
    EXPECT_TRUE(is_configuration(out, k));
  }
}

TEST(AgFamily, Examples) {
  const auto a = extension_family_ag(5, 0, 1, 3);
  EXPECT_EQ(a.nRows, 28U);
  EXPECT_TRUE(oracle::configuration(a, 4));
  const auto b = extension_family_ag(4, 1, 0, 0);
  EXPECT_EQ(b.nRows, 12U);
  EXPECT_TRUE(oracle::configuration(b, 3));
  const auto c = extension_family_ag(7, 2, 0, 6);
  EXPECT_EQ(c.nRows, 41U);
  EXPECT_TRUE(oracle::configuration(c, 5));
  EXPECT_THROW(extension_family_ag(5, 0, 5, 0), Error);
  EXPECT_THROW(extension_family_ag(5, 0, 0, 7), Error);
}

TEST(AgFamily, GridMatchesParameterFormula) {
  for (auto q : {3U, 4U, 5U, 7U})
    for (std::uint32_t s = 0; s <= 2 && s + 2 < q; ++s)
      for (std::uint32_t delta = 0; delta <= 1 && q - s - delta >= 2; ++delta)
        for (std::uint32_t theta = 0; theta <= q - s + 1; ++theta) {
          const auto m = extension_family_ag(q, s, delta, theta);
          ASSERT_EQ(m.nRows, q * q - q * s + theta);
          ASSERT_TRUE(is_configuration(m, q - s - delta));
        }
}
