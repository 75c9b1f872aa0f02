#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "configura/spectrum.hpp"
#include "oracles.hpp"

using namespace configura;

namespace {

Witness singer_affine_retest_chain() {
  Witness w{35, 6, true, "example", json::array()};
  w.chain.push_back({{"op", "singer"}, {"q", 5}});
  w.chain.push_back({{"op", "ruler"}, {"v", 31}, {"marks", {0, 1, 4, 10, 12, 17}}});
  w.chain.push_back({{"op", "affine"}, {"m", 19}, {"b", 0}});
  w.chain.push_back({{"op", "retest"}, {"v", 35}});
  return w;
}

bool contains(const std::map<std::uint32_t, Witness>& m, std::initializer_list<std::uint32_t> vs) {
  for (auto v : vs)
    if (!m.count(v)) return false;
  return true;
}

}  // namespace

TEST(Witness, ExampleChainVerifies) {
  const auto w = singer_affine_retest_chain();
  EXPECT_TRUE(verify_witness(w).ok);
  const auto st = replay(w);
  ASSERT_TRUE(st.ruler);
  EXPECT_EQ(st.ruler->marks, (Marks{0, 4, 11, 13, 14, 19}));
}

TEST(Witness, TamperedChainFails) {
  auto w = singer_affine_retest_chain();
  w.chain[3]["v"] = 34;
  w.v = 34;
  const auto res = verify_witness(w);
  EXPECT_FALSE(res.ok);
  EXPECT_NE(res.message.find("step 3"), std::string::npos);

  auto w2 = singer_affine_retest_chain();
  w2.v = 36;
  EXPECT_FALSE(verify_witness(w2).ok);
  auto w3 = singer_affine_retest_chain();
  w3.chain[0]["op"] = "nonsense";
  EXPECT_THROW(replay(w3), Error);
}

TEST(Witness, JsonRoundTrip) {
  const auto w = singer_affine_retest_chain();
  const auto back = witness_from_json(json::parse(witness_to_json(w).dump()));
  EXPECT_EQ(back.v, w.v);
  EXPECT_EQ(back.k, w.k);
  EXPECT_EQ(back.cyclic, w.cyclic);
  EXPECT_EQ(back.chain, w.chain);
  EXPECT_THROW(witness_from_json(json{{"v", 1}}), Error);
}

TEST(Witness, MatrixChains) {
  Witness a{31, 5, false, "t", json::array({{{"op", "ag_extension"}, {"q", 5}, {"s", 0}, {"delta", 0}, {"theta", 6}}})};
  EXPECT_TRUE(verify_witness(a).ok);
  Witness b{25, 3, false, "t",
            json::array({{{"op", "removal_family"}, {"q", 5}, {"s", 0}, {"on", true}},
                         {{"op", "remove_permutations"}, {"k", 5}, {"delta", 2}}})};
  EXPECT_TRUE(verify_witness(b).ok);
  Witness c{63, 6, false, "t", json::array({{{"op", "construction_a"}, {"q", 9}, {"set", "hermitian-complement"}, {"k", 6}}})};
  EXPECT_TRUE(verify_witness(c).ok);
  Witness d{17, 3, false, "t",
            json::array({{{"op", "bose"}, {"q", 4}},
                         {{"op", "bdc"}, {"t", 5}},
                         {{"op", "recipe"}, {"j", 0}, {"c", 4}, {"theta", 5}, {"delta", 0}, {"zero", true}}})};
  // j must name the weight-0 class; find it.
  const auto w = quotient_weights(bose_ruler(4), 5);
  d.chain[2]["j"] = static_cast<std::uint32_t>(std::find(w.begin(), w.end(), 0U) - w.begin());
  EXPECT_TRUE(verify_witness(d).ok);
}

TEST(Registry, Facts) {
  const KnownFacts facts;
  EXPECT_TRUE(facts.forbids(22, 5, true));
  EXPECT_TRUE(facts.forbids(22, 5, false));
  EXPECT_TRUE(facts.forbids(34, 6, true));
  EXPECT_FALSE(facts.forbids(34, 6, false));
  EXPECT_FALSE(facts.forbids(35, 6, true));
  Witness bad{22, 5, false, "t", json::array()};
  EXPECT_THROW(facts.check(bad), Error);
}

TEST(Registry, DeficiencyOnePredicate) {
  EXPECT_TRUE(deficiency_one_nonexistence(7));
  EXPECT_FALSE(deficiency_one_nonexistence(11));
  EXPECT_FALSE(deficiency_one_nonexistence(4));
  EXPECT_TRUE(deficiency_one_nonexistence(5));
  EXPECT_TRUE(deficiency_one_nonexistence(10));
  EXPECT_TRUE(deficiency_one_nonexistence(12));
  EXPECT_FALSE(deficiency_one_nonexistence(16));
  EXPECT_FALSE(deficiency_one_nonexistence(18));
}

TEST(Registry, PredicateAgreesWithOracleWhereReachable) {
  // (k^2-k+2)_k cyclic, k = 3..6: the predicate's range must never be contradicted by a search.
  for (std::uint32_t k = 5; k <= 6; ++k)
    EXPECT_EQ(oracle_exists(k * k - k + 2, k, 200'000'000).outcome, OracleOutcome::NotExists);
}

TEST(BaseRulers, Examples) {
  const auto b6 = base_rulers(6);
  bool singer5 = false, bose7 = false;
  for (const auto& b : b6) {
    ASSERT_EQ(b.ruler.k(), 6U);
    ASSERT_TRUE(oracle::modular_golomb(b.ruler.marks, b.ruler.v));
    singer5 = singer5 || b.ruler.v == 31;
    bose7 = bose7 || b.ruler.v == 48;
  }
  EXPECT_TRUE(singer5);
  EXPECT_TRUE(bose7);

  std::set<std::uint32_t> v3;
  for (const auto& b : base_rulers(3)) {
    EXPECT_EQ(b.ruler.k(), 3U);
    v3.insert(b.ruler.v);
  }
  EXPECT_TRUE(v3.count(7));
  EXPECT_TRUE(v3.count(8));
  EXPECT_FALSE(v3.count(6));

  bool bose16 = false;
  for (const auto& b : base_rulers(16)) bose16 = bose16 || (b.ruler.v == 255 && b.ruler.k() == 16);
  EXPECT_TRUE(bose16);
}

TEST(BaseRulers, ChainsReplay) {
  for (const auto& b : base_rulers(7)) {
    Witness w{b.ruler.v, 7, true, "base", b.chain};
    ASSERT_TRUE(verify_witness(w).ok) << b.chain.dump();
  }
}

TEST(CyclicScan, SmallK) {
  auto r6 = make_record(6);
  cyclic_scan(r6);
  EXPECT_TRUE(contains(r6.cyclic, {31}));
  for (std::uint32_t v : {32U, 33U, 34U}) EXPECT_FALSE(r6.cyclic.count(v));
  EXPECT_EQ(ec_upper_bound(r6), 35U);

  auto r7 = make_record(7);
  cyclic_scan(r7);
  EXPECT_TRUE(contains(r7.cyclic, {48, 49, 50}));
  EXPECT_EQ(ec_upper_bound(r7), 48U);
  for (const auto& [v, w] : r7.cyclic) ASSERT_TRUE(verify_witness(w).ok) << v;
}

TEST(CyclicScan, MatchesOracleForK5AndK6) {
  for (std::uint32_t k = 3; k <= 6; ++k) {
    auto rec = make_record(k);
    ScanOptions opt;
    opt.oracleBudget = 500'000'000;
    cyclic_scan(rec, opt);
    for (std::uint32_t v = rec.P; v < rec.G; ++v)
      ASSERT_EQ(rec.cyclic.count(v) == 1, oracle::cyclic_exists(v, k)) << v << "_" << k;
  }
}

TEST(Bounds, NotPopulatedAndMonotone) {
  auto rec = make_record(6);
  EXPECT_THROW(ec_upper_bound(rec), Error);
  rec.cyclicPopulatedTo = rec.G - 1;
  EXPECT_EQ(ec_upper_bound(rec), rec.G);
  const KnownFacts facts;
  auto prev = ec_upper_bound(rec);
  for (std::uint32_t v : {31U, 35U}) {
    Witness w{v, 6, true, "t", json::array({{{"op", "ruler"}, {"v", v}, {"marks", {0, 4, 11, 13, 14, 19}}}})};
    record_witness(rec, w, facts);
    const auto now = ec_upper_bound(rec);
    EXPECT_LE(now, prev);
    prev = now;
  }
  EXPECT_EQ(prev, 35U);
  EXPECT_EQ(gaps(rec, true), (std::vector<std::uint32_t>{32, 33, 34}));
}

TEST(RecordWitness, KeepsShortestChainAndSubset) {
  auto rec = make_record(6);
  const KnownFacts facts;
  Witness longer{31, 6, true, "t",
                 json::array({{{"op", "singer"}, {"q", 5}}, {{"op", "affine"}, {"m", 2}, {"b", 0}}})};
  Witness shorter{31, 6, true, "t", json::array({{{"op", "ruler"}, {"v", 31}, {"marks", {0, 4, 11, 13, 14, 19}}}})};
  EXPECT_TRUE(record_witness(rec, longer, facts));
  EXPECT_FALSE(record_witness(rec, shorter, facts));
  EXPECT_EQ(rec.cyclic.at(31).chain.size(), 1U);
  EXPECT_EQ(rec.any.at(31).chain.size(), 1U);
  // v = G(6) = 35 lies outside the stored range.
  EXPECT_FALSE(record_witness(rec, singer_affine_retest_chain(), facts));
  for (const auto& [v, w] : rec.cyclic) EXPECT_TRUE(rec.any.count(v));
  Witness bad{34, 6, true, "t", json::array()};
  EXPECT_THROW(record_witness(rec, bad, facts), Error);
}

TEST(NoncyclicScan, K5AndK8) {
  auto r5 = make_record(5);
  cyclic_scan(r5);
  noncyclic_scan(r5);
  EXPECT_TRUE(contains(r5.any, {21}));
  EXPECT_FALSE(r5.any.count(22));
  for (const auto& [v, w] : r5.cyclic) EXPECT_TRUE(r5.any.count(v));

  auto r8 = make_record(8);
  cyclic_scan(r8);
  noncyclic_scan(r8);
  EXPECT_TRUE(contains(r8.any, {57, 63, 64, 65, 66, 67, 68}));
  for (const auto& [v, w] : r8.any) ASSERT_TRUE(verify_witness(w).ok) << v;
}

TEST(Database, SaveLoadReplay) {
  auto rec = make_record(6);
  cyclic_scan(rec);
  noncyclic_scan(rec);
  const auto path = (std::filesystem::temp_directory_path() / "configura_test_db.jsonl").string();
  save_db(path, {rec});
  const auto back = load_db(path);
  // Cyclic witnesses also stand for the any-configuration entry of the same v.
  std::size_t expected = rec.cyclic.size();
  for (const auto& [v, w] : rec.any) expected += !w.cyclic;
  EXPECT_EQ(back.size(), expected);
  for (const auto& w : back) ASSERT_TRUE(verify_witness(w).ok);
  std::remove(path.c_str());
}

TEST(Tables, FormatsAndIntervals) {
  EXPECT_EQ(format_intervals({31, 35, 36, 37, 40}), "31,35-37,40");
  EXPECT_EQ(format_intervals({}), "");
  auto rec = make_record(6);
  cyclic_scan(rec);
  const auto csv = emit_tables({rec}, TableFormat::Csv);
  EXPECT_NE(csv.find("35"), std::string::npos);
  const auto js = json::parse(emit_tables({rec}, TableFormat::Json));
  EXPECT_EQ(js.at(0).at("k"), 6);
  const auto md = emit_tables({rec}, parse_table_format("md"));
  EXPECT_EQ(md.rfind("|", 0), 0U);
  EXPECT_THROW(parse_table_format("xml"), Error);
}

TEST(Compare, SmallKMatchesReference) {
  std::vector<SpectrumRecord> recs;
  for (std::uint32_t k = 2; k <= 7; ++k) {
    auto r = make_record(k);
    ScanOptions opt;
    opt.oracleBudget = 500'000'000;
    cyclic_scan(r, opt);
    recs.push_back(r);
  }
  const auto rep = compare_reference(recs);
  EXPECT_EQ(rep.count(DiffKind::RegistryConflict), 0U);
  EXPECT_EQ(rep.count(DiffKind::MissingWitness), 0U) << format_report(rep);
  EXPECT_EQ(rep.count(DiffKind::ExtraWitness), 0U) << format_report(rep);
}

TEST(Parallel, WorkerCountIndependent) {
  auto a = make_record(9), b = make_record(9);
  ScanOptions one, many;
  one.threads = 1;
  many.threads = 4;
  cyclic_scan(a, one);
  cyclic_scan(b, many);
  EXPECT_EQ(keys(a.cyclic), keys(b.cyclic));
  for (const auto& [v, w] : a.cyclic) EXPECT_EQ(w.chain, b.cyclic.at(v).chain);
}
