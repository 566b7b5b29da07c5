#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <thread>

#include "doctest.h"
#include "json.hpp"
#include "mrd/catalog.hpp"
#include "mrd/classifier.hpp"
#include "mrd/spread.hpp"
#include "oracle.hpp"

using namespace mrd;

namespace {

std::vector<MatrixGF> all_matrices(int q, int m, int n) {
  std::vector<MatrixGF> out;
  std::uint64_t total = 1;
  for (int i = 0; i < m * n; ++i) total *= static_cast<std::uint64_t>(q);
  for (std::uint64_t v = 0; v < total; ++v) {
    MatrixGF a(q, m, n);
    std::uint64_t x = v;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        a = a.with_entry(i, j, static_cast<int>(x % q));
        x /= q;
      }
    out.push_back(a);
  }
  return out;
}

AdditiveCode plus(const AdditiveCode& c, const MatrixGF& x) {
  auto b = c.basis();
  b.push_back(x);
  return AdditiveCode::from_basis(b);
}

// Matrices X outside C with rank(X + c) >= d for every c in C, by brute force.
std::vector<MatrixGF> valid_extensions(const AdditiveCode& c, int d) {
  std::vector<MatrixGF> out;
  const auto words = codewords(c);
  for (const auto& x : all_matrices(c.q(), c.rows(), c.cols())) {
    if (c.contains(x)) continue;
    bool ok = true;
    for (const auto& w : words)
      if (oracle::rank(oracle::dense(x + w), c.q()) < d) {
        ok = false;
        break;
      }
    if (ok) out.push_back(x);
  }
  return out;
}

std::vector<std::string> stamps(const std::vector<AdditiveCode>& codes) {
  std::vector<std::string> s;
  for (const auto& c : codes) s.push_back(c.canonical_bytes());
  return s;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("mrd_test_" + name)).string();
}

}  // namespace

TEST_CASE("low-rank matrices match brute force") {
  for (auto [q, m, n, d] : {std::tuple{2, 2, 3, 2}, {2, 3, 3, 3}, {3, 2, 2, 2}, {3, 2, 3, 2}}) {
    std::size_t expect = 0;
    for (const auto& a : all_matrices(q, m, n)) {
      const int r = oracle::rank(oracle::dense(a), q);
      expect += r > 0 && r < d;
    }
    CHECK(low_rank_matrices(q, m, n, d).size() == expect);
  }
}

TEST_CASE("search frontier agrees with brute force") {
  const auto f8 = field_spread_set(2, 3).spread_set;
  const AdditiveCode small3 = AdditiveCode::from_basis({MatrixGF(3, 2, 3).with_entry(0, 0, 1).with_entry(1, 1, 1)});
  for (const auto& [c, d] : {std::pair{f8, 2}, {small3, 2}, {f8, 3}}) {
    const auto node = SearchNode::root(c, d, c.dim() + 1);
    const auto valid = valid_extensions(c, d);
    const std::size_t per_line = static_cast<std::size_t>(c.size()) * static_cast<std::size_t>(c.q() - 1);
    CHECK(node.frontier.size() * per_line == valid.size());
    CHECK(std::is_sorted(node.frontier.begin(), node.frontier.end()));
    for (const auto& x : node.frontier) {
      CHECK_FALSE(c.contains(x));
      CHECK(std::any_of(valid.begin(), valid.end(), [&](const MatrixGF& v) { return v.bits() == x; }));
    }
  }
}

TEST_CASE("child frontier equals the frontier computed from scratch") {
  const auto f8 = field_spread_set(2, 3).spread_set;
  const auto root = SearchNode::root(f8, 2, 6);
  REQUIRE(!root.frontier.empty());
  for (std::size_t i = 0; i < root.frontier.size(); i += 7) {
    const auto child = root.child(root.frontier[i]);
    const auto direct = SearchNode::root(plus(f8, f8.matrix(root.frontier[i])), 2, 6);
    CHECK(child.code == direct.code);
    CHECK(child.frontier == direct.frontier);
    CHECK(child.stamp == direct.code.canonical_bytes());
  }
}

TEST_CASE("extension class counts match brute-force enumeration") {
  const auto f8 = field_spread_set(2, 3).spread_set;
  const auto valid = valid_extensions(f8, 2);
  // every code of dimension 5 containing the field spread set with d >= 2
  std::set<std::string> seen;
  std::vector<AdditiveCode> dim4, dim5;
  for (const auto& x : valid) {
    const auto c4 = plus(f8, x);
    if (seen.insert(c4.canonical_bytes()).second) dim4.push_back(c4);
  }
  for (const auto& c4 : dim4)
    for (const auto& y : valid) {
      if (c4.contains(y)) continue;
      const auto c5 = plus(c4, y);
      if (!seen.insert(c5.canonical_bytes()).second) continue;
      if (minimum_distance_by_enumeration(c5) >= 2) dim5.push_back(c5);
    }
  const auto cls4 = classify_up_to_equivalence(dim4).classes.size();
  const auto cls5 = classify_up_to_equivalence(dim5).classes.size();
  CHECK(extend_code(f8, 2, 4).size() == cls4);
  CHECK(extend_code(f8, 2, 5).size() == cls5);
  const auto res = extend_codes({f8}, 2, 6);
  REQUIRE(res.levels.size() == 4);
  CHECK(res.levels[1].classes.size() == cls4);
  CHECK(res.levels[2].classes.size() == cls5);
  for (const auto& lv : res.levels)
    for (const auto& c : lv.classes) {
      CHECK(c.dim() == lv.dim);
      CHECK(minimum_distance_by_enumeration(c) >= 2);
    }
}

TEST_CASE("extension to the own dimension returns the code") {
  const auto f16 = field_spread_set(2, 4).spread_set;
  const auto out = extend_code(f16, 4, 4);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == f16);
}

TEST_CASE("binary field spread set of order 32 extends to two d = 4 classes") {
  const auto f32 = field_spread_set(2, 5).spread_set;
  const auto out = extend_code(f32, 4, 10);
  CHECK(out.size() == 2);
  for (const auto& c : out) CHECK(is_mrd(c).mrd);
  CHECK_FALSE(are_equivalent(out[0], out[1]).has_value());
}

TEST_CASE("exactly one order-32 seed has no 6-dimensional extension") {
  const auto seeds = presemifields(load_catalog(bundled_catalog_path(2, 5)));
  REQUIRE(seeds.size() == 6);
  std::multiset<std::size_t> counts;
  ExtensionOptions opt;
  opt.allow_transpose = false;
  for (const auto& s : seeds) counts.insert(extend_code(s.spread_set, 4, 6, opt).size());
  CHECK(counts == std::multiset<std::size_t>{0, 4, 5, 5, 5, 5});
}

TEST_CASE("jump extensions agree with level-wise search") {
  for (const auto& s : presemifields(load_catalog(bundled_catalog_path(2, 4)))) {
    const auto jumped = jump_extensions(s.spread_set, 3, 8);
    const auto levelled = extend_code(s.spread_set, 3, 8);
    std::vector<AdditiveCode> all = jumped;
    all.insert(all.end(), levelled.begin(), levelled.end());
    const auto merged = classify_up_to_equivalence(all).classes.size();
    CHECK(merged == levelled.size());
    CHECK((jumped.empty() == levelled.empty()));
  }
}

TEST_CASE("search is independent of seed order and thread count") {
  auto seeds = presemifields(load_catalog(bundled_catalog_path(2, 4)));
  std::vector<AdditiveCode> codes;
  for (const auto& s : seeds) codes.push_back(s.spread_set);
  const auto base = extend_codes(codes, 3, 8);
  std::mt19937_64 rng(7);
  for (int threads : {1, 2, 3}) {
    std::shuffle(codes.begin(), codes.end(), rng);
    ExtensionOptions opt;
    opt.threads = threads;
    const auto again = extend_codes(codes, 3, 8, opt);
    REQUIRE(again.levels.size() == base.levels.size());
    for (std::size_t i = 0; i < base.levels.size(); ++i)
      CHECK(stamps(again.levels[i].classes) == stamps(base.levels[i].classes));
  }
  CHECK(base.levels.back().classes.size() == 1);
}

TEST_CASE("checkpoint resume reproduces the search") {
  const auto f32 = field_spread_set(2, 5).spread_set;
  const std::string path = temp_path("extend.ckpt");
  std::remove(path.c_str());
  ExtensionOptions opt;
  opt.allow_transpose = false;
  opt.checkpoint_path = path;
  const auto full = extend_codes({f32}, 4, 8, opt);
  REQUIRE(std::filesystem::exists(path));
  // cut the checkpoint back to its first two levels
  nlohmann::json j;
  {
    std::ifstream in(path);
    in >> j;
  }
  while (j["levels"].size() > 2) j["levels"].erase(j["levels"].size() - 1);
  {
    std::ofstream out(path);
    out << j.dump();
  }
  opt.resume = true;
  const auto resumed = extend_codes({f32}, 4, 8, opt);
  REQUIRE(resumed.levels.size() == full.levels.size());
  for (std::size_t i = 0; i < full.levels.size(); ++i)
    CHECK(stamps(resumed.levels[i].classes) == stamps(full.levels[i].classes));
  CHECK(resumed.stats.nodes < full.stats.nodes);
  // a checkpoint for different parameters is refused
  CHECK_THROWS(extend_codes({f32}, 4, 9, opt));
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS(extend_codes({f32}, 4, 8, opt));
  std::remove(path.c_str());
}

TEST_CASE("exhausted budget stops the search") {
  const auto f32 = field_spread_set(2, 5).spread_set;
  ExtensionOptions opt;
  opt.budget = Budget(std::chrono::milliseconds(1));
  std::this_thread::sleep_for(std::chrono::milliseconds(5));
  const auto res = extend_codes({f32}, 4, 10, opt);
  CHECK_FALSE(res.complete);
  CHECK_THROWS_AS(extend_code(f32, 4, 10, opt), BudgetExceeded);
}

TEST_CASE("seeds below the distance are rejected") {
  const auto dg = delsarte_gabidulin(2, 4, 2);
  CHECK_THROWS_AS(extend_code(dg, 4, 9), std::invalid_argument);
}

TEST_CASE("tensor correspondence") {
  const auto f8 = field_spread_set(2, 3).spread_set;
  const auto t = tensorize(f8);
  CHECK(t.dim() == 3);
  CHECK(are_equivalent(detensorize(t, 3), f8).has_value());
  CHECK(are_equivalent(t, f8).has_value());

  const auto classes = classify_rectangular(2, 3, 4).classes;
  REQUIRE(classes.size() == 7);
  std::vector<AdditiveCode> images;
  for (const auto& r : classes) {
    const auto& c = r.representative;
    CHECK(c.rows() == 3);
    CHECK(c.cols() == 4);
    CHECK(c.dim() == 4);
    CHECK(r.mrd);
    CHECK(r.d == 3);
    const auto s = tensorize(c);
    CHECK(s.rows() == 4);
    CHECK(s.dim() == 3);
    CHECK(rank_distribution(s).at(4) == s.size() - 1);
    EquivalenceOptions eo;
    eo.allow_transpose = false;
    CHECK(are_equivalent(detensorize(s, 3), c, eo).has_value());
    images.push_back(s);
  }
  EquivalenceOptions eo;
  eo.allow_transpose = false;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j) CHECK_FALSE(are_equivalent(images[i], images[j], eo));
}

TEST_CASE("small rectangular classifications") {
  CHECK(classify_rectangular(2, 2, 3).classes.size() == 1);
  CHECK(classify_rectangular(3, 2, 3).classes.size() == 1);
  const auto wide = classify_rectangular(2, 3, 2);
  REQUIRE(wide.classes.size() == 1);
  CHECK(wide.classes[0].representative.rows() == 3);
}

TEST_CASE("small semifield classifications") {
  CHECK(classify_semifields(2, 2).equivalence.classes.size() == 1);
  CHECK(classify_semifields(3, 2).equivalence.classes.size() == 1);
  CHECK(classify_semifields(2, 3).equivalence.classes.size() == 1);
  const auto s16 = classify_semifields(2, 4);
  CHECK(s16.isotopy_classes.size() == 3);
  CHECK(s16.equivalence.classes.size() == 3);
  for (const auto& r : s16.equivalence.classes) CHECK(is_mrd(r.representative).mrd);
  CHECK_THROWS(classify_semifields(2, 6));
}

TEST_CASE("binary d = n - 1 classification at n = 4") {
  const auto seeds = presemifields(load_catalog(bundled_catalog_path(2, 4)));
  const auto c = classify_dminus1(2, 4, seeds);
  REQUIRE(c.classes.size() == 1);
  CHECK(c.complete);
  const auto& rep = c.classes[0].representative;
  CHECK(rank_distribution(rep).at(3) == 225);
  CHECK(rank_distribution(rep).at(4) == 30);
  const auto [a, b] = decompose_as_two_presemifields(rep);
  CHECK(a.spread_set.space().intersect(b.spread_set.space()).dim() == 0);
  CHECK(c.classes[0].contained_seeds.size() >= 1);
}

TEST_CASE("d = n - 1 classification refuses completeness for a partial catalog") {
  auto seeds = presemifields(load_catalog(bundled_catalog_path(2, 4)));
  seeds.pop_back();
  const auto c = classify_dminus1(2, 4, seeds);
  CHECK_FALSE(c.complete);
  CHECK_FALSE(c.note.empty());
}

TEST_CASE("quasi-MRD census for binary 4 x 4, d = 3") {
  const auto seeds = presemifields(load_catalog(bundled_catalog_path(2, 4)));
  const auto census = quasi_mrd_census(2, 4, 3, seeds);
  REQUIRE(census.rows.size() == 5);
  CHECK(census.rows.front().dim == 4);
  CHECK(census.rows.front().classes == 3);
  CHECK(census.rows.back().dim == 8);
  CHECK(census.rows.back().classes >= 1);
  for (const auto& r : census.rows) {
    CHECK(r.complete);
    for (const auto& k : r.containing)
      if (k) CHECK(*k <= r.classes);
  }
}
