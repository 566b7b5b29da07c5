#include <cmath>
#include <random>

#include "doctest.h"
#include "mrd/constructions.hpp"
#include "mrd/equivalence.hpp"
#include "oracle.hpp"

using namespace mrd;

namespace {

MatrixGF random_invertible(std::mt19937_64& rng, int q, int n) {
  while (true) {
    auto m = oracle::random_matrix(rng, q, n, n);
    if (is_invertible(m)) return m;
  }
}

AdditiveCode random_image(std::mt19937_64& rng, const AdditiveCode& c, bool allow_transpose) {
  AdditiveCode x = (allow_transpose && rng() % 2) ? transpose(c) : c;
  return transform(x, random_invertible(rng, c.q(), x.rows()), random_invertible(rng, c.q(), x.cols()));
}

// Brute-force idealiser order: count A with A X in C for the basis.
std::uint64_t brute_left_idealiser(const AdditiveCode& c) {
  const int q = c.q(), n = c.rows();
  std::uint64_t count = 0;
  const auto total = static_cast<std::uint64_t>(std::pow(q, n * n) + 0.5);
  for (std::uint64_t v = 0; v < total; ++v) {
    PackedVec a;
    std::uint64_t x = v;
    for (int i = 0; i < n * n; ++i) {
      a.set_digit(i, static_cast<int>(x % q));
      x /= q;
    }
    bool ok = true;
    for (const auto& b : c.space().basis())
      if (!c.contains(packed_mul(q, n, n, n, a, b))) {
        ok = false;
        break;
      }
    count += ok;
  }
  return count;
}

}  // namespace

TEST_CASE("idealisers") {
  const auto f16 = field_spread_set(2, 4).spread_set;
  CHECK(left_idealiser(f16).order == 16);
  CHECK(right_idealiser(f16).order == 16);
  const auto dg = delsarte_gabidulin(2, 4, 2);
  CHECK(left_idealiser(dg).order == brute_left_idealiser(dg));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<MatrixGF> b;
    for (int i = 0; i < 3; ++i) b.push_back(oracle::random_matrix(rng, 2, 3, 3));
    b.push_back(MatrixGF::identity(2, 3));
    const auto c = AdditiveCode::from_basis(b);
    const auto li = left_idealiser(c);
    CHECK(li.order == brute_left_idealiser(c));
    // ring check
    for (const auto& x : li.basis)
      for (const auto& y : li.basis) {
        for (const auto& z : c.basis()) CHECK(c.contains(x * y * z));
      }
    CHECK(right_idealiser(transpose(c)).order == li.order);
  }
}

TEST_CASE("automorphism group orders") {
  CHECK(automorphism_group(AdditiveCode::full(2, 2, 2)).order == 36);
  CHECK(gl_order(4, 3) == 24261120);
  // C(F_16): pairs (A, B) = 15 * 15 field multiplications times 4 Frobenius powers
  const auto f16 = field_spread_set(2, 4).spread_set;
  const auto g = automorphism_group(f16);
  CHECK(g.order == 900);
  CHECK(g.complete);
  for (const auto& a : g.generators) CHECK(transform(f16, a.a, a.b) == f16);
  const auto dg = delsarte_gabidulin(3, 4, 2);
  const auto ag = automorphism_group(dg);
  CHECK(ag.order == 25600);
  CHECK((gl_order(4, 3) * gl_order(4, 3)) % ag.order == 0);
  for (const auto& a : ag.generators) CHECK(transform(dg, a.a, a.b) == dg);
  // rectangular code without invertible elements
  const auto r = AdditiveCode::full(2, 2, 3);
  CHECK(automorphism_group(r).order == gl_order(2, 2) * gl_order(3, 2));
}

TEST_CASE("equivalence witnesses") {
  std::mt19937_64 rng(17);
  const auto dg = delsarte_gabidulin(2, 4, 2);
  auto w = are_equivalent(dg, dg);
  REQUIRE(w.has_value());
  CHECK(apply_witness(dg, *w) == dg);
  for (int trial = 0; trial < 10; ++trial) {
    const auto img = random_image(rng, dg, true);
    w = are_equivalent(img, dg);
    REQUIRE(w.has_value());
    CHECK(apply_witness(dg, *w) == img);
    w = are_equivalent(dg, img);
    REQUIRE(w.has_value());
  }
  const auto tz = trombetti_zhou(3, 4, 2, 1, first_nonsquare_norm_element(FieldCtx(3, 1, 4)));
  const auto img = random_image(rng, tz, true);
  w = are_equivalent(img, tz);
  REQUIRE(w.has_value());
  CHECK(apply_witness(tz, *w) == img);
  CHECK(!are_equivalent(tz, delsarte_gabidulin(3, 4, 2)).has_value());
  // rectangular codes
  std::vector<MatrixGF> b;
  for (int i = 0; i < 4; ++i) b.push_back(oracle::random_matrix(rng, 2, 3, 4));
  const auto rc = AdditiveCode::from_basis(b);
  const auto rimg = random_image(rng, rc, false);
  w = are_equivalent(rimg, rc);
  REQUIRE(w.has_value());
  CHECK(apply_witness(rc, *w) == rimg);
  w = are_equivalent(transpose(rimg), rc);
  REQUIRE(w.has_value());
  CHECK(w->transposed);
  CHECK(apply_witness(rc, *w) == transpose(rimg));
}

TEST_CASE("fingerprints are invariant") {
  std::mt19937_64 rng(23);
  const FieldCtx f(3, 1, 4);
  const auto tg = twisted_gabidulin(3, 4, 2, 1, first_nonsquare_norm_element(f), 0);
  const auto fp = fingerprint(tg);
  for (int trial = 0; trial < 3; ++trial) CHECK(fingerprint(random_image(rng, tg, true)) == fp);
  CHECK(!(fingerprint(delsarte_gabidulin(3, 4, 2)) == fp));
}

TEST_CASE("classification of random images collapses to one class") {
  std::mt19937_64 rng(29);
  const auto dg = delsarte_gabidulin(2, 4, 2);
  std::vector<AdditiveCode> codes;
  for (int i = 0; i < 6; ++i) codes.push_back(random_image(rng, dg, true));
  codes.push_back(field_spread_set(2, 4).spread_set);
  const auto rep = classify_up_to_equivalence(codes);
  CHECK(rep.classes.size() == 2);
  std::vector<AdditiveCode> shuffled(codes.rbegin(), codes.rend());
  ClassifyOptions opt;
  opt.threads = 3;
  const auto rep2 = classify_up_to_equivalence(shuffled, opt);
  REQUIRE(rep2.classes.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) CHECK(rep.classes[i].representative == rep2.classes[i].representative);
}
