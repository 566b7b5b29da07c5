#include <numeric>

#include "doctest.h"
#include "mrd/constructions.hpp"

using namespace mrd;

TEST_CASE("field spread set") {
  const auto s = field_spread_set(2, 4);
  CHECK(s.spread_set.size() == 16);
  CHECK(s.spread_set.contains(MatrixGF::identity(2, 4)));
  CHECK(rank_distribution(s.spread_set).counts == std::vector<std::uint64_t>{1, 0, 0, 0, 15});
  const FieldCtx f(2, 1, 4);
  std::vector<MatrixGF> mult;
  for (Gf a : f.elements()) mult.push_back(map_matrix(f, [&](Gf x) { return f.mul(a, x); }));
  for (Gf a : f.elements())
    for (Gf b : f.elements()) REQUIRE(mult[a.v] * mult[b.v] == mult[f.mul(a, b).v]);
  for (Gf a : f.elements())
    for (Gf b : f.elements()) REQUIRE(mult[a.v] + mult[b.v] == mult[f.add(a, b).v]);
  CHECK(is_mrd(field_spread_set(2, 5).spread_set).d == 5);
}

TEST_CASE("Delsarte-Gabidulin in M_4(F_2) with d = 3") {
  const auto c = delsarte_gabidulin(2, 4, 2);
  CHECK(c.dim() == 8);
  const auto rd = rank_distribution(c);
  CHECK(rd.counts == std::vector<std::uint64_t>{1, 0, 0, 225, 30});
  CHECK(is_mrd(c).mrd);
}

TEST_CASE("norm condition") {
  const FieldCtx f(3, 1, 4);
  AdditiveMap id = [](Gf a) { return a; };
  AdditiveMap zero = [&](Gf) { return f.zero(); };
  CHECK(check_norm_condition(f, 2, id, zero).ok);
  const auto bad = check_norm_condition(f, 2, id, id);
  CHECK(!bad.ok);
  REQUIRE(bad.witness.has_value());
  CHECK(*bad.witness == f.one());
  // violating parameters give a code below the designed distance
  const auto c = h_k_code(f, 1, 1, id, id);
  CHECK(minimum_distance(c) < 4);
  const Gf eta = first_nonsquare_norm_element(f);
  CHECK(check_norm_condition(f, 1, id, [&](Gf a) { return f.mul(eta, a); }).ok);
  CHECK_THROWS(twisted_gabidulin(3, 4, 2, 1, f.one(), 0));
  CHECK_THROWS(h_k_code(f, 2, 1, zero, zero));
  CHECK_THROWS(h_k_code(f, 2, 2, id, zero));
}

TEST_CASE("twisted Gabidulin and Trombetti-Zhou in M_4(F_3)") {
  const FieldCtx f(3, 1, 4);
  const Gf eta = first_nonsquare_norm_element(f);
  const auto tg = twisted_gabidulin(3, 4, 2, 1, eta, 0);
  auto r = is_mrd(tg);
  CHECK(r.mrd);
  CHECK(r.d == 3);
  CHECK(twisted_gabidulin(3, 4, 2, 1, f.zero(), 0) == delsarte_gabidulin(3, 4, 2));
  const auto tz = trombetti_zhou(3, 4, 2, 1, eta);
  r = is_mrd(tz);
  CHECK(r.mrd);
  CHECK(r.d == 3);
  CHECK_THROWS(trombetti_zhou(2, 4, 2, 1, Gf{1}));
  CHECK_THROWS(trombetti_zhou(3, 3, 2, 1, eta));
  for (Gf a : f.elements()) {
    auto [a0, a1] = subfield_split(f, a);
    CHECK(f.in_subfield(a0, 2));
    CHECK(f.in_subfield(a1, 2));
    CHECK(f.add(a0, f.mul(a1, f.primitive())) == a);
  }
}

TEST_CASE("presemifields from tables, duals and transposes") {
  const FieldCtx f(2, 1, 4);
  const auto basis = polynomial_basis(f);
  std::vector<std::vector<PackedVec>> table(4, std::vector<PackedVec>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const auto d = f.digits(f.mul(basis[i], basis[j]));
      for (int r = 0; r < 4; ++r) table[i][j].set_digit(r, d[r]);
    }
  const auto s = presemifield_from_multiplication(2, 4, table);
  const auto field = field_spread_set(2, 4);
  CHECK(s.spread_set == field.spread_set);
  CHECK(semifield_dual(field).spread_set == field.spread_set);
  const auto t = semifield_transpose(field);
  CHECK(semifield_dual(semifield_dual(t)).basis == t.basis);
  CHECK(semifield_transpose(t).basis == field.basis);
  auto broken = table;
  broken[1][1] = PackedVec{};
  CHECK_THROWS_AS(presemifield_from_multiplication(2, 4, broken), std::invalid_argument);
}
