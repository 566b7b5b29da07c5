#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mrd/budget.hpp"
#include "mrd/code.hpp"

namespace mrd {

// C1 = { A X' B : X in C2 } where X' = X^rho (or (X^rho)^T when transposed).
// Over a prime field rho is always the identity (exponent 0).
struct EquivalenceWitness {
  MatrixGF a;
  MatrixGF b;
  int rho = 0;
  bool transposed = false;
};

AdditiveCode apply_witness(const AdditiveCode& c2, const EquivalenceWitness& w);

struct Idealiser {
  std::uint64_t order = 0;
  int dim = 0;
  std::vector<MatrixGF> basis;
};

// {A : A C subset C} and {A : C A subset C}.
Idealiser left_idealiser(const AdditiveCode& c);
Idealiser right_idealiser(const AdditiveCode& c);

struct Automorphism {
  MatrixGF a;
  MatrixGF b;  // A X B in C for X in C
};

struct AutomorphismGroup {
  std::uint64_t order = 0;
  std::vector<Automorphism> generators;
  // True when `generators` lists every element.
  bool complete = false;
};

// Pairs (A, B) in GL x GL with A C B = C.  The usual presentation
// {(A, B) : A C B^T = C} has the same order; generators here act as X -> A X B.
AutomorphismGroup automorphism_group(const AdditiveCode& c, const Budget& budget = {});

struct EquivalenceOptions {
  bool allow_transpose = true;
  Budget budget{};
};

// Returns a witness mapping c2 onto c1, or nullopt when inequivalent.
std::optional<EquivalenceWitness> are_equivalent(const AdditiveCode& c1, const AdditiveCode& c2,
                                                 const EquivalenceOptions& opt = {});

struct Fingerprint {
  RankDistribution ranks;
  int left_idealiser_dim = 0;
  int right_idealiser_dim = 0;
  // Sorted multiset of conjugacy types of C Y^{-1} over invertible Y (up to
  // scalars); empty when the code has no invertible element or is not square.
  std::vector<std::uint64_t> types;
  std::optional<std::uint64_t> aut_order;
  // Fingerprints of contained semifield subcodes, filled by spread-structure.
  std::vector<std::string> subcodes;
  bool isotopy_only = false;

  // Canonical string; equal for equivalent codes.
  std::string key() const;
  friend bool operator==(const Fingerprint& a, const Fingerprint& b) { return a.key() == b.key(); }
};

struct FingerprintOptions {
  bool isotopy_only = false;
  bool with_types = true;
  bool with_aut_order = false;
};

Fingerprint fingerprint(const AdditiveCode& c, const FingerprintOptions& opt = {});

struct ClassEntry {
  AdditiveCode representative;
  std::size_t representative_index = 0;  // index into the input list
  std::vector<std::size_t> members;      // input indices, ascending
  Fingerprint fp;
};

struct ClassificationReport {
  std::vector<ClassEntry> classes;
  std::size_t input_count = 0;
};

struct ClassifyOptions {
  bool isotopy_only = false;
  int threads = 1;
  Budget budget{};
  FingerprintOptions fingerprint{};
};

// Classes are ordered by fingerprint key, then by representative bytes; the
// representative is the member with the smallest canonical bytes.
ClassificationReport classify_up_to_equivalence(const std::vector<AdditiveCode>& codes,
                                                const ClassifyOptions& opt = {});

// Order of GL(n, q).
std::uint64_t gl_order(int n, int q);

// Invokes f on every invertible n x n matrix (n*n <= 16 and q^{n*n} <= 2^24).
void for_each_invertible(int q, int n, const std::function<bool(const MatrixGF&)>& f);

// Low-level helpers shared with the classifier.
namespace detail {
// Subspace of n x n matrices A with A D A^{-1} = E as sets (D and E contain
// the identity); enumerates solutions and calls f(A); f returns false to stop.
// Returns the number of solutions visited.
std::uint64_t conjugations(const AdditiveCode& d, const AdditiveCode& e,
                           const std::function<bool(const MatrixGF&)>& f, const Budget& budget);
// Conjugacy type hash of C Y^{-1}.
std::uint64_t conjugacy_type(const AdditiveCode& c, const MatrixGF& y_inverse);
}  // namespace detail

}  // namespace mrd
