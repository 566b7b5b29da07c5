#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mrd/budget.hpp"
#include "mrd/code.hpp"
#include "mrd/constructions.hpp"

namespace mrd {

struct KernelSpace {
  Subspace u;          // (m - d)-dimensional subspace of F_q^m (row vectors)
  AdditiveCode c_u;    // {X in C : u X = 0}
};

struct KernelSpaceFamily {
  int d = 0;
  std::vector<KernelSpace> spaces;  // ordered by the canonical basis of u
};

// Groups the minimum-rank codewords by their left kernels.  Throws
// std::runtime_error when the groups are not subspaces of dimension n
// partitioning the minimum-rank words (which happens for non-MRD codes).
KernelSpaceFamily kernel_space_family(const AdditiveCode& c);

struct PartialSpread {
  int p = 2;
  int ambient = 0;  // F_p-dimension N
  int t = 0;        // member dimension
  std::vector<Subspace> members;
};

// The C_U inside F_p^k via coordinates in the canonical basis of C.
PartialSpread partial_spread_of(const AdditiveCode& c);
PartialSpread partial_spread_from_family(const AdditiveCode& c, const KernelSpaceFamily& fam);

struct MaximalityResult {
  bool maximal = true;
  std::optional<Subspace> witness;  // a t-space meeting every member trivially
};

MaximalityResult is_maximal_partial_spread(const PartialSpread& d, const Budget& budget = {});

// Every t-dimensional subspace of F_p^N whose nonzero vectors all satisfy
// `allowed`, each reported once (via its echelon basis).
std::vector<Subspace> subspaces_within(int p, int n_ambient, int t, const std::vector<PackedVec>& allowed,
                                       const Budget& budget = {}, std::size_t limit = 0);

// All n-dimensional subcodes of a square code in which every nonzero element
// is invertible, as presemifields (ordered by canonical bytes).
std::vector<Presemifield> extract_semifield_subcodes(const AdditiveCode& c, const Budget& budget = {});

struct DecompositionFailure : std::logic_error {
  DecompositionFailure(const std::string& what, std::string dump) : std::logic_error(what), code_dump(std::move(dump)) {}
  std::string code_dump;
};

// For q = 2, m = n, d = n - 1: the two semifield subcodes, checked to span C
// and meet trivially.  Throws std::invalid_argument for other parameters and
// DecompositionFailure if the decomposition fails.
std::pair<Presemifield, Presemifield> decompose_as_two_presemifields(const AdditiveCode& c);

}  // namespace mrd
