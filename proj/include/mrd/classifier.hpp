#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrd/budget.hpp"
#include "mrd/code.hpp"
#include "mrd/constructions.hpp"
#include "mrd/equivalence.hpp"

namespace mrd {

// Every m x n matrix of rank < d, as packed bits (zero excluded).
std::vector<PackedVec> low_rank_matrices(int q, int m, int n, int d);

// A code together with the nonzero cosets X + C (reduced modulo C, leading
// digit 1) whose members all have rank >= d.  C + <X> keeps minimum distance
// >= d exactly for these X.
struct SearchNode {
  AdditiveCode code;
  int d = 0;
  int target_dim = 0;
  std::vector<PackedVec> frontier;  // sorted
  std::string stamp;                // canonical bytes of code

  static SearchNode root(const AdditiveCode& c, int d, int target_dim);
  // The node for code + <x>, derived from this node's frontier.
  SearchNode child(PackedVec x) const;
  // Number of lines the frontier must contain for the target to be reachable.
  bool can_reach_target() const;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t orbit_candidates = 0;
  double seconds = 0;
};

struct ExtensionOptions {
  // Equivalence used for isomorph rejection; false restricts to X -> A X B.
  bool allow_transpose = true;
  int threads = 1;
  Budget budget{};
  // Written after every completed level; a matching file is resumed from.
  std::string checkpoint_path;
  bool resume = false;
  // Called after each level with (dimension, number of classes).
  std::function<void(int, std::size_t)> progress;
};

struct ExtensionLevel {
  int dim = 0;
  std::vector<AdditiveCode> classes;  // sorted by canonical bytes
};

struct ExtensionResult {
  std::vector<ExtensionLevel> levels;  // levels[0] holds the starting codes
  SearchStats stats;
  // False when the budget ran out; levels then holds the finished levels.
  bool complete = true;
};

// All codes D containing one of `seeds` (each of minimum distance >= d) with
// dim(D) up to target_dim and minimum distance >= d, one per equivalence class
// at each dimension.  Seeds must share q, shape and dimension.  With
// prune_to_target, codes that cannot reach target_dim are dropped early, so
// intermediate levels are then incomplete.
ExtensionResult extend_codes(const std::vector<AdditiveCode>& seeds, int d, int target_dim,
                             const ExtensionOptions& opt = {}, bool prune_to_target = false);

// Classes of codes D containing C with dim(D) = target_dim and distance >= d.
std::vector<AdditiveCode> extend_code(const AdditiveCode& c, int d, int target_dim, const ExtensionOptions& opt = {});

// Codes of dimension target_dim and distance >= d containing `seed`, one per
// orbit of Aut(seed) when that group is small enough to list (otherwise one per
// code).  Searches the remaining dimensions directly instead of level by level.
std::vector<AdditiveCode> jump_extensions(const AdditiveCode& seed, int d, int target_dim, const Budget& budget = {},
                                          SearchStats* stats = nullptr);

struct ClassRecord {
  AdditiveCode representative;
  Fingerprint fp;
  std::string provenance;  // e.g. "extension", "tensor"
  bool mrd = false;
  int d = 0;
  // Names of the seeds equivalent to a semifield subcode (square codes only).
  std::vector<std::string> contained_seeds;
};

struct ParameterTuple {
  int q = 2, m = 0, n = 0, d = 0;
};

struct Classification {
  ParameterTuple params;
  std::vector<ClassRecord> classes;
  bool complete = true;
  std::string note;
  // Seeds with at least one extension to the final dimension.
  std::vector<std::string> extending_seeds;
  SearchStats stats;
};

// Fills fingerprint (with automorphism group order), MRD flag and distance.
ClassRecord make_class_record(const AdditiveCode& c, std::string provenance, bool with_aut_order = true);

// Names of the seeds (up to the chosen equivalence) occurring among the
// semifield subcodes of c.
std::vector<std::string> contained_seed_names(const AdditiveCode& c, const std::vector<Presemifield>& seeds,
                                              bool allow_transpose);

// Known numbers of semifield spread sets up to equivalence, used to decide
// whether a catalog can be complete.
std::optional<std::size_t> known_semifield_class_count(int q, int n);

// MRD codes in M_n(F_q) with d = n - 1 containing a catalog spread set.
Classification classify_dminus1(int q, int n, const std::vector<Presemifield>& seeds, const ExtensionOptions& opt = {});

struct CensusRow {
  int dim = 0;
  std::size_t classes = 0;
  // containing[i] = classes containing a subcode equivalent to seed i;
  // nullopt when no code of the previous dimension contained seed i.
  std::vector<std::optional<std::size_t>> containing;
  bool complete = true;
};

struct Census {
  ParameterTuple params;
  std::vector<std::string> seed_names;
  std::vector<CensusRow> rows;
  SearchStats stats;
};

// Codes of minimum distance d in M_n(F_q) containing a seed spread set, per
// dimension from n to n(n-d+1), up to X -> A X B (no transposition).
Census quasi_mrd_census(int q, int n, int d, const std::vector<Presemifield>& seeds, const ExtensionOptions& opt = {});

// Tensor correspondence between m x n codes of dimension n with d = m and
// m-dimensional subspaces of M_n(F_q) whose nonzero members are invertible.
AdditiveCode tensorize(const AdditiveCode& c);
AdditiveCode detensorize(const AdditiveCode& s, int m);

// Classes of m-dimensional subspaces of M_n(F_q) with every nonzero member
// invertible, up to X -> A X B (and transposition when allow_transpose).
std::vector<AdditiveCode> classify_invertible_subspaces(int q, int n, int m, const ExtensionOptions& opt = {});

Classification classify_rectangular(int q, int m, int n, const ExtensionOptions& opt = {});

struct SemifieldClassification {
  Classification equivalence;             // up to isotopy and transposition
  std::vector<AdditiveCode> isotopy_classes;
};

// From-scratch classification of semifield spread sets; refuses q^n > 32
// unless allow_large.
SemifieldClassification classify_semifields(int q, int n, const ExtensionOptions& opt = {}, bool allow_large = false);

}  // namespace mrd
