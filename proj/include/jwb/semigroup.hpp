#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jwb/freealg.hpp"
#include "jwb/jordanmaps.hpp"
#include "jwb/strucalg.hpp"

namespace jwb::semigroup {

using linalg::SparseVec;

// A word over a presentation alphabet, stored as 0-based letter indices.
using SWord = std::vector<uint8_t>;

// One factor of a relation side: a letter repeated `exponent` times, or — when
// `parameterized` — repeated n times for the family parameter n.
struct RelTerm {
  uint8_t letter = 0;
  int exponent = 1;
  bool parameterized = false;
};

// A single relation (u, v), or a family (u_n, v_n) for n >= n_min.
struct RelationRule {
  std::vector<RelTerm> lhs, rhs;
  bool parameterized = false;
  int n_min = 1;
  std::string text;
};

struct Presentation {
  std::vector<std::string> letters;
  std::vector<RelationRule> rules;
  std::string description;
};

// Text format:
//   letters: a b c
//   relations: (a b^n c , c b^n a) for n>=1 (a b , b a)
// Words are space-separated letters with optional ^<int> powers; ^n marks the
// family parameter ("n" is therefore reserved and cannot name a letter).
// Throws std::invalid_argument with a message on any malformed input.
Presentation parse_presentation(const std::string& text);

// {(a b^n c, c b^n a) : n >= 1} over {a, b, c}. Used as the default source of
// bounded-window witnesses; nothing is assumed about it beyond what the
// closure computations certify at each invocation.
Presentation default_presentation();

std::string word_str(const Presentation& pres, const SWord& w);

// Every concrete relation instance whose sides fit in max_len. Throws
// std::invalid_argument if any instance has sides of different lengths
// (the gradedness requirement).
std::vector<std::pair<SWord, SWord>> instantiate_relations(const Presentation& pres,
                                                           int max_len);

// result[l-1] = all words of length l in lexicographic order, l = 1..max_len.
std::vector<std::vector<SWord>> enumerate_words(const Presentation& pres, int max_len);

// Per-length partition of all words of lengths 1..max_length. Words of length
// l are identified with their rank (base-k digit value); class ids run in
// order of each class's smallest member.
struct GradedCongruence {
  Presentation pres;
  int max_length = 0;
  bool inner = false;
  std::vector<std::vector<int32_t>> class_of;            // [l-1][rank] -> class id
  std::vector<std::vector<std::vector<int64_t>>> classes;  // [l-1][cid] -> ranks

  int64_t rank(const SWord& w) const;
  SWord unrank(int64_t r, int len) const;
  int32_t class_id(const SWord& w) const;
  bool same(const SWord& u, const SWord& v) const;
  SWord representative(const SWord& w) const;  // smallest-rank class member
  int64_t class_count(int len) const;
};

// Least congruence containing all relation instances, per length up to
// max_len, with the compatibility law u1 ~ v1, u2 ~ v2 => u1u2 ~ v1v2
// re-verified on every composable word pair in the window.
GradedCongruence congruence_closure(const Presentation& pres, int max_len);

// The inner congruence: at each length l, the closure of all equal pairs of
// strictly shorter words (taken from the full congruence), rewritten in
// context. Refines the full congruence; that inclusion is re-verified.
GradedCongruence inner_congruence(const Presentation& pres, int max_len);

struct CongruencePair {
  GradedCongruence full, inner;
};
CongruencePair congruence_pair(const Presentation& pres, int max_len);

struct Leff1Witness {
  SWord u, v;
  int length = 0;
};

// Shortest pair with u ~ v but u !~_in v and length >= min_len, searched up to
// max_len. Absence is only "none found in the window", never a proof.
std::optional<Leff1Witness> find_leff1_witness(const Presentation& pres, int max_len,
                                               int min_len = 1);

// Injective rational labeling of inner classes and the induced 2-cocycle
// h(u, v) = alpha(uv) on the quotient semigroup.
struct SemigroupCocycle {
  Presentation pres;
  int max_length = 0;
  GradedCongruence full, inner;
  std::vector<std::vector<Rat>> class_labels;  // [l-1][inner class id]

  Rat alpha(const SWord& w) const;
  // alpha(uv); requires |u| + |v| <= max_length.
  Rat h(const SWord& u, const SWord& v) const;
  // Same value computed through full-class representatives; the agreement of
  // h and h_on_classes on all pairs is what makes h well defined on the
  // quotient, and is verified by build_cocycle.
  Rat h_on_classes(const SWord& u, const SWord& v) const;
};

// seed 0 labels class k (in enumeration order, lengths ascending) with k+1;
// any other seed applies a deterministic shuffle of those values. Validates,
// exhaustively in the window: labels constant on inner classes, h independent
// of representatives, equal h across equal-product factorizations, and the
// cocycle law h(ab, c) = h(a, bc).
SemigroupCocycle build_cocycle(const Presentation& pres, int max_len, uint64_t seed = 0);

// {"<length>": [[class member words...], ...], ...}
std::string congruence_json(const GradedCongruence& c);

// The truncated counterexample data: strictly upper triangular (2m+1)x(2m+1)
// matrices over the semigroup algebra (entries: full classes of words of
// length <= entry_len), the Hochschild cocycle induced by h, witnesses in the
// T-ideal value with their staircase certificates, and — after build_pe2 —
// the annihilator extension b with its involution, the Jordan isomorphism phi
// onto the symmetric part, and the nonzero z-line obstruction.
struct Pe2Instance {
  Presentation pres;
  int m = 0;          // degree of the multilinear generator
  int n = 0;          // truncation size 2m+1
  int entry_len = 0;  // entry word-length cap
  int max_length = 0;
  SemigroupCocycle cocycle;
  Leff1Witness witness;
  SWord u1, u2, v1, v2;  // witness splits u = u1 u2, v = v1 v2

  strucalg::AlgebraPtr a;
  strucalg::BilinearForm f;
  SparseVec w_a1, w_b1, w_a2, w_b2;

  strucalg::AlgebraPtr b;
  std::optional<strucalg::InvolutionMap> star;
  std::optional<jordanmaps::LinearMap> phi;
  SparseVec obstruction;
};

// Builds the algebra/cocycle stage. gen must be multilinear with a nonzero
// identity-permutation coefficient; the witness is required to have length
// >= 2m. entry_len 0 means "the witness length"; otherwise it must lie
// between the witness length and max_len. Verifies the staircase membership
// certificates and the four witness identities, throwing std::logic_error on
// any failure.
Pe2Instance build_pe1(const Presentation& pres, const freealg::TIdealGenerator& gen,
                      int max_len, int entry_len = 0, uint64_t seed = 0);

// Completes the instance: A + A^op with the extended cocycle, the annihilator
// extension b, the involution a + b^op + kz -> b + a^op - kz, the Jordan
// isomorphism phi(x) = x + x^op onto H(b, *), and the obstruction
// phi(a1)phi(b1) - phi(a2)phi(b2) = (f(a1,b1) - f(a2,b2)) z != 0.
Pe2Instance build_pe2(Pe2Instance inst);

}  // namespace jwb::semigroup
