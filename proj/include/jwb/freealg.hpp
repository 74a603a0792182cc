#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jwb/rational.hpp"

namespace jwb::freealg {

// A word over the generators x1, x2, ...; entries are 1-based generator
// indices. The empty word is the unit of the free algebra.
using Word = std::vector<uint32_t>;

// Degree-lexicographic order: shorter words first, then lexicographic.
struct DegLexLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

// Element of the free associative algebra over Q: a sparse map from words to
// nonzero rational coefficients, kept in degree-lex order. The map is always
// canonical (no zero coefficients stored), so operator== is structural
// equality of polynomials.
class FreePoly {
 public:
  using TermMap = std::map<Word, Rat, DegLexLess>;

  FreePoly() = default;

  static FreePoly zero() { return FreePoly(); }
  static FreePoly one() { return constant(1); }
  static FreePoly constant(Rat c);
  static FreePoly generator(uint32_t index);  // x_index, index >= 1
  static FreePoly monomial(Word w, Rat c);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  // Adds c * w, erasing the term if the result is zero.
  void add_term(const Word& w, const Rat& c);
  Rat coeff(const Word& w) const;

  // Maximum word length; the zero polynomial reports -1.
  int degree() const;

  FreePoly& operator+=(const FreePoly& o);
  FreePoly& operator-=(const FreePoly& o);
  FreePoly& operator*=(const Rat& c);
  friend FreePoly operator+(FreePoly a, const FreePoly& b) { return a += b; }
  friend FreePoly operator-(FreePoly a, const FreePoly& b) { return a -= b; }
  friend FreePoly operator*(FreePoly a, const Rat& c) { return a *= c; }
  friend FreePoly operator*(const Rat& c, FreePoly a) { return a *= c; }
  FreePoly operator-() const;
  bool operator==(const FreePoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const FreePoly& o) const { return !(*this == o); }

 private:
  TermMap terms_;
};

// Concatenation product extended bilinearly.
FreePoly free_mul(const FreePoly& a, const FreePoly& b);
inline FreePoly operator*(const FreePoly& a, const FreePoly& b) {
  return free_mul(a, b);
}

// x o y = xy + yx.
FreePoly jordan_prod(const FreePoly& a, const FreePoly& b);
// [x, y] = xy - yx.
FreePoly lie_bracket(const FreePoly& a, const FreePoly& b);

inline bool is_identically_zero(const FreePoly& f) { return f.is_zero(); }

// Sorted list of generator indices occurring in f.
std::vector<uint32_t> generators_of(const FreePoly& f);

// Number of occurrences of var in each word must be constant for f to be
// homogeneous in var; degree_in returns that count or -1 if not homogeneous.
int degree_in(const FreePoly& f, uint32_t var);

// Substitutes images[i] for x_i simultaneously; every generator occurring in
// f must have an image. The result is the unique algebra-endomorphism value.
FreePoly substitute(const FreePoly& f,
                    const std::map<uint32_t, FreePoly>& images);

// Multilinear component of f(.., var -> fresh_1 + ... + fresh_d, ..): f must
// be homogeneous of degree d >= 1 in var, fresh must be d distinct generators
// not occurring in f. Substituting var for every fresh generator in the
// result recovers d! * f.
FreePoly partial_linearize(const FreePoly& f, uint32_t var,
                           const std::vector<uint32_t>& fresh);

// A T-ideal generator together with its linearization family. The family
// lists, for every multihomogeneous component of the generator, the chain of
// partial linearizations ending in a fully multilinear polynomial; the
// multilinear members are what value computations on algebras consume.
struct TIdealGenerator {
  std::string name;
  FreePoly generator;
  std::vector<FreePoly> family;        // components + their linearization chain
  std::vector<size_t> multilinear;     // indices into family
};

TIdealGenerator make_tideal_generator(std::string name, const FreePoly& f);

// Expression grammar: generators x1, x2, ...; rational literals p/q; binary
// + - *; jord(f,g); comm(f,g); parentheses. Throws std::invalid_argument with
// a character position on syntax errors or unknown names.
FreePoly parse_poly(const std::string& text);

// Canonical printing: terms in degree-lex order, coefficients in lowest
// terms; parse_poly(to_string(f)) == f.
std::string to_string(const FreePoly& f);
std::string to_string(const Word& w);

}  // namespace jwb::freealg
