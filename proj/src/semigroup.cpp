#include "jwb/semigroup.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace jwb::semigroup {

namespace {

// ----- presentation text format -----

struct Token {
  enum Kind { LPAREN, RPAREN, COMMA, CARET, GEQ, IDENT, INT } kind;
  std::string text;
  long value = 0;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      out.push_back({Token::LPAREN, "(", 0});
      ++i;
    } else if (c == ')') {
      out.push_back({Token::RPAREN, ")", 0});
      ++i;
    } else if (c == ',') {
      out.push_back({Token::COMMA, ",", 0});
      ++i;
    } else if (c == '^') {
      out.push_back({Token::CARET, "^", 0});
      ++i;
    } else if (c == '>' && i + 1 < s.size() && s[i + 1] == '=') {
      out.push_back({Token::GEQ, ">=", 0});
      i += 2;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::INT, s.substr(i, j - i), std::stol(s.substr(i, j - i))});
      i = j;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      out.push_back({Token::IDENT, s.substr(i, j - i), 0});
      i = j;
    } else {
      throw std::invalid_argument(std::string("presentation: unexpected character '") +
                                  c + "'");
    }
  }
  return out;
}

SWord expand_side(const std::vector<RelTerm>& side, int n) {
  SWord w;
  for (const RelTerm& t : side) {
    int count = t.parameterized ? n : t.exponent;
    for (int r = 0; r < count; ++r) w.push_back(t.letter);
  }
  return w;
}

SWord concat(const SWord& a, const SWord& b) {
  SWord c = a;
  c.insert(c.end(), b.begin(), b.end());
  return c;
}

struct Dsu {
  std::vector<int32_t> parent;
  explicit Dsu(int64_t n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int32_t find(int32_t x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int32_t a, int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
  }
};

std::vector<int64_t> letter_powers(int k, int up_to) {
  std::vector<int64_t> p(static_cast<size_t>(up_to) + 1, 1);
  for (int i = 1; i <= up_to; ++i) p[static_cast<size_t>(i)] = p[static_cast<size_t>(i - 1)] * k;
  return p;
}

void check_window(const Presentation& pres, int max_len) {
  if (pres.letters.empty())
    throw std::invalid_argument("presentation has no letters");
  if (max_len < 1) throw std::invalid_argument("the length window must be at least 1");
  int64_t total = 0, p = 1;
  for (int l = 1; l <= max_len; ++l) {
    p *= static_cast<int64_t>(pres.letters.size());
    total += p;
    if (total > 4'000'000)
      throw std::invalid_argument("length window too large for exhaustive closure");
  }
}

// One-step rewrites of every concrete pair inside every context at length l.
void apply_rewrites(Dsu& dsu, const std::vector<std::pair<SWord, SWord>>& rels,
                    const std::vector<int64_t>& pw, int l) {
  for (const auto& [u, v] : rels) {
    const int lu = static_cast<int>(u.size());
    if (lu > l) continue;
    int64_t ru = 0, rv = 0;
    for (uint8_t d : u) ru = ru * pw[1] + d;
    for (uint8_t d : v) rv = rv * pw[1] + d;
    for (int p = 0; p + lu <= l; ++p) {
      const int s = l - lu - p;
      for (int64_t rp = 0; rp < pw[static_cast<size_t>(p)]; ++rp) {
        const int64_t base = rp * pw[static_cast<size_t>(lu + s)];
        const int64_t mu = base + ru * pw[static_cast<size_t>(s)];
        const int64_t mv = base + rv * pw[static_cast<size_t>(s)];
        for (int64_t rs = 0; rs < pw[static_cast<size_t>(s)]; ++rs)
          dsu.unite(static_cast<int32_t>(mu + rs), static_cast<int32_t>(mv + rs));
      }
    }
  }
}

void extract_classes(Dsu& dsu, int64_t count, std::vector<int32_t>& class_of,
                     std::vector<std::vector<int64_t>>& classes) {
  class_of.assign(static_cast<size_t>(count), -1);
  classes.clear();
  std::vector<int32_t> id_of_root(static_cast<size_t>(count), -1);
  for (int64_t r = 0; r < count; ++r) {
    int32_t root = dsu.find(static_cast<int32_t>(r));
    int32_t& id = id_of_root[static_cast<size_t>(root)];
    if (id < 0) {
      id = static_cast<int32_t>(classes.size());
      classes.emplace_back();
    }
    class_of[static_cast<size_t>(r)] = id;
    classes[static_cast<size_t>(id)].push_back(r);
  }
}

// Certifies compatibility: w1 w2 lands in the same class as rep(w1) rep(w2)
// for every composable word pair; the general law follows by transitivity.
void validate_compat(const GradedCongruence& c, const std::vector<int64_t>& pw) {
  for (int l1 = 1; l1 < c.max_length; ++l1)
    for (int l2 = 1; l1 + l2 <= c.max_length; ++l2) {
      const auto& t1 = c.class_of[static_cast<size_t>(l1 - 1)];
      const auto& t2 = c.class_of[static_cast<size_t>(l2 - 1)];
      const auto& tp = c.class_of[static_cast<size_t>(l1 + l2 - 1)];
      for (int64_t r1 = 0; r1 < static_cast<int64_t>(t1.size()); ++r1) {
        const int64_t rep1 = c.classes[static_cast<size_t>(l1 - 1)]
                                      [static_cast<size_t>(t1[static_cast<size_t>(r1)])][0];
        for (int64_t r2 = 0; r2 < static_cast<int64_t>(t2.size()); ++r2) {
          const int64_t rep2 = c.classes[static_cast<size_t>(l2 - 1)]
                                        [static_cast<size_t>(t2[static_cast<size_t>(r2)])][0];
          if (tp[static_cast<size_t>(r1 * pw[static_cast<size_t>(l2)] + r2)] !=
              tp[static_cast<size_t>(rep1 * pw[static_cast<size_t>(l2)] + rep2)])
            throw std::logic_error(
                "congruence closure lost compatibility at lengths " +
                std::to_string(l1) + "+" + std::to_string(l2));
        }
      }
    }
}

std::optional<Leff1Witness> witness_with_min(const CongruencePair& cp, int min_len) {
  for (int l = std::max(min_len, 1); l <= cp.full.max_length; ++l) {
    const auto& cls = cp.full.classes[static_cast<size_t>(l - 1)];
    const auto& inn = cp.inner.class_of[static_cast<size_t>(l - 1)];
    for (const auto& members : cls) {
      if (members.size() < 2) continue;
      const int32_t base = inn[static_cast<size_t>(members[0])];
      for (size_t t = 1; t < members.size(); ++t)
        if (inn[static_cast<size_t>(members[t])] != base)
          return Leff1Witness{cp.full.unrank(members[0], l),
                              cp.full.unrank(members[t], l), l};
    }
  }
  return std::nullopt;
}

}  // namespace

Presentation parse_presentation(const std::string& text) {
  std::istringstream in(text);
  std::string line, letters_line, relations_text;
  bool in_relations = false;
  while (std::getline(in, line)) {
    const auto ns = line.find_first_not_of(" \t");
    if (ns == std::string::npos) continue;
    std::string t = line.substr(ns);
    if (t.rfind("letters:", 0) == 0) {
      letters_line = t.substr(8);
      in_relations = false;
    } else if (t.rfind("relations:", 0) == 0) {
      relations_text += " " + t.substr(10);
      in_relations = true;
    } else if (in_relations) {
      relations_text += " " + t;
    } else {
      throw std::invalid_argument("presentation: unexpected line '" + t + "'");
    }
  }
  Presentation pres;
  {
    std::istringstream ls(letters_line);
    std::string name;
    while (ls >> name) {
      if (name == "n")
        throw std::invalid_argument("presentation: letter name 'n' is reserved");
      if (std::find(pres.letters.begin(), pres.letters.end(), name) != pres.letters.end())
        throw std::invalid_argument("presentation: duplicate letter '" + name + "'");
      pres.letters.push_back(name);
    }
  }
  if (pres.letters.empty())
    throw std::invalid_argument("presentation: a 'letters:' line with at least one letter is required");
  if (pres.letters.size() > 250)
    throw std::invalid_argument("presentation: too many letters");

  auto letter_index = [&](const std::string& name) -> uint8_t {
    auto it = std::find(pres.letters.begin(), pres.letters.end(), name);
    if (it == pres.letters.end())
      throw std::invalid_argument("presentation: unknown letter '" + name + "'");
    return static_cast<uint8_t>(it - pres.letters.begin());
  };

  std::vector<Token> toks = tokenize(relations_text);
  size_t i = 0;
  auto expect = [&](Token::Kind k, const char* what) {
    if (i >= toks.size() || toks[i].kind != k)
      throw std::invalid_argument(std::string("presentation: expected ") + what);
    return toks[i++];
  };
  auto parse_side = [&](Token::Kind stop1, Token::Kind stop2) {
    std::vector<RelTerm> side;
    while (i < toks.size() && toks[i].kind != stop1 && toks[i].kind != stop2) {
      Token id = expect(Token::IDENT, "a letter");
      RelTerm term;
      term.letter = letter_index(id.text);
      if (i < toks.size() && toks[i].kind == Token::CARET) {
        ++i;
        if (i < toks.size() && toks[i].kind == Token::IDENT && toks[i].text == "n") {
          term.parameterized = true;
          ++i;
        } else {
          Token e = expect(Token::INT, "an exponent");
          if (e.value < 1) throw std::invalid_argument("presentation: exponent must be >= 1");
          term.exponent = static_cast<int>(e.value);
        }
      }
      side.push_back(term);
    }
    if (side.empty()) throw std::invalid_argument("presentation: empty word in a relation");
    return side;
  };

  while (i < toks.size()) {
    expect(Token::LPAREN, "'('");
    RelationRule rule;
    rule.lhs = parse_side(Token::COMMA, Token::COMMA);
    expect(Token::COMMA, "','");
    rule.rhs = parse_side(Token::RPAREN, Token::RPAREN);
    expect(Token::RPAREN, "')'");
    for (const auto& t : rule.lhs) rule.parameterized |= t.parameterized;
    for (const auto& t : rule.rhs) rule.parameterized |= t.parameterized;
    if (i < toks.size() && toks[i].kind == Token::IDENT && toks[i].text == "for") {
      ++i;
      Token nn = expect(Token::IDENT, "'n'");
      if (nn.text != "n") throw std::invalid_argument("presentation: expected 'n' after 'for'");
      expect(Token::GEQ, "'>='");
      Token lo = expect(Token::INT, "a bound");
      if (!rule.parameterized)
        throw std::invalid_argument("presentation: 'for n>=' on a relation without ^n");
      rule.n_min = static_cast<int>(lo.value);
      if (rule.n_min < 0) throw std::invalid_argument("presentation: negative bound");
    }
    pres.rules.push_back(std::move(rule));
  }
  return pres;
}

Presentation default_presentation() {
  Presentation p = parse_presentation(
      "letters: a b c\nrelations: (a b^n c , c b^n a) for n>=1");
  p.description = "(a b^n c , c b^n a) for n>=1";
  return p;
}

std::string word_str(const Presentation& pres, const SWord& w) {
  std::string s;
  for (uint8_t d : w) s += pres.letters[static_cast<size_t>(d)];
  return s;
}

std::vector<std::pair<SWord, SWord>> instantiate_relations(const Presentation& pres,
                                                           int max_len) {
  std::vector<std::pair<SWord, SWord>> out;
  for (const RelationRule& rule : pres.rules) {
    const int n_hi = rule.parameterized ? max_len + 1 : rule.n_min;
    for (int n = rule.n_min; n <= n_hi; ++n) {
      SWord u = expand_side(rule.lhs, n);
      SWord v = expand_side(rule.rhs, n);
      if (u.empty() || v.empty())
        throw std::invalid_argument("relation instance with an empty side: " + rule.text);
      if (u.size() != v.size())
        throw std::invalid_argument(
            "relation pair with unequal lengths (the congruence must stay graded): " +
            word_str(pres, u) + " vs " + word_str(pres, v));
      if (static_cast<int>(u.size()) > max_len) break;
      out.emplace_back(std::move(u), std::move(v));
    }
  }
  return out;
}

std::vector<std::vector<SWord>> enumerate_words(const Presentation& pres, int max_len) {
  check_window(pres, max_len);
  const int k = static_cast<int>(pres.letters.size());
  std::vector<std::vector<SWord>> out(static_cast<size_t>(max_len));
  for (int l = 1; l <= max_len; ++l) {
    SWord w(static_cast<size_t>(l), 0);
    for (;;) {
      out[static_cast<size_t>(l - 1)].push_back(w);
      int t = l - 1;
      while (t >= 0 && ++w[static_cast<size_t>(t)] == k) w[static_cast<size_t>(t--)] = 0;
      if (t < 0) break;
    }
  }
  return out;
}

int64_t GradedCongruence::rank(const SWord& w) const {
  const int64_t k = static_cast<int64_t>(pres.letters.size());
  int64_t r = 0;
  for (uint8_t d : w) {
    if (d >= k) throw std::invalid_argument("word uses a letter outside the alphabet");
    r = r * k + d;
  }
  return r;
}

SWord GradedCongruence::unrank(int64_t r, int len) const {
  const int64_t k = static_cast<int64_t>(pres.letters.size());
  SWord w(static_cast<size_t>(len));
  for (int i = len - 1; i >= 0; --i) {
    w[static_cast<size_t>(i)] = static_cast<uint8_t>(r % k);
    r /= k;
  }
  return w;
}

int32_t GradedCongruence::class_id(const SWord& w) const {
  const int l = static_cast<int>(w.size());
  if (l < 1 || l > max_length)
    throw std::invalid_argument("word length outside the computed window");
  return class_of[static_cast<size_t>(l - 1)][static_cast<size_t>(rank(w))];
}

bool GradedCongruence::same(const SWord& u, const SWord& v) const {
  if (u.size() != v.size()) return false;
  return class_id(u) == class_id(v);
}

SWord GradedCongruence::representative(const SWord& w) const {
  const int l = static_cast<int>(w.size());
  return unrank(classes[static_cast<size_t>(l - 1)][static_cast<size_t>(class_id(w))][0], l);
}

int64_t GradedCongruence::class_count(int len) const {
  if (len < 1 || len > max_length)
    throw std::invalid_argument("length outside the computed window");
  return static_cast<int64_t>(classes[static_cast<size_t>(len - 1)].size());
}

GradedCongruence congruence_closure(const Presentation& pres, int max_len) {
  check_window(pres, max_len);
  const int k = static_cast<int>(pres.letters.size());
  const auto pw = letter_powers(k, max_len);
  const auto rels = instantiate_relations(pres, max_len);
  GradedCongruence c{pres, max_len, false, {}, {}};
  c.class_of.resize(static_cast<size_t>(max_len));
  c.classes.resize(static_cast<size_t>(max_len));
  for (int l = 1; l <= max_len; ++l) {
    Dsu dsu(pw[static_cast<size_t>(l)]);
    apply_rewrites(dsu, rels, pw, l);
    extract_classes(dsu, pw[static_cast<size_t>(l)], c.class_of[static_cast<size_t>(l - 1)],
                    c.classes[static_cast<size_t>(l - 1)]);
  }
  validate_compat(c, pw);
  return c;
}

CongruencePair congruence_pair(const Presentation& pres, int max_len) {
  CongruencePair cp{congruence_closure(pres, max_len), {}};
  const int k = static_cast<int>(pres.letters.size());
  const auto pw = letter_powers(k, max_len);
  GradedCongruence& in = cp.inner;
  in.pres = pres;
  in.max_length = max_len;
  in.inner = true;
  in.class_of.resize(static_cast<size_t>(max_len));
  in.classes.resize(static_cast<size_t>(max_len));
  for (int l = 1; l <= max_len; ++l) {
    // Generators: every equal pair of strictly shorter words, spanning each
    // full class through its representative.
    std::vector<std::pair<SWord, SWord>> gens;
    for (int ls = 1; ls < l; ++ls)
      for (const auto& members : cp.full.classes[static_cast<size_t>(ls - 1)]) {
        for (size_t t = 1; t < members.size(); ++t)
          gens.emplace_back(cp.full.unrank(members[0], ls),
                            cp.full.unrank(members[t], ls));
      }
    Dsu dsu(pw[static_cast<size_t>(l)]);
    apply_rewrites(dsu, gens, pw, l);
    extract_classes(dsu, pw[static_cast<size_t>(l)], in.class_of[static_cast<size_t>(l - 1)],
                    in.classes[static_cast<size_t>(l - 1)]);
  }
  validate_compat(in, pw);
  // inner refines full
  for (int l = 1; l <= max_len; ++l) {
    const auto& fo = cp.full.class_of[static_cast<size_t>(l - 1)];
    for (const auto& members : in.classes[static_cast<size_t>(l - 1)]) {
      const int32_t base = fo[static_cast<size_t>(members[0])];
      for (int64_t r : members)
        if (fo[static_cast<size_t>(r)] != base)
          throw std::logic_error("inner congruence escaped the full congruence at length " +
                                 std::to_string(l));
    }
  }
  return cp;
}

GradedCongruence inner_congruence(const Presentation& pres, int max_len) {
  return congruence_pair(pres, max_len).inner;
}

std::optional<Leff1Witness> find_leff1_witness(const Presentation& pres, int max_len,
                                               int min_len) {
  return witness_with_min(congruence_pair(pres, max_len), min_len);
}

Rat SemigroupCocycle::alpha(const SWord& w) const {
  return class_labels[w.size() - 1][static_cast<size_t>(inner.class_id(w))];
}

Rat SemigroupCocycle::h(const SWord& u, const SWord& v) const {
  if (static_cast<int>(u.size() + v.size()) > max_length)
    throw std::invalid_argument("cocycle evaluated outside the length window");
  return alpha(concat(u, v));
}

Rat SemigroupCocycle::h_on_classes(const SWord& u, const SWord& v) const {
  return h(full.representative(u), full.representative(v));
}

SemigroupCocycle build_cocycle(const Presentation& pres, int max_len, uint64_t seed) {
  CongruencePair cp = congruence_pair(pres, max_len);
  SemigroupCocycle c{pres, max_len, std::move(cp.full), std::move(cp.inner), {}};
  int64_t total = 0;
  for (int l = 1; l <= max_len; ++l) total += c.inner.class_count(l);
  std::vector<int64_t> values(static_cast<size_t>(total));
  std::iota(values.begin(), values.end(), 1);
  if (seed != 0) {
    std::mt19937_64 eng(seed);
    std::shuffle(values.begin(), values.end(), eng);
  }
  size_t next = 0;
  c.class_labels.resize(static_cast<size_t>(max_len));
  for (int l = 1; l <= max_len; ++l) {
    auto& row = c.class_labels[static_cast<size_t>(l - 1)];
    row.resize(static_cast<size_t>(c.inner.class_count(l)));
    for (auto& val : row) val = Rat(values[next++]);
  }

  const int k = static_cast<int>(pres.letters.size());
  const auto pw = letter_powers(k, max_len);
  // h is well defined on the quotient: the product class is blind to the
  // choice of representatives of the factors.
  for (int l1 = 1; l1 < max_len; ++l1)
    for (int l2 = 1; l1 + l2 <= max_len; ++l2) {
      const auto& io = c.inner.class_of[static_cast<size_t>(l1 + l2 - 1)];
      for (int64_t r1 = 0; r1 < pw[static_cast<size_t>(l1)]; ++r1) {
        const int64_t rep1 =
            c.full.classes[static_cast<size_t>(l1 - 1)]
                          [static_cast<size_t>(c.full.class_of[static_cast<size_t>(l1 - 1)]
                                                              [static_cast<size_t>(r1)])][0];
        for (int64_t r2 = 0; r2 < pw[static_cast<size_t>(l2)]; ++r2) {
          const int64_t rep2 =
              c.full.classes[static_cast<size_t>(l2 - 1)]
                            [static_cast<size_t>(c.full.class_of[static_cast<size_t>(l2 - 1)]
                                                                [static_cast<size_t>(r2)])][0];
          if (io[static_cast<size_t>(r1 * pw[static_cast<size_t>(l2)] + r2)] !=
              io[static_cast<size_t>(rep1 * pw[static_cast<size_t>(l2)] + rep2)])
            throw std::logic_error("cocycle value depends on factor representatives at lengths " +
                                   std::to_string(l1) + "+" + std::to_string(l2));
        }
      }
    }
  // Every factorization of a word evaluates to the word's label, even through
  // class representatives.
  auto words = enumerate_words(pres, max_len);
  for (int l = 2; l <= max_len; ++l)
    for (const SWord& w : words[static_cast<size_t>(l - 1)]) {
      const Rat lab = c.alpha(w);
      for (int s = 1; s < l; ++s) {
        SWord a(w.begin(), w.begin() + s), b(w.begin() + s, w.end());
        if (c.h_on_classes(a, b) != lab)
          throw std::logic_error("factorization law failed at " + word_str(pres, w));
      }
    }
  // Cocycle law through representatives.
  for (int l1 = 1; l1 + 2 <= max_len; ++l1)
    for (int l2 = 1; l1 + l2 + 1 <= max_len; ++l2)
      for (int l3 = 1; l1 + l2 + l3 <= max_len; ++l3)
        for (const SWord& a : words[static_cast<size_t>(l1 - 1)])
          for (const SWord& b : words[static_cast<size_t>(l2 - 1)])
            for (const SWord& w : words[static_cast<size_t>(l3 - 1)])
              if (c.h_on_classes(concat(a, b), w) != c.h_on_classes(a, concat(b, w)))
                throw std::logic_error("cocycle law failed at " + word_str(pres, a) + "|" +
                                       word_str(pres, b) + "|" + word_str(pres, w));
  return c;
}

std::string congruence_json(const GradedCongruence& c) {
  nlohmann::json j = nlohmann::json::object();
  for (int l = 1; l <= c.max_length; ++l) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& members : c.classes[static_cast<size_t>(l - 1)]) {
      nlohmann::json cls = nlohmann::json::array();
      for (int64_t r : members) cls.push_back(word_str(c.pres, c.unrank(r, l)));
      arr.push_back(std::move(cls));
    }
    j[std::to_string(l)] = std::move(arr);
  }
  return j.dump(2) + "\n";
}

Pe2Instance build_pe1(const Presentation& pres, const freealg::TIdealGenerator& gen,
                      int max_len, int entry_len, uint64_t seed) {
  std::vector<uint32_t> vars = freealg::generators_of(gen.generator);
  const int m = static_cast<int>(vars.size());
  if (m < 1) throw std::invalid_argument("build_pe1: the generator has no variables");
  for (uint32_t v : vars)
    if (freealg::degree_in(gen.generator, v) != 1)
      throw std::invalid_argument("build_pe1: the generator is not multilinear");
  const freealg::Word idw(vars.begin(), vars.end());
  const auto idit = gen.generator.terms().find(idw);
  if (idit == gen.generator.terms().end())
    throw std::invalid_argument(
        "build_pe1: the generator needs a nonzero coefficient on the ascending product");
  const Rat c_id = idit->second;

  Pe2Instance inst;
  inst.pres = pres;
  inst.m = m;
  inst.n = 2 * m + 1;
  inst.max_length = max_len;
  inst.cocycle = build_cocycle(pres, max_len, seed);
  const GradedCongruence& full = inst.cocycle.full;
  auto wit = witness_with_min(CongruencePair{full, inst.cocycle.inner}, 2 * m);
  if (!wit)
    throw std::runtime_error(
        "build_pe1: no equal-but-not-inner-equal pair of length >= 2m in the window");
  inst.witness = *wit;
  const int wl = wit->length;
  inst.entry_len = entry_len == 0 ? wl : entry_len;
  if (inst.entry_len < wl || inst.entry_len > max_len)
    throw std::invalid_argument(
        "build_pe1: the entry length cap must lie between the witness length and the window");
  const int le = inst.entry_len;
  const int half = (wl + 1) / 2;
  inst.u1.assign(wit->u.begin(), wit->u.begin() + half);
  inst.u2.assign(wit->u.begin() + half, wit->u.end());
  inst.v1.assign(wit->v.begin(), wit->v.begin() + half);
  inst.v2.assign(wit->v.begin() + half, wit->v.end());

  const int N = inst.n;
  std::vector<std::pair<int, int>> positions;
  std::vector<std::vector<int>> posidx(static_cast<size_t>(N),
                                       std::vector<int>(static_cast<size_t>(N), -1));
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      posidx[static_cast<size_t>(i)][static_cast<size_t>(j)] = static_cast<int>(positions.size());
      positions.emplace_back(i, j);
    }
  std::vector<int64_t> off(static_cast<size_t>(le) + 2, 0);
  for (int l = 1; l <= le; ++l)
    off[static_cast<size_t>(l) + 1] = off[static_cast<size_t>(l)] + full.class_count(l);
  const int64_t ctot = off[static_cast<size_t>(le) + 1];
  auto bidx = [&](int i, int j, int l, int32_t cid) {
    return static_cast<int32_t>(
        posidx[static_cast<size_t>(i)][static_cast<size_t>(j)] * ctot +
        off[static_cast<size_t>(l)] + cid);
  };
  auto widx = [&](int i, int j, const SWord& w) {
    return bidx(i, j, static_cast<int>(w.size()), full.class_id(w));
  };

  std::vector<std::string> labels(static_cast<size_t>(static_cast<int64_t>(positions.size()) * ctot));
  std::vector<SWord> reps(static_cast<size_t>(ctot));
  for (int l = 1; l <= le; ++l)
    for (int32_t cid = 0; cid < full.class_count(l); ++cid)
      reps[static_cast<size_t>(off[static_cast<size_t>(l)] + cid)] =
          full.unrank(full.classes[static_cast<size_t>(l - 1)][static_cast<size_t>(cid)][0], l);
  for (size_t p = 0; p < positions.size(); ++p)
    for (int64_t cc = 0; cc < ctot; ++cc)
      labels[p * static_cast<size_t>(ctot) + static_cast<size_t>(cc)] =
          "e" + std::to_string(positions[p].first + 1) + "," +
          std::to_string(positions[p].second + 1) + "(" +
          word_str(pres, reps[static_cast<size_t>(cc)]) + ")";

  strucalg::StructureAlgebra::ProductMap products;
  strucalg::BilinearForm f;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (int q = j + 1; q < N; ++q)
        for (int l1 = 1; l1 < le; ++l1)
          for (int l2 = 1; l1 + l2 <= le; ++l2)
            for (int32_t c1 = 0; c1 < full.class_count(l1); ++c1)
              for (int32_t c2 = 0; c2 < full.class_count(l2); ++c2) {
                const SWord w = concat(reps[static_cast<size_t>(off[static_cast<size_t>(l1)] + c1)],
                                       reps[static_cast<size_t>(off[static_cast<size_t>(l2)] + c2)]);
                const int32_t ka = bidx(i, j, l1, c1);
                const int32_t kb = bidx(j, q, l2, c2);
                products[{ka, kb}] = {{widx(i, q, w), Rat(1)}};
                f[{ka, kb}] = inst.cocycle.alpha(w);
              }
  inst.a = strucalg::StructureAlgebra::create("pe1A", std::move(labels),
                                              std::move(products), std::nullopt);
  inst.f = std::move(f);

  inst.w_a1 = linalg::sv_unit(widx(0, m, inst.u1));
  inst.w_b1 = linalg::sv_unit(widx(m, 2 * m, inst.u2));
  inst.w_a2 = linalg::sv_unit(widx(0, m, inst.v1));
  inst.w_b2 = linalg::sv_unit(widx(m, 2 * m, inst.v2));

  // Staircase membership: substituting e_{i+t,i+t+1}(s_t) for the generator's
  // variables leaves only the ascending product, whose value is the target
  // matrix unit — so the target lies in the T-ideal value.
  std::map<uint32_t, size_t> slot;
  for (size_t t = 0; t < vars.size(); ++t) slot[vars[t]] = t;
  auto staircase_check = [&](int i0, const SWord& w) {
    std::vector<SparseVec> args(static_cast<size_t>(m));
    size_t pos = 0;
    for (int t = 0; t < m; ++t) {
      const size_t len = (t == m - 1) ? w.size() - pos : 1;
      const SWord chunk(w.begin() + static_cast<long>(pos),
                        w.begin() + static_cast<long>(pos + len));
      pos += len;
      args[static_cast<size_t>(t)] = linalg::sv_unit(widx(i0 + t, i0 + t + 1, chunk));
    }
    std::map<int32_t, Rat> acc;
    for (const auto& [word, coeff] : gen.generator.terms()) {
      SparseVec cur = args[slot.at(word.front())];
      for (size_t t = 1; t < word.size() && !cur.empty(); ++t)
        cur = inst.a->mul(cur, args[slot.at(word[t])]);
      for (const auto& [kk, ck] : cur) acc[kk] += coeff * ck;
    }
    SparseVec val;
    for (auto& [kk, ck] : acc)
      if (ck != 0) val.emplace_back(kk, std::move(ck));
    const SparseVec expect = linalg::sv_scale(linalg::sv_unit(widx(i0, i0 + m, w)), c_id);
    if (!(val == expect))
      throw std::logic_error("build_pe1: staircase certificate failed for " +
                             word_str(pres, w));
  };
  staircase_check(0, inst.u1);
  staircase_check(m, inst.u2);
  staircase_check(0, inst.v1);
  staircase_check(m, inst.v2);

  const SparseVec p1 = inst.a->mul(inst.w_a1, inst.w_b1);
  const SparseVec p2 = inst.a->mul(inst.w_a2, inst.w_b2);
  if (p1.empty() || !linalg::sv_sub(p1, p2).empty())
    throw std::logic_error("build_pe1: a1 b1 - a2 b2 failed to vanish");
  if (!inst.a->mul(inst.w_b1, inst.w_a1).empty() ||
      !inst.a->mul(inst.w_b2, inst.w_a2).empty())
    throw std::logic_error("build_pe1: b1 a1 and b2 a2 must vanish");
  if (strucalg::form_value(inst.f, inst.w_b1, inst.w_a1) != 0 ||
      strucalg::form_value(inst.f, inst.w_b2, inst.w_a2) != 0)
    throw std::logic_error("build_pe1: f(b, a) values must vanish");
  const Rat d = strucalg::form_value(inst.f, inst.w_a1, inst.w_b1) -
                strucalg::form_value(inst.f, inst.w_a2, inst.w_b2);
  if (d == 0) throw std::logic_error("build_pe1: the obstruction scalar vanished");
  if (d != inst.cocycle.alpha(wit->u) - inst.cocycle.alpha(wit->v))
    throw std::logic_error("build_pe1: obstruction scalar mismatch");
  return inst;
}

Pe2Instance build_pe2(Pe2Instance inst) {
  if (!inst.a) throw std::invalid_argument("build_pe2: the pe1 stage is missing");
  const int32_t da = inst.a->dim();
  auto [atilde, exch] = strucalg::exchange_involution(inst.a);
  strucalg::BilinearForm ext = inst.f;
  for (const auto& [key, c] : inst.f)
    ext[{da + key.second, da + key.first}] = -c;
  for (const auto& [key, c] : ext) {
    const bool li = key.first >= da, ri = key.second >= da;
    if (li != ri)
      throw std::logic_error("build_pe2: the extended cocycle leaks into mixed blocks");
    if (li) {
      const auto it = inst.f.find({key.second - da, key.first - da});
      if (it == inst.f.end() || it->second != -c)
        throw std::logic_error("build_pe2: antisymmetry transfer failed");
    }
  }
  inst.b = strucalg::cocycle_extension(atilde, ext, "pe2B");
  const int32_t zi = atilde->dim();

  std::vector<SparseVec> cols = exch.columns();
  cols.push_back({{zi, Rat(-1)}});
  inst.star.emplace(inst.b, std::move(cols));
  inst.star->validate();

  std::vector<SparseVec> pc(static_cast<size_t>(da));
  for (int32_t i = 0; i < da; ++i) pc[static_cast<size_t>(i)] = {{i, Rat(1)}, {da + i, Rat(1)}};
  inst.phi.emplace(inst.a, inst.b, std::move(pc));
  const auto wtn = jordanmaps::is_jordan_hom(*inst.phi);
  if (!wtn.jordan) throw std::logic_error("build_pe2: phi is not a Jordan homomorphism");
  if (inst.phi->rank() != da) throw std::logic_error("build_pe2: phi is not injective");
  const strucalg::Subspace h = strucalg::symmetric_part(*inst.star);
  if (h.dim() != da)
    throw std::logic_error("build_pe2: the symmetric part has unexpected dimension");
  for (const auto& col : inst.phi->columns())
    if (!h.contains(col))
      throw std::logic_error("build_pe2: the phi image leaves the symmetric part");
  for (int32_t i = 0; i < da; ++i) {
    const SparseVec& ci = inst.phi->columns()[static_cast<size_t>(i)];
    if (linalg::sv_get(inst.b->mul(ci, ci), zi) != 0)
      throw std::logic_error("build_pe2: a square acquired a z component");
  }

  const SparseVec o =
      linalg::sv_sub(inst.b->mul(inst.phi->apply(inst.w_a1), inst.phi->apply(inst.w_b1)),
                     inst.b->mul(inst.phi->apply(inst.w_a2), inst.phi->apply(inst.w_b2)));
  const Rat d = strucalg::form_value(inst.f, inst.w_a1, inst.w_b1) -
                strucalg::form_value(inst.f, inst.w_a2, inst.w_b2);
  const SparseVec expect{{zi, d}};
  if (o.empty() || !(o == expect))
    throw std::logic_error("build_pe2: the obstruction is not the expected z line");
  inst.obstruction = o;
  return inst;
}

}  // namespace jwb::semigroup
