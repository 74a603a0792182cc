#include "jwb/freealg.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <stdexcept>

namespace jwb {

std::string rat_to_string(const Rat& r) {
  BigInt num = numerator(r), den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {
bool valid_int(const std::string& s) {
  size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}
}  // namespace

Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!valid_int(s)) throw std::invalid_argument("bad rational: '" + s + "'");
    return Rat(BigInt(s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den))
    throw std::invalid_argument("bad rational: '" + s + "'");
  BigInt d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  return Rat(BigInt(num), d);
}

}  // namespace jwb

namespace jwb::freealg {

FreePoly FreePoly::constant(Rat c) {
  FreePoly p;
  p.add_term({}, c);
  return p;
}

FreePoly FreePoly::generator(uint32_t index) {
  if (index == 0) throw std::invalid_argument("generator indices start at 1");
  FreePoly p;
  p.add_term({index}, 1);
  return p;
}

FreePoly FreePoly::monomial(Word w, Rat c) {
  FreePoly p;
  p.add_term(w, c);
  return p;
}

void FreePoly::add_term(const Word& w, const Rat& c) {
  if (c == 0) return;
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_.emplace(w, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rat FreePoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Rat(0) : it->second;
}

int FreePoly::degree() const {
  if (terms_.empty()) return -1;
  // Degree-lex order puts the longest words last.
  return static_cast<int>(terms_.rbegin()->first.size());
}

FreePoly& FreePoly::operator+=(const FreePoly& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

FreePoly& FreePoly::operator-=(const FreePoly& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

FreePoly& FreePoly::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, coeff] : terms_) coeff *= c;
  return *this;
}

FreePoly FreePoly::operator-() const {
  FreePoly r = *this;
  for (auto& [w, c] : r.terms_) c = -c;
  return r;
}

FreePoly free_mul(const FreePoly& a, const FreePoly& b) {
  FreePoly r;
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      r.add_term(w, ca * cb);
    }
  }
  return r;
}

FreePoly jordan_prod(const FreePoly& a, const FreePoly& b) {
  return free_mul(a, b) + free_mul(b, a);
}

FreePoly lie_bracket(const FreePoly& a, const FreePoly& b) {
  return free_mul(a, b) - free_mul(b, a);
}

std::vector<uint32_t> generators_of(const FreePoly& f) {
  std::set<uint32_t> gens;
  for (const auto& [w, c] : f.terms()) gens.insert(w.begin(), w.end());
  return {gens.begin(), gens.end()};
}

int degree_in(const FreePoly& f, uint32_t var) {
  int deg = -1;
  for (const auto& [w, c] : f.terms()) {
    int n = static_cast<int>(std::count(w.begin(), w.end(), var));
    if (deg == -1)
      deg = n;
    else if (deg != n)
      return -1;
  }
  return deg;
}

FreePoly substitute(const FreePoly& f,
                    const std::map<uint32_t, FreePoly>& images) {
  for (uint32_t g : generators_of(f)) {
    if (!images.count(g))
      throw std::invalid_argument("substitute: no image for generator x" +
                                  std::to_string(g));
  }
  FreePoly r;
  for (const auto& [w, c] : f.terms()) {
    FreePoly prod = FreePoly::constant(c);
    for (uint32_t letter : w) prod = free_mul(prod, images.at(letter));
    r += prod;
  }
  return r;
}

FreePoly partial_linearize(const FreePoly& f, uint32_t var,
                           const std::vector<uint32_t>& fresh) {
  int d = degree_in(f, var);
  if (d <= 0)
    throw std::invalid_argument(
        "partial_linearize: polynomial is not homogeneous of positive degree "
        "in x" +
        std::to_string(var));
  if (static_cast<int>(fresh.size()) != d)
    throw std::invalid_argument(
        "partial_linearize: need exactly " + std::to_string(d) +
        " fresh generators, got " + std::to_string(fresh.size()));
  std::set<uint32_t> seen(fresh.begin(), fresh.end());
  if (seen.size() != fresh.size())
    throw std::invalid_argument("partial_linearize: fresh generators repeat");
  auto occurring = generators_of(f);
  for (uint32_t g : fresh)
    if (std::binary_search(occurring.begin(), occurring.end(), g))
      throw std::invalid_argument("partial_linearize: fresh generator x" +
                                  std::to_string(g) + " occurs in the input");

  // Multilinear component of substituting var -> sum of fresh generators:
  // each occurrence of var receives a distinct fresh generator, summed over
  // all assignments, i.e. over permutations of `fresh`.
  FreePoly r;
  std::vector<size_t> positions;
  std::vector<uint32_t> perm(fresh);
  for (const auto& [w, c] : f.terms()) {
    positions.clear();
    for (size_t i = 0; i < w.size(); ++i)
      if (w[i] == var) positions.push_back(i);
    std::sort(perm.begin(), perm.end());
    do {
      Word nw = w;
      for (size_t i = 0; i < positions.size(); ++i) nw[positions[i]] = perm[i];
      r.add_term(nw, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return r;
}

TIdealGenerator make_tideal_generator(std::string name, const FreePoly& f) {
  if (f.is_zero())
    throw std::invalid_argument("make_tideal_generator: zero polynomial");
  TIdealGenerator gen;
  gen.name = std::move(name);
  gen.generator = f;

  // Multihomogeneous components, keyed by the multidegree of each word.
  std::map<std::map<uint32_t, int>, FreePoly> components;
  for (const auto& [w, c] : f.terms()) {
    std::map<uint32_t, int> key;
    for (uint32_t letter : w) key[letter]++;
    components[key].add_term(w, c);
  }

  uint32_t next_fresh = 0;
  for (uint32_t g : generators_of(f)) next_fresh = std::max(next_fresh, g);
  ++next_fresh;

  for (auto& [key, comp] : components) {
    gen.family.push_back(comp);
    FreePoly cur = comp;
    bool multilinear = true;
    for (const auto& [var, deg] : key) {
      if (deg < 2) continue;
      multilinear = false;
      std::vector<uint32_t> fresh(deg);
      std::iota(fresh.begin(), fresh.end(), next_fresh);
      next_fresh += deg;
      cur = partial_linearize(cur, var, fresh);
      gen.family.push_back(cur);
    }
    gen.multilinear.push_back(gen.family.size() - 1);
    if (multilinear) {
      // The component itself is already multilinear; it was just pushed.
      continue;
    }
  }
  return gen;
}

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, size_t at) const {
    throw std::invalid_argument("parse error at position " +
                                std::to_string(at) + ": " + msg);
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }

  bool eat(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  FreePoly parse_expr() {
    FreePoly acc = parse_term();
    for (;;) {
      if (eat('+'))
        acc += parse_term();
      else if (eat('-'))
        acc -= parse_term();
      else
        break;
    }
    return acc;
  }

  FreePoly parse_term() {
    FreePoly acc = parse_factor();
    while (eat('*')) acc = free_mul(acc, parse_factor());
    return acc;
  }

  FreePoly parse_factor() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input", pos);
    char c = s[pos];
    if (c == '-') {
      ++pos;
      return -parse_factor();
    }
    if (c == '(') {
      ++pos;
      FreePoly e = parse_expr();
      if (!eat(')')) fail("expected ')'", pos);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)))
      return FreePoly::constant(parse_rational());
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
    fail(std::string("unexpected character '") + c + "'", pos);
  }

  BigInt parse_uint() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected integer", pos);
    size_t st = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    return BigInt(s.substr(st, pos - st));
  }

  Rat parse_rational() {
    BigInt num = parse_uint();
    if (eat('/')) {
      size_t dpos = pos;
      BigInt den = parse_uint();
      if (den == 0) fail("zero denominator", dpos);
      return Rat(num, den);
    }
    return Rat(num);
  }

  FreePoly parse_name() {
    size_t st = pos;
    while (pos < s.size() &&
           std::isalnum(static_cast<unsigned char>(s[pos])))
      ++pos;
    std::string name = s.substr(st, pos - st);
    if (name == "jord" || name == "comm") {
      if (!eat('(')) fail("expected '(' after '" + name + "'", pos);
      FreePoly a = parse_expr();
      if (!eat(',')) fail("expected ',' in " + name + "(..,..)", pos);
      FreePoly b = parse_expr();
      if (!eat(')')) fail("expected ')'", pos);
      return name == "jord" ? jordan_prod(a, b) : lie_bracket(a, b);
    }
    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = std::all_of(name.begin() + 1, name.end(), [](char ch) {
        return std::isdigit(static_cast<unsigned char>(ch));
      });
      if (digits) {
        BigInt idx(name.substr(1));
        if (idx >= 1 && idx <= 1000000) {
          return FreePoly::generator(static_cast<uint32_t>(idx));
        }
      }
    }
    fail("unknown generator or function '" + name + "'", st);
  }
};

}  // namespace

FreePoly parse_poly(const std::string& text) {
  Parser p{text};
  FreePoly r = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input", p.pos);
  return r;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += "*";
    out += "x" + std::to_string(w[i]);
  }
  return out;
}

std::string to_string(const FreePoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : f.terms()) {
    Rat a = c < 0 ? Rat(-c) : c;
    if (first) {
      if (c < 0) out += "-";
      first = false;
    } else {
      out += (c < 0) ? " - " : " + ";
    }
    if (w.empty()) {
      out += rat_to_string(a);
    } else if (a == 1) {
      out += to_string(w);
    } else {
      out += rat_to_string(a) + "*" + to_string(w);
    }
  }
  return out;
}

}  // namespace jwb::freealg
