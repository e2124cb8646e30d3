#pragma once

// A line-oriented script language over S(𝒜,G). Directives set the atoms,
// label groups and φ; statements bind values or assert relations:
//
//   atoms p q
//   group Z2 = cyclic 2
//   phi card 1/2
//   a = pu {1:[p], 0:[q]}
//   assert dphi(a, id) == 1/2
//
// `;` separates statements on one line and `#` starts a comment.

#include <cctype>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "l0/escape.hpp"
#include "l0/io.hpp"
#include "l0/positive_type.hpp"
#include "l0/pugroup.hpp"

namespace l0 {

struct ScriptValue;
using ScriptList = std::vector<ScriptValue>;

struct ScriptValue {
  std::variant<PUFunc, Elem, Rational, Complex, bool, std::shared_ptr<ScriptList>, std::shared_ptr<PosTypeFn>> v;
};

inline std::string to_string(const ScriptValue& x) {
  struct {
    std::string operator()(const PUFunc& a) const { return a.to_string(); }
    std::string operator()(const Elem& a) const { return a.to_string(); }
    std::string operator()(const Rational& a) const { return l0::to_string(a); }
    std::string operator()(const Complex& a) const { return l0::to_string(a); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::shared_ptr<ScriptList>& l) const {
      std::string out = "(";
      for (std::size_t i = 0; i < l->size(); ++i) out += (i ? ", " : "") + to_string((*l)[i]);
      return out + ")";
    }
    std::string operator()(const std::shared_ptr<PosTypeFn>& f) const {
      std::string out = "posfn[";
      for (std::size_t i = 0; i < f->values().size(); ++i) out += (i ? ", " : "") + l0::to_string(f->values()[i]);
      return out + "]";
    }
  } visit;
  return std::visit(visit, x.v);
}

class ScriptRunner {
 public:
  explicit ScriptRunner(std::ostream& out) : out_(out) {}

  /// Runs a whole script; returns the number of assertions checked.
  int run(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      for (const auto& stmt : split_statements(line)) execute(stmt);
    }
    return asserts_;
  }

 private:
  // --- tokens -------------------------------------------------------------
  struct Token {
    enum Kind { kWord, kPunct, kEnd } kind;
    std::string text;
  };

  static std::vector<std::string> split_statements(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : line) {
      if (c == '{' || c == '(' || c == '[') ++depth;
      if (c == '}' || c == ')' || c == ']') --depth;
      if (c == ';' && depth == 0) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    out.push_back(cur);
    std::vector<std::string> trimmed;
    for (auto& s : out) {
      auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      auto e = s.find_last_not_of(" \t\r");
      trimmed.push_back(s.substr(b, e - b + 1));
    }
    return trimmed;
  }

  static bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '/' || c == '-' || c == '+' ||
           static_cast<unsigned char>(c) >= 0x80;
  }

  std::vector<Token> tokenize(const std::string& s) const {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if ((c == '=' || c == '!' || c == '<') && i + 1 < s.size() && s[i + 1] == '=') {
        out.push_back({Token::kPunct, s.substr(i, 2)});
        i += 2;
        continue;
      }
      if (std::string("()[]{},:=.@").find(c) != std::string::npos) {
        out.push_back({Token::kPunct, std::string(1, c)});
        ++i;
        continue;
      }
      if (word_char(c)) {
        std::size_t j = i;
        while (j < s.size() && word_char(s[j])) ++j;
        out.push_back({Token::kWord, s.substr(i, j - i)});
        i = j;
        continue;
      }
      fail("unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back({Token::kEnd, ""});
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("line " + std::to_string(line_no_) + ": " + msg);
  }

  // --- statements ---------------------------------------------------------
  void execute(const std::string& stmt) {
    std::istringstream words(stmt);
    std::string head;
    words >> head;
    try {
      if (head == "atoms") return directive_atoms(words);
      if (head == "group") return directive_group(stmt.substr(5));
      if (head == "phi") return directive_phi(stmt.substr(3));
      if (head == "assert") return statement_assert(stmt.substr(6), stmt);
      auto eq = stmt.find('=');
      if (eq == std::string::npos || (eq + 1 < stmt.size() && stmt[eq + 1] == '=')) {
        fail("expected a directive, a binding 'x = expr' or 'assert'");
      }
      std::string name = stmt.substr(0, eq);
      name.erase(name.find_last_not_of(" \t") + 1);
      if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) fail("bad binding name '" + name + "'");
      ScriptValue v = evaluate(stmt.substr(eq + 1));
      out_ << name << " = " << to_string(v) << "\n";
      vars_.insert_or_assign(name, std::move(v));
    } catch (const AssertionFailure&) {
      throw;
    } catch (const Error& e) {
      const std::string what = e.what();
      const std::string prefix = "line " + std::to_string(line_no_) + ":";
      if (what.rfind(prefix, 0) == 0) throw;
      rethrow_with_line(e);
    }
  }

  [[noreturn]] void rethrow_with_line(const Error& e) const {
    const std::string msg = "line " + std::to_string(line_no_) + ": " + e.what();
    switch (e.exit_code()) {
      case 3: throw PreconditionError(msg);
      case 5: throw VerificationError(msg);
      default: throw InputError(msg);
    }
  }

  void directive_atoms(std::istringstream& words) {
    std::vector<std::string> names;
    for (std::string w; words >> w;) names.push_back(w);
    alg_ = FiniteAlgebra::make(names);
    vars_.clear();
  }

  void directive_group(const std::string& rest) {
    auto eq = rest.find('=');
    if (eq == std::string::npos) fail("expected 'group NAME = cyclic K | int | rational | s3 | json {...}'");
    std::string name = rest.substr(0, eq);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    std::istringstream decl(rest.substr(eq + 1));
    std::string kind;
    decl >> kind;
    GroupPtr g;
    if (kind == "cyclic") {
      std::string k;
      decl >> k;
      Rational r = parse_rational(k);
      if (r.get_den() != 1) fail("cyclic order must be an integer");
      g = Group::cyclic(r.get_num().get_si());
    } else if (kind == "int") {
      g = Group::integers();
    } else if (kind == "rational") {
      g = Group::rationals();
    } else if (kind == "s3") {
      g = symmetric_group_3();
    } else if (kind == "json") {
      std::string body;
      std::getline(decl, body);
      g = group_from_json(parse_json(body, "group record"));
    } else {
      fail("unknown group kind '" + kind + "'");
    }
    groups_.insert_or_assign(name, g);
    current_ = g;
  }

  void directive_phi(const std::string& rest) {
    std::istringstream decl(rest);
    std::string kind;
    decl >> kind;
    need_algebra();
    if (kind == "card") {
      std::string c;
      decl >> c;
      Rational scale = parse_rational(c);
      phi_ = std::make_shared<SetFunc>(SetFunc::measure(alg_, std::vector<Rational>(static_cast<std::size_t>(alg_->size()), scale)));
    } else if (kind == "json") {
      std::string body;
      std::getline(decl, body);
      phi_ = std::make_shared<SetFunc>(setfunc_from_json(parse_json(body, "phi record"), "phi", alg_));
    } else {
      fail("expected 'phi card C' or 'phi json {...}'");
    }
  }

  void statement_assert(const std::string& rest, const std::string& whole) {
    auto toks = tokenize(rest);
    std::size_t pos = 0;
    ScriptValue lhs = parse_expr(toks, pos);
    ++asserts_;
    if (toks[pos].kind == Token::kEnd) {
      auto* b = std::get_if<bool>(&lhs.v);
      if (!b) fail("assert without a relation needs a boolean expression");
      if (!*b) throw AssertionFailure("line " + std::to_string(line_no_) + ": " + whole + " (value false)");
      out_ << "ok: " << whole << "\n";
      return;
    }
    const std::string op = toks[pos].text;
    if (op != "==" && op != "!=" && op != "<=") fail("expected ==, != or <=");
    ++pos;
    ScriptValue rhs = parse_expr(toks, pos);
    if (toks[pos].kind != Token::kEnd) fail("trailing input after assertion");
    bool holds;
    if (op == "<=") {
      holds = less_equal(lhs, rhs);
    } else {
      holds = equal(lhs, rhs) == (op == "==");
    }
    if (!holds) {
      throw AssertionFailure("line " + std::to_string(line_no_) + ": " + whole + "\n  lhs = " + to_string(lhs) +
                             "\n  rhs = " + to_string(rhs));
    }
    out_ << "ok: " << whole << "\n";
  }

  bool equal(const ScriptValue& a, const ScriptValue& b) const {
    auto as_complex = [](const ScriptValue& x) -> std::optional<Complex> {
      if (auto* r = std::get_if<Rational>(&x.v)) return Complex(*r);
      if (auto* c = std::get_if<Complex>(&x.v)) return *c;
      return std::nullopt;
    };
    if (auto ca = as_complex(a), cb = as_complex(b); ca && cb) return *ca == *cb;
    if (a.v.index() != b.v.index()) fail("cannot compare " + to_string(a) + " with " + to_string(b));
    if (auto* x = std::get_if<PUFunc>(&a.v)) return *x == std::get<PUFunc>(b.v);
    if (auto* x = std::get_if<Elem>(&a.v)) return *x == std::get<Elem>(b.v);
    if (auto* x = std::get_if<bool>(&a.v)) return *x == std::get<bool>(b.v);
    return to_string(a) == to_string(b);
  }

  bool less_equal(const ScriptValue& a, const ScriptValue& b) const {
    if (auto* x = std::get_if<Rational>(&a.v)) {
      if (auto* y = std::get_if<Rational>(&b.v)) return *x <= *y;
    }
    if (auto* x = std::get_if<Elem>(&a.v)) {
      if (auto* y = std::get_if<Elem>(&b.v)) return leq(*x, *y);
    }
    if (auto* x = std::get_if<PUFunc>(&a.v)) {
      if (auto* y = std::get_if<PUFunc>(&b.v)) return pu_leq(*x, *y);
    }
    fail("<= compares rationals, elements, or ℚ-labeled partitions");
  }

  // --- expressions --------------------------------------------------------
  ScriptValue evaluate(const std::string& text) {
    auto toks = tokenize(text);
    std::size_t pos = 0;
    ScriptValue v = parse_expr(toks, pos);
    if (toks[pos].kind != Token::kEnd) fail("trailing input '" + toks[pos].text + "'");
    return v;
  }

  void expect(const std::vector<Token>& t, std::size_t& pos, const std::string& p) const {
    if (t[pos].text != p || t[pos].kind != Token::kPunct) fail("expected '" + p + "' near '" + t[pos].text + "'");
    ++pos;
  }

  void need_algebra() const {
    if (!alg_) fail("declare 'atoms ...' first");
  }
  const GroupPtr& need_group() const {
    if (!current_) fail("declare a group first");
    return current_;
  }
  const SetFunc& need_phi() const {
    if (!phi_) fail("declare 'phi ...' first");
    return *phi_;
  }

  template <class T>
  const T& as(const ScriptValue& v, const char* what) const {
    auto* p = std::get_if<T>(&v.v);
    if (!p) fail(std::string("expected ") + what + ", got " + to_string(v));
    return *p;
  }

  std::string raw(const std::vector<Token>& t, std::size_t& pos) const {
    if (t[pos].kind != Token::kWord) fail("expected a name near '" + t[pos].text + "'");
    return t[pos++].text;
  }

  Mask parse_atom_list(const std::vector<Token>& t, std::size_t& pos) const {
    need_algebra();
    expect(t, pos, "[");
    Mask m = 0;
    while (t[pos].text != "]") {
      m |= Mask{1} << alg_->atom_index(raw(t, pos));
      if (t[pos].text == ",") ++pos;
    }
    ++pos;
    return m;
  }

  std::set<GroupElement> parse_element_set(const std::vector<Token>& t, std::size_t& pos, const Group& G) const {
    expect(t, pos, "{");
    std::set<GroupElement> out;
    while (t[pos].text != "}") {
      out.insert(G.parse(raw(t, pos)));
      if (t[pos].text == ",") ++pos;
    }
    ++pos;
    return out;
  }

  std::vector<ScriptValue> parse_args(const std::vector<Token>& t, std::size_t& pos) {
    expect(t, pos, "(");
    std::vector<ScriptValue> args;
    while (t[pos].text != ")") {
      args.push_back(parse_expr(t, pos));
      if (t[pos].text == ",") {
        ++pos;
      } else if (t[pos].text != ")") {
        fail("expected ',' or ')'");
      }
    }
    ++pos;
    return args;
  }

  ScriptValue parse_expr(const std::vector<Token>& t, std::size_t& pos) {
    ScriptValue v = parse_primary(t, pos);
    while (t[pos].kind == Token::kPunct && t[pos].text == ".") {
      ++pos;
      const std::string idx = raw(t, pos);
      auto* l = std::get_if<std::shared_ptr<ScriptList>>(&v.v);
      if (!l) fail("'." + idx + "' applies to tuples");
      std::size_t i = 0;
      try {
        i = std::stoul(idx);
      } catch (...) {
        fail("bad tuple index '" + idx + "'");
      }
      if (i >= (*l)->size()) fail("tuple index " + idx + " out of range");
      ScriptValue next = (**l)[i];
      v = std::move(next);
    }
    return v;
  }

  static ScriptValue list(std::vector<ScriptValue> xs) {
    return {std::make_shared<ScriptList>(std::move(xs))};
  }

  ScriptValue parse_primary(const std::vector<Token>& t, std::size_t& pos) {
    const Token& tok = t[pos];
    if (tok.kind == Token::kEnd) fail("unexpected end of expression");
    if (tok.text == "[") return {Elem(alg_, parse_atom_list(t, pos))};
    if (tok.kind != Token::kWord) fail("unexpected '" + tok.text + "'");
    const std::string word = tok.text;
    ++pos;

    if (word == "pu") {
      need_algebra();
      GroupPtr G = need_group();
      if (t[pos].kind == Token::kWord) {
        auto it = groups_.find(t[pos].text);
        if (it == groups_.end()) fail("unknown group '" + t[pos].text + "'");
        G = it->second;
        ++pos;
      }
      expect(t, pos, "{");
      LabelMap labels;
      while (t[pos].text != "}") {
        GroupElement g = G->parse(raw(t, pos));
        expect(t, pos, ":");
        labels[g] |= parse_atom_list(t, pos);
        if (t[pos].text == ",") ++pos;
      }
      ++pos;
      return {PUFunc(alg_, G, labels)};
    }
    if (word == "id") {
      need_algebra();
      return {pu_identity(alg_, need_group())};
    }
    if (word == "zero") return {Elem::zero(alg_)};
    if (word == "one") return {Elem::one(alg_)};
    if (word == "true" || word == "false") return {word == "true"};

    if (t[pos].text == "(") return call(word, t, pos);

    if (auto it = vars_.find(word); it != vars_.end()) return it->second;
    if (std::isdigit(static_cast<unsigned char>(word[0])) || word[0] == '-') {
      try {
        return {parse_rational(word)};
      } catch (const InputError&) {
        return {parse_complex(word)};
      }
    }
    fail("undefined identifier '" + word + "'");
  }

  ScriptValue call(const std::string& fn, const std::vector<Token>& t, std::size_t& pos) {
    need_algebra();
    // functions whose arguments are group elements or element sets, not values
    if (fn == "eta") {
      expect(t, pos, "(");
      const GroupPtr& G = need_group();
      GroupElement g = G->parse(raw(t, pos));
      expect(t, pos, ")");
      return {eta(alg_, G, g)};
    }
    if (fn == "sigma") {
      expect(t, pos, "(");
      const GroupPtr& G = need_group();
      expect(t, pos, "{");
      std::vector<Elem> cells;
      std::map<Mask, GroupElement> labels;
      while (t[pos].text != "}") {
        Mask cell = parse_atom_list(t, pos);
        expect(t, pos, ":");
        labels[cell] = G->parse(raw(t, pos));
        cells.emplace_back(alg_, cell);
        if (t[pos].text == ",") ++pos;
      }
      ++pos;
      expect(t, pos, ")");
      return {sigma_q(PartitionOfUnity(alg_, cells), G, labels)};
    }
    if (fn == "support") {
      expect(t, pos, "(");
      PUFunc a = as<PUFunc>(parse_expr(t, pos), "a partition");
      expect(t, pos, ",");
      auto T = parse_element_set(t, pos, *a.group());
      expect(t, pos, ")");
      return {support(a, T)};
    }
    if (fn == "posfn") {
      expect(t, pos, "(");
      expect(t, pos, "[");
      std::vector<Complex> values;
      while (t[pos].text != "]") {
        values.push_back(parse_complex(raw(t, pos)));
        if (t[pos].text == ",") ++pos;
      }
      ++pos;
      expect(t, pos, ")");
      return {std::make_shared<PosTypeFn>(need_group(), values)};
    }

    auto args = parse_args(t, pos);
    auto arity = [&](std::size_t n) {
      if (args.size() != n) fail(fn + " takes " + std::to_string(n) + " argument(s)");
    };
    auto pu = [&](std::size_t i) -> const PUFunc& { return as<PUFunc>(args[i], "a partition"); };
    auto rat = [&](std::size_t i) -> const Rational& { return as<Rational>(args[i], "a rational"); };

    if (fn == "mul") {
      if (args.empty()) fail("mul needs at least one argument");
      PUFunc acc = pu(0);
      for (std::size_t i = 1; i < args.size(); ++i) acc = pu_multiply(acc, pu(i));
      return {acc};
    }
    if (fn == "inv") {
      arity(1);
      return {pu_inverse(pu(0))};
    }
    if (fn == "pow") {
      arity(2);
      const Rational& k = rat(1);
      if (k.get_den() != 1 || sgn(k) < 0) fail("pow needs a nonnegative integer exponent");
      return {pu_power(pu(0), k.get_num().get_si())};
    }
    if (fn == "dphi") {
      arity(2);
      return {d_phi(need_phi(), pu(0), pu(1))};
    }
    if (fn == "phi") {
      arity(1);
      return {need_phi()(as<Elem>(args[0], "an element"))};
    }
    if (fn == "offid") {
      arity(1);
      return {off_identity(pu(0))};
    }
    if (fn == "pisharp") {
      // π(g) = η(g mod k) into the current group ℤ_k
      arity(1);
      const PUFunc& a = pu(0);
      const GroupPtr& H = need_group();
      if (H->kind() != GroupKind::kCyclic) fail("pisharp reduces into the current cyclic group");
      const auto& src = a.group();
      if (src->kind() != GroupKind::kIntegers && src->kind() != GroupKind::kCyclic) {
        fail("pisharp reduces ℤ- or ℤ_m-labeled partitions");
      }
      if (src->kind() == GroupKind::kCyclic && src->order() % H->order() != 0) {
        fail("ℤ_m → ℤ_k reduction needs k | m");
      }
      const long k = H->order();
      std::set<GroupElement> domain = a.support_labels();
      for (const auto& x : a.support_labels()) {
        for (const auto& y : a.support_labels()) domain.insert(src->mul(x, y));
      }
      domain.insert(src->identity());
      auto pi = PuHomTable::from_function(src, alg_, H, domain, [&](const GroupElement& g) {
        long r = g.as_long() % k;
        return eta(alg_, H, GroupElement(r < 0 ? r + k : r));
      });
      return {pi_sharp(pi, a)};
    }
    if (fn == "fbullet") {
      arity(1);
      return {length_bullet(pu(0), rationals_)};
    }
    if (fn == "gamma_decompose") {
      arity(3);
      auto [a, b] = gamma_decompose(pu(0), as<Elem>(args[1], "an element"), as<Elem>(args[2], "an element"));
      return list({{a}, {b}});
    }
    if (fn == "gamma_contains") {
      arity(2);
      return {gamma_contains(as<Elem>(args[0], "an element"), pu(1))};
    }
    if (fn == "trap_decompose") {
      arity(2);
      const PUFunc& a = pu(0);
      auto V = Neighborhood::finite(a.group(), {a.group()->identity()});
      std::vector<ScriptValue> out;
      for (auto& f : trap_decompose(need_phi(), a, V, rat(1))) out.push_back({f});
      return list(std::move(out));
    }
    if (fn == "lift") {
      arity(2);
      const auto& f = as<std::shared_ptr<PosTypeFn>>(args[0], "a positive-type function");
      return {pos_type_lift(*f, need_phi(), pu(1))};
    }
    if (fn == "leq") {
      arity(2);
      return {pu_leq(pu(0), pu(1))};
    }
    if (fn == "add") {
      arity(2);
      return {pu_add(pu(0), pu(1))};
    }
    if (fn == "meet" || fn == "join") {
      arity(2);
      const Elem& a = as<Elem>(args[0], "an element");
      const Elem& b = as<Elem>(args[1], "an element");
      return {fn == "meet" ? meet(a, b) : join(a, b)};
    }
    if (fn == "not") {
      arity(1);
      return {complement(as<Elem>(args[0], "an element"))};
    }
    fail("unknown function '" + fn + "'");
  }

  std::ostream& out_;
  int line_no_ = 0;
  int asserts_ = 0;
  AlgebraPtr alg_;
  GroupPtr current_;
  GroupPtr rationals_ = Group::rationals();
  std::map<std::string, GroupPtr> groups_;
  std::shared_ptr<SetFunc> phi_;
  std::map<std::string, ScriptValue> vars_;
};

}  // namespace l0
