#pragma once

// Groups given by identity / multiply / inverse: Cayley tables, cyclic
// groups, the integers and the additive rationals. Elements of every kind
// are carried as exact rationals (table index, residue, integer, rational).

#include <compare>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "l0/error.hpp"
#include "l0/rational.hpp"

namespace l0 {

struct GroupElement {
  Rational value;

  GroupElement() = default;
  GroupElement(Rational v) : value(std::move(v)) { value.canonicalize(); }  // NOLINT
  GroupElement(long v) : value(v) {}                                        // NOLINT
  GroupElement(int v) : value(v) {}                                         // NOLINT

  bool is_integer() const { return value.get_den() == 1; }
  long as_long() const { return value.get_num().get_si(); }

  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.value == b.value; }
  friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
    return compare(a.value, b.value);
  }
};

enum class GroupKind { kTable, kCyclic, kIntegers, kRationals };

class Group;
using GroupPtr = std::shared_ptr<const Group>;

class Group {
 public:
  // Exhaustive axiom checks on tables are cubic; larger tables must come
  // from constructions that are groups by design.
  static constexpr std::size_t kMaxCheckedTable = 256;

  static GroupPtr table(std::vector<std::string> names, std::vector<std::vector<int>> mul,
                        std::vector<int> inv,
                        std::optional<std::vector<Rational>> length = std::nullopt,
                        bool trusted = false) {
    auto g = std::shared_ptr<Group>(new Group(GroupKind::kTable));
    g->names_ = std::move(names);
    g->mul_ = std::move(mul);
    g->inv_ = std::move(inv);
    g->order_ = static_cast<long>(g->names_.size());
    g->length_ = std::move(length);
    g->validate_table(trusted);
    if (g->length_) g->validate_length();
    return g;
  }

  static GroupPtr cyclic(long k, std::optional<std::vector<Rational>> length = std::nullopt) {
    if (k < 1) throw InputError("cyclic group order must be positive");
    auto g = std::shared_ptr<Group>(new Group(GroupKind::kCyclic));
    g->order_ = k;
    if (!length) {
      // word length with respect to the generator 1
      std::vector<Rational> word(static_cast<std::size_t>(k));
      for (long i = 0; i < k; ++i) word[static_cast<std::size_t>(i)] = std::min(i, k - i);
      length = std::move(word);
    }
    g->length_ = std::move(length);
    g->validate_length();
    return g;
  }

  static GroupPtr integers() { return std::shared_ptr<Group>(new Group(GroupKind::kIntegers)); }
  static GroupPtr rationals() { return std::shared_ptr<Group>(new Group(GroupKind::kRationals)); }

  GroupKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == GroupKind::kTable || kind_ == GroupKind::kCyclic; }
  long order() const { return order_; }

  GroupElement identity() const { return GroupElement(static_cast<long>(identity_)); }

  bool contains(const GroupElement& x) const {
    switch (kind_) {
      case GroupKind::kTable:
      case GroupKind::kCyclic:
        return x.is_integer() && sgn(x.value) >= 0 && x.value < order_;
      case GroupKind::kIntegers:
        return x.is_integer();
      case GroupKind::kRationals:
        return true;
    }
    return false;
  }

  void require(const GroupElement& x) const {
    if (!contains(x)) throw InputError("'" + to_string(x.value) + "' is not an element of " + describe());
  }

  GroupElement mul(const GroupElement& x, const GroupElement& y) const {
    switch (kind_) {
      case GroupKind::kTable:
        return GroupElement(static_cast<long>(
            mul_[static_cast<std::size_t>(x.as_long())][static_cast<std::size_t>(y.as_long())]));
      case GroupKind::kCyclic:
        return GroupElement((x.as_long() + y.as_long()) % order_);
      case GroupKind::kIntegers:
      case GroupKind::kRationals:
        return GroupElement(Rational(x.value + y.value));
    }
    return {};
  }

  GroupElement inv(const GroupElement& x) const {
    switch (kind_) {
      case GroupKind::kTable:
        return GroupElement(static_cast<long>(inv_[static_cast<std::size_t>(x.as_long())]));
      case GroupKind::kCyclic:
        return GroupElement((order_ - x.as_long()) % order_);
      case GroupKind::kIntegers:
      case GroupKind::kRationals:
        return GroupElement(Rational(-x.value));
    }
    return {};
  }

  /// x^k for k >= 0.
  GroupElement power(const GroupElement& x, long k) const {
    GroupElement out = identity();
    const GroupElement base = k < 0 ? inv(x) : x;
    for (long i = 0; i < std::abs(k); ++i) out = mul(out, base);
    return out;
  }

  std::vector<GroupElement> elements() const {
    if (!is_finite()) throw InputError("cannot list the elements of an infinite group");
    std::vector<GroupElement> out;
    for (long i = 0; i < order_; ++i) out.emplace_back(i);
    return out;
  }

  /// Order of an element of a finite group.
  long element_order(const GroupElement& x) const {
    if (!is_finite()) throw InputError("element order requested in an infinite group");
    GroupElement p = x;
    long k = 1;
    while (!(p == identity())) {
      p = mul(p, x);
      ++k;
    }
    return k;
  }

  bool has_length() const {
    return length_.has_value() || kind_ == GroupKind::kIntegers || kind_ == GroupKind::kRationals;
  }

  /// Declared length; |x| on the integers and rationals.
  Rational length(const GroupElement& x) const {
    if (kind_ == GroupKind::kIntegers || kind_ == GroupKind::kRationals) return abs(x.value);
    if (!length_) throw InputError("group has no length function");
    return (*length_)[static_cast<std::size_t>(x.as_long())];
  }

  std::string format(const GroupElement& x) const {
    if (kind_ == GroupKind::kTable) return names_.at(static_cast<std::size_t>(x.as_long()));
    return to_string(x.value);
  }

  GroupElement parse(const std::string& text) const {
    if (kind_ == GroupKind::kTable) {
      for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == text) return GroupElement(static_cast<long>(i));
      }
      throw InputError("unknown group element '" + text + "'");
    }
    GroupElement g(parse_rational(text));
    require(g);
    return g;
  }

  std::string describe() const {
    switch (kind_) {
      case GroupKind::kTable: return "table group of order " + std::to_string(order_);
      case GroupKind::kCyclic: return "Z_" + std::to_string(order_);
      case GroupKind::kIntegers: return "Z";
      case GroupKind::kRationals: return "Q";
    }
    return "?";
  }

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<int>>& table_mul() const { return mul_; }
  const std::vector<int>& table_inv() const { return inv_; }
  const std::optional<std::vector<Rational>>& declared_length() const { return length_; }

  friend bool same_group(const Group& a, const Group& b) {
    return a.kind_ == b.kind_ && a.order_ == b.order_ && a.mul_ == b.mul_;
  }

 private:
  explicit Group(GroupKind k) : kind_(k) {}

  void validate_table(bool trusted) {
    const std::size_t n = names_.size();
    if (n == 0) throw InputError("group table is empty");
    if (mul_.size() != n || inv_.size() != n) throw InputError("group table dimensions disagree");
    for (const auto& row : mul_) {
      if (row.size() != n) throw InputError("group table is not square");
      for (int v : row) {
        if (v < 0 || static_cast<std::size_t>(v) >= n) throw InputError("group table entry out of range");
      }
    }
    std::set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != n) throw InputError("group element names must be distinct");
    std::optional<std::size_t> e;
    for (std::size_t i = 0; i < n && !e; ++i) {
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) {
        ok = mul_[i][x] == static_cast<int>(x) && mul_[x][i] == static_cast<int>(x);
      }
      if (ok) e = i;
    }
    if (!e) throw InputError("group table has no identity");
    identity_ = static_cast<long>(*e);
    for (std::size_t x = 0; x < n; ++x) {
      auto y = static_cast<std::size_t>(inv_[x]);
      if (y >= n || mul_[x][y] != static_cast<int>(*e) || mul_[y][x] != static_cast<int>(*e)) {
        throw InputError("inverse table wrong at '" + names_[x] + "'");
      }
    }
    if (trusted) return;
    if (n > kMaxCheckedTable) {
      throw CapacityError("group tables are checked exhaustively up to " +
                          std::to_string(kMaxCheckedTable) + " elements");
    }
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        const auto xy = static_cast<std::size_t>(mul_[x][y]);
        for (std::size_t z = 0; z < n; ++z) {
          if (mul_[xy][static_cast<std::size_t>(z)] != mul_[x][static_cast<std::size_t>(mul_[y][z])]) {
            throw InputError("group table is not associative at (" + names_[x] + "," + names_[y] +
                             "," + names_[z] + ")");
          }
        }
      }
    }
  }

  void validate_length() const {
    const auto& len = *length_;
    if (len.size() != static_cast<std::size_t>(order_)) throw InputError("length needs one value per element");
    const GroupElement e = identity();
    if (len[static_cast<std::size_t>(e.as_long())] != 0) throw InputError("length(e) must be 0");
    for (long x = 0; x < order_; ++x) {
      const auto& lx = len[static_cast<std::size_t>(x)];
      if (sgn(lx) < 0) throw InputError("length must be nonnegative");
      if (lx != len[static_cast<std::size_t>(inv(GroupElement(x)).as_long())]) {
        throw InputError("length must satisfy length(g⁻¹) = length(g)");
      }
      for (long y = 0; y < order_; ++y) {
        const auto xy = mul(GroupElement(x), GroupElement(y)).as_long();
        if (len[static_cast<std::size_t>(xy)] > lx + len[static_cast<std::size_t>(y)]) {
          throw InputError("length violates length(gh) <= length(g) + length(h)");
        }
      }
    }
  }

  GroupKind kind_;
  long order_ = 0;
  long identity_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> mul_;
  std::vector<int> inv_;
  std::optional<std::vector<Rational>> length_;
};

inline bool same_group(const GroupPtr& a, const GroupPtr& b) {
  return a == b || (a && b && same_group(*a, *b));
}

/// The symmetric group S₃ on {0,1,2} as a Cayley table; element names are
/// one-line permutation images.
inline GroupPtr symmetric_group_3() {
  std::vector<std::vector<int>> perms = {{0, 1, 2}, {1, 0, 2}, {0, 2, 1},
                                         {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
  auto index = [&](const std::vector<int>& p) {
    for (std::size_t i = 0; i < perms.size(); ++i) {
      if (perms[i] == p) return static_cast<int>(i);
    }
    return -1;
  };
  std::vector<std::string> names;
  std::vector<std::vector<int>> mul(6, std::vector<int>(6));
  std::vector<int> inv(6);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& p = perms[i];
    names.push_back(std::to_string(p[0]) + std::to_string(p[1]) + std::to_string(p[2]));
    std::vector<int> q(3);
    for (int k = 0; k < 3; ++k) q[static_cast<std::size_t>(p[static_cast<std::size_t>(k)])] = k;
    inv[i] = index(q);
    for (std::size_t j = 0; j < 6; ++j) {
      // (p∘r)(k) = p(r(k))
      std::vector<int> c(3);
      for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(perms[j][static_cast<std::size_t>(k)])];
      mul[i][j] = index(c);
    }
  }
  return Group::table(names, mul, inv);
}

}  // namespace l0
