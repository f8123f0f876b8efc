#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ncfr {

using Index = std::ptrdiff_t;

/// Default cap on word length; bounds the d^k growth of level sizes.
inline constexpr int kDefaultMaxDepth = 16;

/// An element of the free monoid on letters 1..d.
///
/// Letters are stored explicitly so that alphabets with d > 9 behave exactly
/// like small ones. The alphabet size travels with the word so that mixing
/// words from different alphabets is caught at the call site.
class Word {
 public:
  /// The empty word over an alphabet of size d.
  explicit Word(int d);
  Word(int d, std::vector<int> letters);

  int alphabet() const noexcept { return d_; }
  int size() const noexcept { return static_cast<int>(letters_.size()); }
  bool empty() const noexcept { return letters_.empty(); }
  std::span<const int> letters() const noexcept { return letters_; }
  int operator[](int i) const { return letters_[static_cast<std::size_t>(i)]; }

  /// Sub-word of letters [pos, pos + len).
  Word slice(int pos, int len) const;

  /// Canonical text form: digits for d <= 9, otherwise a JSON array.
  std::string to_string() const;

  /// Accepts a digit string (d <= 9) or a JSON array of integers.
  static Word parse(std::string_view text, int d);

  bool operator==(const Word&) const = default;
  /// Orders by length first, then lexicographically (leftmost letter most
  /// significant). This is the Fock basis order used everywhere.
  std::strong_ordering operator<=>(const Word& other) const;

 private:
  int d_;
  std::vector<int> letters_;
};

/// v = w x with |x| >= 1: L_w^* L_v = L_x.
struct RightExtension {
  Word x;
  bool operator==(const RightExtension&) const = default;
};
/// w = v y with |y| >= 1: L_w^* L_v = L_y^*.
struct LeftAdjointExtension {
  Word y;
  bool operator==(const LeftAdjointExtension&) const = default;
};
struct Equal {
  bool operator==(const Equal&) const = default;
};
struct Orthogonal {
  bool operator==(const Orthogonal&) const = default;
};

using WordRelation = std::variant<RightExtension, LeftAdjointExtension, Equal, Orthogonal>;

struct LevelIndex {
  int level;
  Index offset;
  bool operator==(const LevelIndex&) const = default;
};

/// d^k, checked against overflow.
Index level_size(int d, int k);
/// Number of words of length <= depth: sum_{k<=depth} d^k.
Index words_up_to(int d, int depth);

std::vector<Word> enumerate_level(int d, int k, int max_depth = kDefaultMaxDepth);
WordRelation relate(const Word& w, const Word& v);
Word concat(const Word& u, const Word& v);
LevelIndex level_index(const Word& w);
/// Inverse of level_index.
Word word_at(int d, int level, Index offset);
/// Position of w in the concatenation of levels 0, 1, 2, ...
Index global_index(const Word& w);

}  // namespace ncfr
