#include "ncfr/word.hpp"

#include <algorithm>
#include <limits>

#include <json.hpp>

#include "ncfr/errors.hpp"

namespace ncfr {

namespace {

void check_alphabet(int d) {
  if (d < 1) throw Error(ErrorKind::Config, "alphabet size must be positive, got " + std::to_string(d));
}

void check_same_alphabet(const Word& a, const Word& b) {
  if (a.alphabet() != b.alphabet()) {
    throw Error(ErrorKind::AlphabetMismatch, "words over alphabets of size " +
                                                 std::to_string(a.alphabet()) + " and " +
                                                 std::to_string(b.alphabet()));
  }
}

bool is_prefix(const Word& prefix, const Word& w) {
  if (prefix.size() > w.size()) return false;
  return std::equal(prefix.letters().begin(), prefix.letters().end(), w.letters().begin());
}

}  // namespace

Word::Word(int d) : d_(d) { check_alphabet(d); }

Word::Word(int d, std::vector<int> letters) : d_(d), letters_(std::move(letters)) {
  check_alphabet(d);
  for (int a : letters_) {
    if (a < 1 || a > d) {
      throw Error(ErrorKind::Config,
                  "letter " + std::to_string(a) + " outside [1, " + std::to_string(d) + "]");
    }
  }
}

Word Word::slice(int pos, int len) const {
  auto first = letters_.begin() + pos;
  return Word(d_, std::vector<int>(first, first + len));
}

std::string Word::to_string() const {
  if (d_ <= 9) {
    std::string out;
    out.reserve(letters_.size());
    for (int a : letters_) out.push_back(static_cast<char>('0' + a));
    return out;
  }
  return nlohmann::json(letters_).dump();
}

Word Word::parse(std::string_view text, int d) {
  check_alphabet(d);
  std::vector<int> letters;
  if (!text.empty() && text.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, "bad word '" + std::string(text) + "': " + e.what());
    }
    if (!j.is_array()) throw Error(ErrorKind::Parse, "word must be a JSON array");
    for (const auto& x : j) {
      if (!x.is_number_integer()) throw Error(ErrorKind::Parse, "word letters must be integers");
      letters.push_back(x.get<int>());
    }
  } else {
    if (d > 9) {
      throw Error(ErrorKind::Parse, "digit-string words need d <= 9; use a JSON array");
    }
    for (char c : text) {
      if (c < '1' || c > '9') {
        throw Error(ErrorKind::Parse, "bad letter '" + std::string(1, c) + "' in word");
      }
      letters.push_back(c - '0');
    }
  }
  try {
    return Word(d, std::move(letters));
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

std::strong_ordering Word::operator<=>(const Word& other) const {
  if (auto c = letters_.size() <=> other.letters_.size(); c != 0) return c;
  if (auto c = letters_ <=> other.letters_; c != 0) return c;
  return d_ <=> other.d_;
}

Index level_size(int d, int k) {
  check_alphabet(d);
  if (k < 0) throw Error(ErrorKind::Config, "negative level");
  Index n = 1;
  for (int i = 0; i < k; ++i) {
    if (n > std::numeric_limits<Index>::max() / d) {
      throw Error(ErrorKind::Config, "level size overflows");
    }
    n *= d;
  }
  return n;
}

Index words_up_to(int d, int depth) {
  Index total = 0;
  for (int k = 0; k <= depth; ++k) total += level_size(d, k);
  return total;
}

std::vector<Word> enumerate_level(int d, int k, int max_depth) {
  check_alphabet(d);
  if (k < 0) throw Error(ErrorKind::Config, "negative level");
  if (k > max_depth) {
    throw Error(ErrorKind::Config, "level " + std::to_string(k) + " exceeds maximum depth " +
                                       std::to_string(max_depth));
  }
  const Index count = level_size(d, k);
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) out.push_back(word_at(d, k, i));
  return out;
}

WordRelation relate(const Word& w, const Word& v) {
  check_same_alphabet(w, v);
  if (w == v) return Equal{};
  if (is_prefix(w, v)) return RightExtension{v.slice(w.size(), v.size() - w.size())};
  if (is_prefix(v, w)) return LeftAdjointExtension{w.slice(v.size(), w.size() - v.size())};
  return Orthogonal{};
}

Word concat(const Word& u, const Word& v) {
  check_same_alphabet(u, v);
  std::vector<int> letters(u.letters().begin(), u.letters().end());
  letters.insert(letters.end(), v.letters().begin(), v.letters().end());
  return Word(u.alphabet(), std::move(letters));
}

LevelIndex level_index(const Word& w) {
  Index offset = 0;
  for (int a : w.letters()) offset = offset * w.alphabet() + (a - 1);
  return {w.size(), offset};
}

Word word_at(int d, int level, Index offset) {
  if (offset < 0 || offset >= level_size(d, level)) {
    throw Error(ErrorKind::Config, "offset out of range for level");
  }
  std::vector<int> letters(static_cast<std::size_t>(level));
  for (int j = level - 1; j >= 0; --j) {
    letters[static_cast<std::size_t>(j)] = static_cast<int>(offset % d) + 1;
    offset /= d;
  }
  return Word(d, std::move(letters));
}

Index global_index(const Word& w) {
  const auto [level, offset] = level_index(w);
  return (level == 0 ? 0 : words_up_to(w.alphabet(), level - 1)) + offset;
}

}  // namespace ncfr
