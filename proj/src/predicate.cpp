#include "qbound/predicate.hpp"

#include <cctype>
#include <charconv>

#include "qbound/errors.hpp"

namespace qbound::ingest {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Predicate parse() {
    Predicate predicate;
    skip_space();
    if (at_end()) fail("empty predicate");
    predicate.atoms.push_back(atom());
    while (true) {
      skip_space();
      if (at_end()) break;
      const std::size_t start = pos_;
      const std::string word = identifier_or_empty();
      if (iequals(word, "AND")) {
        predicate.atoms.push_back(atom());
        continue;
      }
      pos_ = start;
      if (iequals(word, "OR")) fail("OR is not supported; only AND conjunctions are");
      fail("expected AND or end of input");
    }
    return predicate;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("predicate syntax error at offset " + std::to_string(pos_) + ": " + message);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(a[i])) !=
          std::toupper(static_cast<unsigned char>(b[i]))) {
        return false;
      }
    }
    return true;
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  }

  std::string identifier_or_empty() {
    if (!ident_start(peek())) return {};
    const std::size_t start = pos_;
    while (!at_end() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Atom atom() {
    skip_space();
    Atom result;
    result.offset = pos_;
    result.column = identifier_or_empty();
    if (result.column.empty()) fail("expected column name");
    if (iequals(result.column, "AND") || iequals(result.column, "OR")) {
      pos_ = result.offset;
      fail("expected column name, found keyword");
    }
    skip_space();
    result.op = comparison();
    skip_space();
    result.literal = literal();
    return result;
  }

  CompareOp comparison() {
    const char c = peek();
    const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    if (c == '=') { ++pos_; return CompareOp::Eq; }
    if (c == '!' && next == '=') { pos_ += 2; return CompareOp::Ne; }
    if (c == '<' && next == '=') { pos_ += 2; return CompareOp::Le; }
    if (c == '>' && next == '=') { pos_ += 2; return CompareOp::Ge; }
    if (c == '<') { ++pos_; return CompareOp::Lt; }
    if (c == '>') { ++pos_; return CompareOp::Gt; }
    fail("expected comparison operator (=, !=, <, <=, >, >=)");
  }

  Literal literal() {
    if (at_end()) fail("expected literal");
    if (peek() == '\'') return quoted();
    const std::size_t start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    bool digits = false;
    bool real = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) { ++pos_; digits = true; }
    if (peek() == '.') {
      real = true;
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) { ++pos_; digits = true; }
    }
    if (!digits) {
      pos_ = start;
      fail("expected number or quoted string");
    }
    if (peek() == 'e' || peek() == 'E') {
      real = true;
      ++pos_;
      if (peek() == '-' || peek() == '+') ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed exponent");
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    if (ident_char(peek())) fail("unexpected character after number");
    std::string_view token = text_.substr(start, pos_ - start);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    if (!real) {
      std::int64_t value = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec == std::errc() && ptr == token.data() + token.size()) return value;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      pos_ = start;
      fail("number out of range");
    }
    return value;
  }

  Literal quoted() {
    const std::size_t start = pos_;
    ++pos_;
    std::string value;
    while (true) {
      if (at_end()) {
        pos_ = start;
        fail("unterminated string literal");
      }
      const char c = text_[pos_++];
      if (c == '\'') {
        if (peek() == '\'') {
          value += '\'';
          ++pos_;
          continue;
        }
        return value;
      }
      value += c;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

template <typename T>
bool compare(const T& a, CompareOp op, const T& b) {
  switch (op) {
    case CompareOp::Eq: return a == b;
    case CompareOp::Ne: return a != b;
    case CompareOp::Lt: return a < b;
    case CompareOp::Le: return a <= b;
    case CompareOp::Gt: return a > b;
    case CompareOp::Ge: return a >= b;
  }
  return false;
}

}  // namespace

std::string_view to_string(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

Predicate parse_predicate(std::string_view text) { return Parser(text).parse(); }

BoundPredicate bind(const TableData& table, const Predicate& predicate) {
  BoundPredicate bound;
  for (const Atom& atom : predicate.atoms) {
    const auto index = table.find_column(atom.column);
    if (!index) throw BindError("unknown column '" + atom.column + "'");
    const Column& column = table.column(*index);
    BoundPredicate::BoundAtom b{&column, atom.op, false, 0, 0.0, {}};
    const bool literal_is_text = std::holds_alternative<std::string>(atom.literal);

    if (column.type == ColumnType::Text) {
      if (!literal_is_text) {
        throw BindError("column '" + column.name + "' is text; compare it with a quoted string");
      }
      if (atom.op != CompareOp::Eq && atom.op != CompareOp::Ne) {
        throw BindError("text column '" + column.name + "' supports only = and !=");
      }
      b.text_value = std::get<std::string>(atom.literal);
    } else {
      if (literal_is_text) {
        throw BindError("column '" + column.name + "' is " +
                        std::string(to_string(column.type)) +
                        "; a quoted string cannot be compared with it");
      }
      if (const auto* i = std::get_if<std::int64_t>(&atom.literal)) {
        b.integer_compare = column.type == ColumnType::Integer;
        b.integer_value = *i;
        b.real_value = static_cast<double>(*i);
      } else {
        b.real_value = std::get<double>(atom.literal);
      }
    }
    bound.atoms_.push_back(std::move(b));
  }
  return bound;
}

bool BoundPredicate::matches(std::uint64_t row) const {
  for (const BoundAtom& atom : atoms_) {
    const Column& column = *atom.column;
    bool ok = false;
    switch (column.type) {
      case ColumnType::Integer:
        ok = atom.integer_compare
                 ? compare(column.integers[row], atom.op, atom.integer_value)
                 : compare(static_cast<double>(column.integers[row]), atom.op, atom.real_value);
        break;
      case ColumnType::Real:
        ok = compare(column.reals[row], atom.op, atom.real_value);
        break;
      case ColumnType::Text:
        ok = compare<std::string>(column.texts[row], atom.op, atom.text_value);
        break;
    }
    if (!ok) return false;
  }
  return true;
}

std::uint64_t true_cardinality(const TableData& table, const BoundPredicate& predicate) {
  std::uint64_t count = 0;
  for (std::uint64_t row = 0; row < table.rows(); ++row) {
    if (predicate.matches(row)) ++count;
  }
  return count;
}

std::uint64_t true_cardinality(const TableData& table, const Predicate& predicate) {
  return true_cardinality(table, bind(table, predicate));
}

}  // namespace qbound::ingest
