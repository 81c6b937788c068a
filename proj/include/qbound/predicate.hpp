#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qbound/table.hpp"

namespace qbound::ingest {

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CompareOp op) noexcept;

using Literal = std::variant<std::int64_t, double, std::string>;

struct Atom {
  std::string column;
  CompareOp op = CompareOp::Eq;
  Literal literal;
  std::size_t offset = 0;  // byte offset of the atom in the source text
};

// Conjunction of atoms.
struct Predicate {
  std::vector<Atom> atoms;
};

// Grammar: atom (AND atom)*, atom := ident op literal.
//   op      := = | != | < | <= | > | >=
//   literal := integer | real | 'text' (a doubled '' escapes a quote)
// AND is case-insensitive. Throws ParseError naming the byte offset.
// Column names are not checked here; see bind().
Predicate parse_predicate(std::string_view text);

// A predicate resolved against one table's columns.
class BoundPredicate {
 public:
  bool matches(std::uint64_t row) const;
  std::size_t size() const noexcept { return atoms_.size(); }

 private:
  friend BoundPredicate bind(const TableData& table, const Predicate& predicate);

  struct BoundAtom {
    const Column* column;
    CompareOp op;
    bool integer_compare;  // integer column against integer literal
    std::int64_t integer_value;
    double real_value;
    std::string text_value;
  };
  std::vector<BoundAtom> atoms_;
};

// Throws BindError for unknown columns, literal/column type mismatches and
// ordering comparisons on text columns.
BoundPredicate bind(const TableData& table, const Predicate& predicate);

// Exact count of matching rows by full scan.
std::uint64_t true_cardinality(const TableData& table, const Predicate& predicate);
std::uint64_t true_cardinality(const TableData& table, const BoundPredicate& predicate);

}  // namespace qbound::ingest
