#pragma once

#include "bnsat/formula.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace bnsat {

enum class ClauseCountPolicy {
  strict,  ///< clauses read must equal the header's m
  lenient, ///< any count is accepted; the header value is still reported
};

struct DimacsOptions {
  TautologyPolicy tautologies = TautologyPolicy::reject;
  ClauseCountPolicy clause_count = ClauseCountPolicy::strict;
  std::string source_name;
};

struct DimacsResult {
  Formula formula;
  std::size_t declared_clauses = 0; ///< m from the `p cnf` header
  std::size_t clauses_read = 0;     ///< before tautology dropping
};

/// Reads DIMACS CNF: `c` comment lines, one `p cnf <n> <m>` header, then
/// 0-terminated clauses of signed integers. A line starting with `%` ends the
/// clause section (SATLIB convention). Throws FormulaError on malformed input.
DimacsResult read_dimacs(std::istream &in, const DimacsOptions &options = {});
DimacsResult read_dimacs(std::string_view text,
                         const DimacsOptions &options = {});
DimacsResult read_dimacs_file(const std::string &path,
                              const DimacsOptions &options = {});

Formula parse_dimacs(std::string_view text, const DimacsOptions &options = {});

void write_dimacs(std::ostream &out, const Formula &f);
std::string write_dimacs(const Formula &f);

/// `v 1 -2 3 0` model line.
std::string model_line(const State &s);

} // namespace bnsat
