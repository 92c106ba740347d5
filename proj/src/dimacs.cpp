#include "bnsat/dimacs.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace bnsat {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string &what) {
  throw FormulaError("dimacs line " + std::to_string(line) + ": " + what);
}

bool parse_int(std::string_view token, long long &value) {
  if (!token.empty() && token.front() == '+')
    token.remove_prefix(1);
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

} // namespace

DimacsResult read_dimacs(std::istream &in, const DimacsOptions &options) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  long long n = 0;
  long long m = 0;
  std::vector<Clause> clauses;
  Clause current;
  std::size_t current_line = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token))
      continue;
    if (token[0] == 'c')
      continue;
    if (token[0] == '%')
      break;
    if (token == "p") {
      if (have_header)
        fail(line_no, "duplicate problem header");
      std::string format, n_tok, m_tok, extra;
      if (!(tokens >> format >> n_tok >> m_tok) || format != "cnf")
        fail(line_no, "malformed header, expected `p cnf <vars> <clauses>`");
      if (tokens >> extra)
        fail(line_no, "trailing tokens after header");
      if (!parse_int(n_tok, n) || !parse_int(m_tok, m) || n < 1 || m < 0 ||
          n > std::numeric_limits<Var>::max())
        fail(line_no, "malformed header counts");
      have_header = true;
      continue;
    }
    if (!have_header)
      fail(line_no, "clause data before `p cnf` header");
    do {
      long long value = 0;
      if (!parse_int(token, value))
        fail(line_no, "not an integer: `" + token + "`");
      if (value == 0) {
        if (current.empty())
          fail(line_no, "empty clause");
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (value > n || value < -n)
        fail(line_no, "literal " + token + " out of range 1.." +
                          std::to_string(n));
      if (current.empty())
        current_line = line_no;
      current.push_back(Literal::from_dimacs(static_cast<int>(value)));
    } while (tokens >> token);
  }

  if (!have_header)
    throw FormulaError("dimacs: missing `p cnf` header");
  if (!current.empty())
    fail(current_line, "clause not terminated by 0");
  const std::size_t read = clauses.size();
  if (options.clause_count == ClauseCountPolicy::strict &&
      read != static_cast<std::size_t>(m))
    throw FormulaError("dimacs: header declares " + std::to_string(m) +
                       " clauses but " + std::to_string(read) + " were read");

  return DimacsResult{Formula(static_cast<std::size_t>(n), std::move(clauses),
                              options.tautologies, options.source_name),
                      static_cast<std::size_t>(m), read};
}

DimacsResult read_dimacs(std::string_view text, const DimacsOptions &options) {
  std::istringstream in{std::string(text)};
  return read_dimacs(in, options);
}

DimacsResult read_dimacs_file(const std::string &path,
                              const DimacsOptions &options) {
  std::ifstream in(path);
  if (!in)
    throw FormulaError("cannot open " + path);
  DimacsOptions named = options;
  if (named.source_name.empty())
    named.source_name = path;
  return read_dimacs(in, named);
}

Formula parse_dimacs(std::string_view text, const DimacsOptions &options) {
  return read_dimacs(text, options).formula;
}

void write_dimacs(std::ostream &out, const Formula &f) {
  if (!f.source_name().empty())
    out << "c " << f.source_name() << '\n';
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const Clause &c : f.clauses()) {
    for (const Literal lit : c)
      out << lit.to_dimacs() << ' ';
    out << "0\n";
  }
}

std::string write_dimacs(const Formula &f) {
  std::ostringstream out;
  write_dimacs(out, f);
  return out.str();
}

std::string model_line(const State &s) {
  std::string out = "v";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += ' ';
    if (!s[i])
      out += '-';
    out += std::to_string(i + 1);
  }
  out += " 0";
  return out;
}

} // namespace bnsat
