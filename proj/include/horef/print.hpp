// Deterministic pretty-printing.  Output always uses ":-", one clause per
// line, no spaces inside argument lists, so parse(print(p)) == p.

#ifndef HOREF_PRINT_HPP
#define HOREF_PRINT_HPP

#include <string>

#include "horef/ast.hpp"

namespace horef {

std::string print_term(const Term& t);
std::string print_atom(const Atom& a);
std::string print_clause(const Clause& c);
std::string print_definition(const Definition& d);
std::string print_program(const Program& p);

}  // namespace horef

#endif  // HOREF_PRINT_HPP
