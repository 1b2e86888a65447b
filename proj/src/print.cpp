#include "horef/print.hpp"

#include <sstream>

namespace horef {

std::string print_term(const Term& t) { return t.name; }

std::string print_atom(const Atom& a) {
    std::ostringstream os;
    os << a.callee;
    if (!a.args.empty()) {
        os << "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i) os << ",";
            os << print_term(a.args[i]);
        }
        os << ")";
    }
    return os.str();
}

std::string print_clause(const Clause& c) {
    std::ostringstream os;
    os << print_atom(c.head);
    if (!c.body.empty()) {
        os << " :- ";
        for (std::size_t i = 0; i < c.body.size(); ++i) {
            if (i) os << ",";
            os << print_atom(c.body[i]);
        }
    }
    os << ".";
    return os.str();
}

std::string print_definition(const Definition& d) {
    std::ostringstream os;
    for (const Clause& c : d.clauses) os << print_clause(c) << "\n";
    return os.str();
}

std::string print_program(const Program& p) {
    std::ostringstream os;
    for (const Definition& d : p.definitions) os << print_definition(d);
    return os.str();
}

}  // namespace horef
