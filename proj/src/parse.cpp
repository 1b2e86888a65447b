#include "horef/parse.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace horef {

std::string ParseDiagnostic::to_string() const {
    std::ostringstream os;
    os << span.file << ":" << span.line << ":" << span.column << ": "
       << (severity == Severity::Error ? "error" : "warning") << ": " << message;
    return os.str();
}

namespace {

enum class TokKind { Ident, Var, Int, LParen, RParen, Comma, Dot, Arrow, Eof };

struct Token {
    TokKind kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    Lexer(std::string_view text, std::string filename, std::vector<ParseDiagnostic>& diags)
        : text_(text), filename_(std::move(filename)), diags_(diags) {}

    Token next() {
        skip_trivia();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {TokKind::Eof, "", line, col};

        char c = text_[pos_];
        if (c == '(') return advance(), Token{TokKind::LParen, "(", line, col};
        if (c == ')') return advance(), Token{TokKind::RParen, ")", line, col};
        if (c == ',') return advance(), Token{TokKind::Comma, ",", line, col};
        if (c == '.') return advance(), Token{TokKind::Dot, ".", line, col};
        if (c == ':' && peek(1) == '-') return advance(2), Token{TokKind::Arrow, ":-", line, col};
        if (c == '<' && peek(1) == '-') return advance(2), Token{TokKind::Arrow, "<-", line, col};
        // UTF-8 left arrow
        if (static_cast<unsigned char>(c) == 0xE2 && static_cast<unsigned char>(peek(1)) == 0x86 &&
            static_cast<unsigned char>(peek(2)) == 0x90)
            return advance(3), Token{TokKind::Arrow, "<-", line, col};

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                word += text_[pos_];
                advance();
            }
            bool upper = std::isupper(static_cast<unsigned char>(word[0])) || word[0] == '_';
            return {upper ? TokKind::Var : TokKind::Ident, word, line, col};
        }

        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            std::string num;
            if (c == '-') num += '-', advance();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                num += text_[pos_];
                advance();
            }
            return {TokKind::Int, num, line, col};
        }

        diags_.push_back({{filename_, line, col}, Severity::Error,
                          std::string("unexpected character '") + c + "'"});
        advance();
        return next();
    }

private:
    char peek(std::size_t off) const { return pos_ + off < text_.size() ? text_[pos_ + off] : '\0'; }

    void advance(int n = 1) {
        for (int i = 0; i < n && pos_ < text_.size(); ++i) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::string filename_;
    std::vector<ParseDiagnostic>& diags_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct RawAtom {
    Atom atom;
    SourceSpan span;
};

struct RawClause {
    RawAtom head;
    std::vector<RawAtom> body;
    SourceSpan span;
    std::set<std::string> ho_vars;  // variable names classified higher-order
};

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& opts)
        : options_(opts), lexer_(text, opts.filename, diags_) {
        tok_ = lexer_.next();
    }

    ParseResult run() {
        while (tok_.kind != TokKind::Eof) parse_clause();

        classify_higher_order();
        resolve_pred_refs();
        if (!options_.allow_higher_order) reject_higher_order();
        check_arities();

        ParseResult result;
        result.diagnostics = std::move(diags_);
        bool has_error = false;
        for (const auto& d : result.diagnostics)
            if (d.severity == Severity::Error) has_error = true;
        if (!has_error) {
            std::vector<Clause> clauses;
            clauses.reserve(raw_clauses_.size());
            for (RawClause& rc : raw_clauses_) {
                Clause c;
                c.head = std::move(rc.head.atom);
                for (RawAtom& ra : rc.body) c.body.push_back(std::move(ra.atom));
                clauses.push_back(std::move(c));
            }
            Program p;
            p.definitions = group_into_definitions(clauses);
            result.program = std::move(p);
        }
        return result;
    }

private:
    SourceSpan span_of(const Token& t) const { return {options_.filename, t.line, t.column}; }

    void error(const Token& t, std::string msg) {
        diags_.push_back({span_of(t), Severity::Error, std::move(msg)});
    }

    void bump() { tok_ = lexer_.next(); }

    // Skip to just past the next '.' so later clauses still get checked.
    void resync() {
        while (tok_.kind != TokKind::Dot && tok_.kind != TokKind::Eof) bump();
        if (tok_.kind == TokKind::Dot) bump();
    }

    void parse_clause() {
        RawClause rc;
        rc.span = span_of(tok_);

        auto head = parse_atom();
        if (!head) return resync();
        if (head->atom.callee_is_var) {
            diags_.push_back({head->span, Severity::Error,
                              "clause head must be a predicate symbol, not a variable"});
            return resync();
        }
        rc.head = std::move(*head);

        if (tok_.kind == TokKind::Arrow) {
            bump();
            while (true) {
                auto a = parse_atom();
                if (!a) return resync();
                rc.body.push_back(std::move(*a));
                if (tok_.kind == TokKind::Comma) {
                    bump();
                    continue;
                }
                break;
            }
        }
        if (tok_.kind != TokKind::Dot) {
            if (tok_.kind == TokKind::Eof)
                error(tok_, "unterminated clause: expected '.'");
            else
                error(tok_, "expected '.', ',' or ':-' after atom, got '" + tok_.text + "'");
            return resync();
        }
        bump();
        raw_clauses_.push_back(std::move(rc));
    }

    std::optional<RawAtom> parse_atom() {
        if (tok_.kind != TokKind::Ident && tok_.kind != TokKind::Var) {
            error(tok_, "expected atom, got '" + (tok_.kind == TokKind::Eof ? "end of input" : tok_.text) + "'");
            return std::nullopt;
        }
        RawAtom ra;
        ra.span = span_of(tok_);
        ra.atom.callee = tok_.text;
        ra.atom.callee_is_var = tok_.kind == TokKind::Var;
        bump();

        if (tok_.kind == TokKind::LParen) {
            bump();
            while (true) {
                if (tok_.kind == TokKind::Ident) {
                    ra.atom.args.push_back(Term::constant(tok_.text));
                } else if (tok_.kind == TokKind::Var) {
                    ra.atom.args.push_back(Term::var(tok_.text));
                } else if (tok_.kind == TokKind::Int) {
                    ra.atom.args.push_back(Term::constant(tok_.text));
                } else {
                    error(tok_, "expected term, got '" + tok_.text + "'");
                    return std::nullopt;
                }
                bump();
                if (tok_.kind == TokKind::Comma) {
                    bump();
                    continue;
                }
                if (tok_.kind == TokKind::RParen) {
                    bump();
                    break;
                }
                error(tok_, "expected ',' or ')' in argument list");
                return std::nullopt;
            }
        }
        return ra;
    }

    // A variable is higher-order if it is used in a callee position, or if it
    // occupies a head argument position that any clause of the same definition
    // uses for a higher-order variable, or if it is passed at such a position
    // of a call.  Propagated to a fixpoint, then baked into the term kinds.
    void classify_higher_order() {
        for (RawClause& rc : raw_clauses_)
            for (const RawAtom& ra : rc.body)
                if (ra.atom.callee_is_var) rc.ho_vars.insert(ra.atom.callee);

        std::map<std::string, std::set<int>> ho_positions;  // head symbol -> arg slots
        bool changed = true;
        while (changed) {
            changed = false;
            for (RawClause& rc : raw_clauses_) {
                const Atom& h = rc.head.atom;
                for (int i = 0; i < h.arity(); ++i)
                    if (h.args[i].is_variable() && rc.ho_vars.count(h.args[i].name))
                        changed |= ho_positions[h.callee].insert(i).second;
            }
            for (RawClause& rc : raw_clauses_) {
                auto absorb = [&](const Atom& a) {
                    auto it = ho_positions.find(a.callee);
                    if (it == ho_positions.end()) return;
                    for (int i : it->second)
                        if (i < a.arity() && a.args[i].is_variable())
                            changed |= rc.ho_vars.insert(a.args[i].name).second;
                };
                // Sibling clauses fix the head's higher-order slots, so a head
                // variable there is higher-order even if this clause never
                // calls it.
                absorb(rc.head.atom);
                for (const RawAtom& ra : rc.body)
                    if (!ra.atom.callee_is_var) absorb(ra.atom);
            }
        }

        for (RawClause& rc : raw_clauses_) {
            auto mark = [&rc](Atom& a) {
                for (Term& t : a.args)
                    if (t.kind == TermKind::Var && rc.ho_vars.count(t.name)) t.kind = TermKind::HoVar;
            };
            mark(rc.head.atom);
            for (RawAtom& ra : rc.body) mark(ra.atom);
        }
        ho_positions_ = std::move(ho_positions);
    }

    // Lowercase identifiers at argument positions a definition declares
    // higher-order become predicate references.
    void resolve_pred_refs() {
        for (RawClause& rc : raw_clauses_) {
            for (RawAtom& ra : rc.body) {
                if (ra.atom.callee_is_var) continue;
                auto it = ho_positions_.find(ra.atom.callee);
                if (it == ho_positions_.end()) continue;
                for (int i : it->second)
                    if (i < ra.atom.arity() && ra.atom.args[i].kind == TermKind::Constant)
                        ra.atom.args[i].kind = TermKind::PredRef;
            }
        }
    }

    void reject_higher_order() {
        for (const RawClause& rc : raw_clauses_) {
            for (const RawAtom& ra : rc.body)
                if (ra.atom.callee_is_var)
                    diags_.push_back({ra.span, Severity::Error,
                                      "variable '" + ra.atom.callee +
                                          "' in callee position requires higher-order mode"});
            auto scan = [&](const RawAtom& ra) {
                for (const Term& t : ra.atom.args)
                    if (t.kind == TermKind::HoVar || t.kind == TermKind::PredRef)
                        diags_.push_back({ra.span, Severity::Error,
                                          "higher-order argument '" + t.name +
                                              "' requires higher-order mode"});
            };
            scan(rc.head);
            for (const RawAtom& ra : rc.body) scan(ra);
        }
    }

    // One arity per symbol name across the whole input, and one arity per
    // higher-order variable within a clause.
    void check_arities() {
        std::map<std::string, std::pair<int, SourceSpan>> symbol_arity;
        auto check_symbol = [&](const RawAtom& ra) {
            if (ra.atom.callee_is_var) return;
            auto [it, inserted] = symbol_arity.try_emplace(ra.atom.callee, ra.atom.arity(), ra.span);
            if (!inserted && it->second.first != ra.atom.arity()) {
                std::ostringstream os;
                os << "arity mismatch for '" << ra.atom.callee << "': used with " << ra.atom.arity()
                   << " argument(s) here but " << it->second.first << " at " << it->second.second.line
                   << ":" << it->second.second.column;
                diags_.push_back({ra.span, Severity::Error, os.str()});
            }
        };
        for (const RawClause& rc : raw_clauses_) {
            check_symbol(rc.head);
            for (const RawAtom& ra : rc.body) check_symbol(ra);

            std::map<std::string, int> var_arity;
            for (const RawAtom& ra : rc.body) {
                if (!ra.atom.callee_is_var) continue;
                auto [it, inserted] = var_arity.try_emplace(ra.atom.callee, ra.atom.arity());
                if (!inserted && it->second != ra.atom.arity())
                    diags_.push_back({ra.span, Severity::Error,
                                      "higher-order variable '" + ra.atom.callee +
                                          "' called with inconsistent arities"});
            }
        }
    }

    ParseOptions options_;
    std::vector<ParseDiagnostic> diags_;
    Lexer lexer_;
    Token tok_{TokKind::Eof, "", 1, 1};
    std::vector<RawClause> raw_clauses_;
    std::map<std::string, std::set<int>> ho_positions_;
};

}  // namespace

ParseResult parse_program(std::string_view text, const ParseOptions& options) {
    return Parser(text, options).run();
}

}  // namespace horef
