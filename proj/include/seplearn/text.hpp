#pragma once

#include "seplearn/error.hpp"
#include "seplearn/formula.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace seplearn {

// Surface grammar (fully parenthesized, no precedence):
//   atom            identifier
//   unary           !e | X e | F e | G e | [a] e | <a>>=k e | EX e ... AG e
//   binary          (e & e) | (e | e) | (e U e) | E(e U e) | A(e U e)
// Inject operators have no surface form.

inline std::string render(const FormulaDag& dag, FormulaId id) {
    const auto& o = dag.op(id);
    switch (o.arity) {
        case 0: return o.symbol;
        case 1: {
            const std::string c = render(dag, dag.child(id, 0));
            if (o.kind == OpKind::Inject) return c;
            if (o.kind == OpKind::Not) return "!" + c;
            return o.symbol + " " + c;
        }
        default: {
            const std::string l = render(dag, dag.child(id, 0));
            const std::string r = render(dag, dag.child(id, 1));
            if (o.kind == OpKind::EU) return "E(" + l + " U " + r + ")";
            if (o.kind == OpKind::AU) return "A(" + l + " U " + r + ")";
            return "(" + l + " " + o.symbol + " " + r + ")";
        }
    }
}

namespace detail {

class Parser {
public:
    Parser(FormulaDag& dag, std::string_view text) : dag_(dag), s_(text) {}

    FormulaId run() {
        const FormulaId id = expr();
        ws();
        if (i_ != s_.size()) throw SyntaxError(i_, "trailing input");
        return id;
    }

private:
    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    void ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool is_atom(const std::string& name) const {
        for (const auto& o : dag_.signature().operators()) {
            if (o.arity == 0 && o.symbol == name) return true;
        }
        return false;
    }
    bool eof() const { return i_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[i_]; }
    void expect(char c) {
        ws();
        if (peek() != c) throw SyntaxError(i_, std::string("expected '") + c + "'");
        ++i_;
    }
    std::string ident() {
        if (!ident_start(peek())) throw SyntaxError(i_, "expected identifier");
        const std::size_t b = i_;
        while (!eof() && ident_char(s_[i_])) ++i_;
        return std::string(s_.substr(b, i_ - b));
    }

    FormulaId expr() {
        ws();
        if (eof()) throw SyntaxError(i_, "unexpected end of input");
        const std::size_t at = i_;
        const char c = peek();
        if (c == '!') {
            ++i_;
            const FormulaId e = expr();
            return build(at, 1, [](const OperatorDecl& o) { return o.kind == OpKind::Not; }, {e}, "!");
        }
        if (c == '(') {
            ++i_;
            const FormulaId l = expr();
            ws();
            const std::size_t opat = i_;
            std::string sym;
            if (peek() == '&' || peek() == '|') {
                sym = std::string(1, peek());
                ++i_;
            } else if (ident_start(peek())) {
                sym = ident();
            } else {
                throw SyntaxError(i_, "expected binary operator");
            }
            const FormulaId r = expr();
            expect(')');
            return build(opat, 2,
                         [&](const OperatorDecl& o) {
                             return o.symbol == sym && o.kind != OpKind::EU && o.kind != OpKind::AU;
                         },
                         {l, r}, sym);
        }
        if (c == '[') {
            ++i_;
            ws();
            const std::string a = ident();
            expect(']');
            const std::string sym = "[" + a + "]";
            const FormulaId e = expr();
            return build(at, 1, [&](const OperatorDecl& o) { return o.symbol == sym; }, {e}, sym);
        }
        if (c == '<') {
            ++i_;
            ws();
            const std::string a = ident();
            expect('>');
            if (s_.substr(i_, 2) != ">=") throw SyntaxError(i_, "expected '>='");
            i_ += 2;
            const std::size_t b = i_;
            while (!eof() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (b == i_) throw SyntaxError(i_, "expected threshold");
            const std::string sym = "<" + a + ">>=" + std::string(s_.substr(b, i_ - b));
            const FormulaId e = expr();
            return build(at, 1, [&](const OperatorDecl& o) { return o.symbol == sym; }, {e}, sym);
        }
        if (ident_start(c)) {
            const std::string name = ident();
            if ((name == "E" || name == "A") && peek() == '(') {
                ++i_;
                const FormulaId l = expr();
                ws();
                const std::size_t uat = i_;
                if (!ident_start(peek()) || ident() != "U") throw SyntaxError(uat, "expected 'U'");
                const FormulaId r = expr();
                expect(')');
                const OpKind k = name == "E" ? OpKind::EU : OpKind::AU;
                return build(at, 2, [&](const OperatorDecl& o) { return o.kind == k; }, {l, r}, name + "U");
            }
            for (const auto& o : dag_.signature().operators()) {
                if (o.arity == 1 && o.symbol == name) {
                    const FormulaId e = expr();
                    return build(at, 1, [&](const OperatorDecl& d) { return d.arity == 1 && d.symbol == name; }, {e},
                                 name);
                }
            }
            // "XXq" reads as "X X q" when no atom is called "XXq".
            if (!is_atom(name)) {
                std::string best;
                for (const auto& o : dag_.signature().operators()) {
                    if (o.arity == 1 && !o.symbol.empty() && ident_start(o.symbol[0]) && o.symbol.size() < name.size() &&
                        name.starts_with(o.symbol) && o.symbol.size() > best.size())
                        best = o.symbol;
                }
                if (!best.empty()) {
                    i_ = at + best.size();
                    const FormulaId e = expr();
                    return build(at, 1, [&](const OperatorDecl& d) { return d.arity == 1 && d.symbol == best; }, {e},
                                 best);
                }
            }
            return build(at, 0, [&](const OperatorDecl& o) { return o.symbol == name; }, {}, name);
        }
        throw SyntaxError(i_, std::string("unexpected character '") + c + "'");
    }

    template <typename Pred>
    FormulaId build(std::size_t at, int arity, Pred pred, std::vector<FormulaId> ch, const std::string& sym) {
        const auto& sig = dag_.signature();
        bool any = false;
        for (OpIndex i = 0; i < sig.size(); ++i) {
            const auto& o = sig.op(i);
            if (o.arity != arity || !pred(o)) continue;
            any = true;
            bool ok = true;
            for (int a = 0; a < arity; ++a) ok = ok && o.accepts(a, dag_.type_of(ch[static_cast<std::size_t>(a)]));
            if (ok) return dag_.intern(i, ch);
        }
        if (!any) throw SyntaxError(at, "unknown operator '" + sym + "'");
        // Retry with implicit injections on mismatching arguments.
        for (OpIndex i = 0; i < sig.size(); ++i) {
            const auto& o = sig.op(i);
            if (o.arity != arity || !pred(o)) continue;
            std::vector<FormulaId> wrapped = ch;
            bool ok = true;
            for (int a = 0; a < arity && ok; ++a) {
                auto& c = wrapped[static_cast<std::size_t>(a)];
                if (o.accepts(a, dag_.type_of(c))) continue;
                ok = false;
                for (OpIndex j = 0; j < sig.size(); ++j) {
                    const auto& inj = sig.op(j);
                    if (inj.kind == OpKind::Inject && inj.accepts(0, dag_.type_of(c)) &&
                        o.accepts(a, inj.result_type)) {
                        c = dag_.intern(j, {c});
                        ok = true;
                        break;
                    }
                }
            }
            if (ok) return dag_.intern(i, wrapped);
        }
        throw Error(Errc::TypeMismatch, "no typing for '" + sym + "' at position " + std::to_string(at));
    }

    FormulaDag& dag_;
    std::string_view s_;
    std::size_t i_ = 0;
};

}  // namespace detail

inline FormulaId parse(FormulaDag& dag, std::string_view text) { return detail::Parser(dag, text).run(); }

}  // namespace seplearn
