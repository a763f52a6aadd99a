#pragma once

#include "mlrank/loop.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlrank {

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::size_t col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ": " + msg),
          line_(line),
          col_(col) {}
    std::size_t line() const { return line_; }
    std::size_t col() const { return col_; }

  private:
    std::size_t line_, col_;
};

// A parsed .slc file: the loop plus optional analysis directives.
struct LoopFile {
    SLCLoop loop;
    std::optional<std::string> mode;  // "rational" | "integer"
    std::optional<int> depth_bound;
    std::optional<int> max_iters;
};

namespace detail {

struct Token {
    enum class Kind { Number, Ident, Op, End };
    Kind kind = Kind::End;
    std::string text;
    std::size_t col = 0;
};

class LineLexer {
  public:
    LineLexer(std::string_view s, std::size_t line) : s_(s), line_(line) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }
    bool at_end() const { return tok_.kind == Token::Kind::End; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line_, tok_.col + 1, msg);
    }

  private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        tok_.col = pos_;
        if (pos_ >= s_.size() || s_[pos_] == '#') {
            tok_ = {Token::Kind::End, "", pos_};
            return;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            tok_ = {Token::Kind::Number, std::string(s_.substr(start, pos_ - start)), start};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            if (pos_ < s_.size() && s_[pos_] == '\'') ++pos_;
            tok_ = {Token::Kind::Ident, std::string(s_.substr(start, pos_ - start)), start};
            return;
        }
        if (c == '<' || c == '>') {
            if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '=') {
                tok_ = {Token::Kind::Op, std::string(s_.substr(pos_, 2)), pos_};
                pos_ += 2;
                return;
            }
            throw ParseError(line_, pos_ + 1, "strict comparisons are not supported");
        }
        if (c == '+' || c == '-' || c == '*' || c == '/' || c == '=' || c == ':' || c == ',') {
            tok_ = {Token::Kind::Op, std::string(1, c), pos_};
            ++pos_;
            return;
        }
        throw ParseError(line_, pos_ + 1, std::string("unexpected character '") + c + "'");
    }

    std::string_view s_;
    std::size_t line_;
    std::size_t pos_ = 0;
    Token tok_;
};

}  // namespace detail

class LoopParser {
  public:
    LoopFile parse(std::string_view text) {
        LoopFile out;
        std::vector<std::string> lines;
        {
            std::string cur;
            for (char c : text) {
                if (c == '\n') {
                    lines.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            lines.push_back(cur);
        }
        enum class Block { None, Guard, Update } block = Block::None;
        for (std::size_t li = 0; li < lines.size(); ++li) {
            const std::size_t line_no = li + 1;
            detail::LineLexer lex(lines[li], line_no);
            if (lex.at_end()) continue;
            bool is_header = false;
            if (lex.peek().kind == detail::Token::Kind::Ident) {
                detail::LineLexer probe(lines[li], line_no);
                auto h = probe.take();
                if ((h.text == "vars" || h.text == "guard" || h.text == "update" ||
                     h.text == "mode") &&
                    probe.peek().text == ":")
                    is_header = true;
                if ((h.text == "depth" || h.text == "max") && probe.peek().text == "-")
                    is_header = true;
            }
            if (is_header) {
                const std::string head = lex.peek().text;
                {
                    // headers and directives; "depth-bound" / "max-iters"
                    lex.take();
                    if (head == "depth" || head == "max") {
                        expect_op(lex, "-", line_no);
                        auto word = lex.take();
                        std::string key = head + "-" + word.text;
                        if (key != "depth-bound" && key != "max-iters")
                            throw ParseError(line_no, 1, "unknown directive: " + key);
                        expect_op(lex, ":", line_no);
                        auto num = lex.take();
                        if (num.kind != detail::Token::Kind::Number)
                            lex.fail("expected a positive integer");
                        int v = std::stoi(num.text);
                        (key == "depth-bound" ? out.depth_bound : out.max_iters) = v;
                        require_end(lex);
                        continue;
                    }
                    expect_op(lex, ":", line_no);
                    if (head == "vars") {
                        parse_vars(lex);
                        require_end(lex);
                    } else if (head == "mode") {
                        auto m = lex.take();
                        if (m.text != "rational" && m.text != "integer")
                            lex.fail("mode must be rational or integer");
                        out.mode = m.text;
                        require_end(lex);
                    } else {
                        block = head == "guard" ? Block::Guard : Block::Update;
                        if (!lex.at_end()) parse_constraints(lex, block == Block::Guard, line_no);
                    }
                    continue;
                }
            }
            if (block == Block::None)
                throw ParseError(line_no, lex.peek().col + 1,
                                 "constraints must appear inside a guard: or update: block");
            parse_constraints(lex, block == Block::Guard, line_no);
        }
        if (vars_.empty()) throw ParseError(1, 1, "missing vars: declaration");
        out.loop.vars = names_;
        out.loop.guard = std::move(guard_);
        out.loop.update = std::move(update_);
        return out;
    }

  private:
    void expect_op(detail::LineLexer& lex, const std::string& op, std::size_t) {
        auto t = lex.take();
        if (t.kind != detail::Token::Kind::Op || t.text != op)
            lex.fail("expected '" + op + "'");
    }

    void require_end(detail::LineLexer& lex) {
        if (!lex.at_end()) lex.fail("unexpected trailing input");
    }

    void parse_vars(detail::LineLexer& lex) {
        while (!lex.at_end()) {
            auto t = lex.take();
            if (t.kind != detail::Token::Kind::Ident) lex.fail("expected a variable name");
            if (t.text.back() == '\'') lex.fail("primed names cannot be declared");
            if (vars_.count(t.text)) lex.fail("duplicate variable: " + t.text);
            vars_[t.text] = names_.size();
            names_.push_back(t.text);
        }
    }

    struct Expr {
        Vector coeffs;  // over 2n: x then x'
        Rational constant;
    };

    Expr parse_expr(detail::LineLexer& lex, bool guard, std::size_t line_no) {
        const std::size_t n = names_.size();
        Expr e{Vector(2 * n), rat(0)};
        bool first = true;
        while (true) {
            Rational sign(1);
            if (lex.peek().kind == detail::Token::Kind::Op &&
                (lex.peek().text == "+" || lex.peek().text == "-")) {
                sign = lex.take().text == "-" ? rat(-1) : rat(1);
            } else if (!first) {
                break;
            }
            parse_term(lex, guard, sign, e, line_no);
            first = false;
        }
        return e;
    }

    void parse_term(detail::LineLexer& lex, bool guard, const Rational& sign, Expr& e,
                    std::size_t line_no) {
        auto t = lex.take();
        Rational coef(1);
        bool have_coef = false;
        if (t.kind == detail::Token::Kind::Number) {
            have_coef = true;
            coef = parse_rational(t.text);
            if (lex.peek().kind == detail::Token::Kind::Op && lex.peek().text == "/") {
                lex.take();
                auto den = lex.take();
                if (den.kind != detail::Token::Kind::Number) lex.fail("expected a denominator");
                if (parse_rational(den.text) == 0)
                    throw ParseError(line_no, den.col + 1, "malformed rational: zero denominator");
                coef /= parse_rational(den.text);
            }
            if (lex.peek().kind == detail::Token::Kind::Op && lex.peek().text == "*") lex.take();
            if (lex.peek().kind != detail::Token::Kind::Ident) {
                e.constant += sign * coef;  // constant term
                check_no_juxtaposition(lex);
                return;
            }
            t = lex.take();
        }
        if (t.kind != detail::Token::Kind::Ident)
            throw ParseError(line_no, t.col + 1, "expected a term");
        bool primed = t.text.back() == '\'';
        std::string base = primed ? t.text.substr(0, t.text.size() - 1) : t.text;
        auto it = vars_.find(base);
        if (it == vars_.end())
            throw ParseError(line_no, t.col + 1, "undeclared variable: " + base);
        if (primed && guard)
            throw ParseError(line_no, t.col + 1, "primed variable in guard: " + t.text);
        std::size_t idx = it->second + (primed ? names_.size() : 0);
        e.coeffs[idx] += sign * coef;
        (void)have_coef;
        check_no_juxtaposition(lex);
    }

    void check_no_juxtaposition(detail::LineLexer& lex) {
        if (lex.peek().kind == detail::Token::Kind::Ident ||
            lex.peek().kind == detail::Token::Kind::Number)
            lex.fail("expected an operator between terms");
        if (lex.peek().kind == detail::Token::Kind::Op && lex.peek().text == "*")
            lex.fail("non-linear term");
    }

    void parse_constraints(detail::LineLexer& lex, bool guard, std::size_t line_no) {
        while (!lex.at_end()) {
            Expr lhs = parse_expr(lex, guard, line_no);
            auto relt = lex.take();
            if (relt.kind != detail::Token::Kind::Op ||
                (relt.text != "<=" && relt.text != ">=" && relt.text != "="))
                throw ParseError(line_no, relt.col + 1, "expected <=, >= or =");
            Expr rhs = parse_expr(lex, guard, line_no);

            Vector a = lhs.coeffs - rhs.coeffs;
            Rational b = rhs.constant - lhs.constant;
            LinearConstraint row;
            if (relt.text == "<=")
                row = le(std::move(a), std::move(b));
            else if (relt.text == ">=")
                row = ge(a, b);
            else
                row = eq(std::move(a), std::move(b));
            row = canonical(std::move(row));
            if (guard) {
                Vector g(names_.size());
                for (std::size_t j = 0; j < names_.size(); ++j) g[j] = row.coeffs[j];
                guard_.push_back({std::move(g), row.rhs, row.rel});
            } else {
                update_.push_back(std::move(row));
            }
            if (!lex.at_end()) {
                auto sep = lex.take();
                if (sep.kind != detail::Token::Kind::Op || sep.text != ",")
                    throw ParseError(line_no, sep.col + 1, "expected ',' between constraints");
            }
        }
    }

    std::map<std::string, std::size_t> vars_;
    std::vector<std::string> names_;
    std::vector<LinearConstraint> guard_;
    std::vector<LinearConstraint> update_;
};

inline LoopFile parse_loop(std::string_view text) { return LoopParser().parse(text); }

// --- serialization -------------------------------------------------------------

namespace detail {

inline std::string format_terms(const Vector& coeffs, const std::vector<std::string>& vars,
                                bool primed_block) {
    std::ostringstream os;
    bool first = true;
    const std::size_t n = vars.size();
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] == 0) continue;
        Rational c = coeffs[j];
        std::string name = j < n ? vars[j] : vars[j - n] + "'";
        if (!primed_block && j >= n) continue;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        Rational ac = abs(c);
        if (ac != 1) os << to_string(ac) << " ";
        os << name;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace detail

inline std::string to_slc(const SLCLoop& l) {
    std::ostringstream os;
    os << "vars:";
    for (const auto& v : l.vars) os << " " << v;
    os << "\nguard:\n";
    for (const auto& g : l.guard) {
        Vector wide(2 * l.n());
        for (std::size_t j = 0; j < l.n(); ++j) wide[j] = g.coeffs[j];
        os << "  " << detail::format_terms(wide, l.vars, false)
           << (g.rel == Relation::Eq ? " = " : " <= ") << to_string(g.rhs) << "\n";
    }
    os << "update:\n";
    for (const auto& u : l.update)
        os << "  " << detail::format_terms(u.coeffs, l.vars, true)
           << (u.rel == Relation::Eq ? " = " : " <= ") << to_string(u.rhs) << "\n";
    return os.str();
}

}  // namespace mlrank
