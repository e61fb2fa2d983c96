#pragma once

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vbp {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Minimal s-expression node; `;` starts a comment that runs to end of line.
struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;
    int line = 0;
    int column = 0;

    bool is_atom() const { return !is_list; }
    bool is_atom(std::string_view s) const { return !is_list && atom == s; }
    std::size_t size() const { return items.size(); }
    const SExpr& operator[](std::size_t i) const { return items.at(i); }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, column); }
};

namespace detail {

class SExprReader {
public:
    explicit SExprReader(std::string_view text) : text_(text) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        skip_space();
        while (pos_ < text_.size()) {
            out.push_back(read());
            skip_space();
        }
        return out;
    }

private:
    SExpr read() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
        SExpr e;
        e.line = line_;
        e.column = col_;
        char c = text_[pos_];
        if (c == ')') throw ParseError("unexpected ')'", line_, col_);
        if (c == '(') {
            e.is_list = true;
            advance();
            for (;;) {
                skip_space();
                if (pos_ >= text_.size())
                    throw ParseError("unterminated list opened here", e.line, e.column);
                if (text_[pos_] == ')') {
                    advance();
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        while (pos_ < text_.size()) {
            c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';')
                break;
            e.atom.push_back(c);
            advance();
        }
        return e;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

} // namespace detail

inline std::vector<SExpr> read_sexprs(std::string_view text) {
    return detail::SExprReader(text).read_all();
}

/// Reads exactly one top-level expression.
inline SExpr read_sexpr(std::string_view text) {
    auto all = read_sexprs(text);
    if (all.empty()) throw ParseError("empty input", 1, 1);
    if (all.size() > 1) all[1].fail("trailing content after top-level expression");
    return std::move(all.front());
}

} // namespace vbp
