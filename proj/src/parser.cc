// Copyright 2026 The grlin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "grlin/parser.h"

#include <cctype>
#include <charconv>
#include <set>

#include <fmt/format.h>

namespace grlin {
namespace {

enum class Tok { kIdent, kInt, kSym, kNewline, kEof };

struct Token {
  Tok kind = Tok::kEof;
  std::string text;
  Position pos;
  size_t begin = 0;  // byte offsets
  size_t end = 0;
};

const std::set<std::string, std::less<>> kKeywords = {
    "case", "of",   "letrec", "in",        "unit", "inl", "inr", "mu",
    "push", "pull", "drop",   "copyShape", "fmap", "Unit", "Int", "Res"};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
 public:
  Parser(std::string_view text, std::string file, SemiringId sr)
      : src_(text), file_(std::move(file)), sr_(sr) {}

  Program program() {
    Program p;
    p.file = file_;
    pragma();
    p.semiring = sr_;
    while (peek().kind != Tok::kEof) p.decls.push_back(decl());
    return p;
  }

  Type whole_type() {
    t_pos_ = peek().pos;
    Type t = type();
    expect_eof();
    check_type_wf(t, sr_, t_pos_);
    return t;
  }

  Term whole_term() {
    Term t = term();
    expect_eof();
    return t;
  }

  Pattern whole_pattern() {
    Pattern p = pattern();
    expect_eof();
    return p;
  }

 private:
  // --- lexing -------------------------------------------------------------

  struct Cursor {
    size_t off = 0;
    int line = 1;
    int col = 1;
  };

  char at(size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

  void advance(Cursor& c) const {
    if (src_[c.off] == '\n') {
      ++c.line;
      c.col = 1;
    } else if ((static_cast<unsigned char>(src_[c.off]) & 0xC0) != 0x80) {
      ++c.col;
    }
    ++c.off;
  }

  Position pos_of(const Cursor& c) const { return {file_, c.line, c.col}; }

  // Skips blanks and comments. Stops in front of a newline when newlines
  // are significant.
  void skip(Cursor& c) const {
    for (;;) {
      char ch = at(c.off);
      if (ch == '\n' && newline_significant()) return;
      if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
        advance(c);
      } else if (ch == '-' && at(c.off + 1) == '-') {
        while (c.off < src_.size() && src_[c.off] != '\n') advance(c);
      } else {
        return;
      }
    }
  }

  bool newline_significant() const { return sig_mode_ && depth_ == 0; }

  Token lex(Cursor& c) const {
    skip(c);
    Token t;
    t.pos = pos_of(c);
    t.begin = c.off;
    if (c.off >= src_.size()) {
      t.kind = Tok::kEof;
      t.end = c.off;
      return t;
    }
    char ch = src_[c.off];
    if (ch == '\n') {
      t.kind = Tok::kNewline;
      advance(c);
    } else if (ident_start(ch) && !(ch == '_' && !ident_char(at(c.off + 1)))) {
      t.kind = Tok::kIdent;
      while (ident_char(at(c.off))) advance(c);
      while (at(c.off) == '\'') advance(c);
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      t.kind = Tok::kInt;
      while (std::isdigit(static_cast<unsigned char>(at(c.off)))) advance(c);
    } else {
      t.kind = Tok::kSym;
      std::string_view two = src_.substr(c.off, 2);
      if (two == "->" || two == "-o") {
        advance(c);
        advance(c);
      } else if (std::string_view("\\*+()[],;:=@._#").find(ch) !=
                 std::string_view::npos) {
        advance(c);
      } else {
        Cursor e = c;
        advance(e);
        throw Error(Code::kSyntax,
                    fmt::format("unexpected character '{}'",
                                src_.substr(c.off, e.off - c.off)),
                    t.pos);
      }
    }
    t.end = c.off;
    t.text = std::string(src_.substr(t.begin, t.end - t.begin));
    return t;
  }

  Token peek() const {
    Cursor c = cur_;
    return lex(c);
  }

  Token peek2() const {
    Cursor c = cur_;
    lex(c);
    return lex(c);
  }

  Token next() {
    return lex(cur_);
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::kEof:
        return "end of input";
      case Tok::kNewline:
        return "end of line";
      default:
        return fmt::format("'{}'", t.text);
    }
  }

  [[noreturn]] void fail(const Token& t, std::string_view expected) const {
    throw Error(Code::kSyntax,
                fmt::format("expected {}, found {}", expected, describe(t)),
                t.pos);
  }

  bool is_sym(const Token& t, std::string_view s) const {
    return t.kind == Tok::kSym && t.text == s;
  }
  bool is_kw(const Token& t, std::string_view s) const {
    return t.kind == Tok::kIdent && t.text == s;
  }

  Token expect_sym(std::string_view s) {
    Token t = peek();
    if (!is_sym(t, s)) fail(t, fmt::format("'{}'", s));
    return next();
  }

  Token expect_kw(std::string_view s) {
    Token t = peek();
    if (!is_kw(t, s)) fail(t, fmt::format("'{}'", s));
    return next();
  }

  std::string expect_name(std::string_view what) {
    Token t = peek();
    if (t.kind != Tok::kIdent || kKeywords.count(t.text)) fail(t, what);
    next();
    return t.text;
  }

  void expect_eof() {
    Token t = peek();
    if (t.kind != Tok::kEof) fail(t, "end of input");
  }

  // --- programs ------------------------------------------------------------

  void pragma() {
    Cursor c = cur_;
    skip(c);
    if (at(c.off) != '#') return;
    cur_ = c;
    next();
    Token kw = peek();
    if (!is_kw(kw, "semiring")) fail(kw, "'semiring'");
    next();
    Cursor d = cur_;
    skip(d);
    Cursor start = d;
    while (ident_char(at(d.off)) || at(d.off) == '-') advance(d);
    std::string_view name = src_.substr(start.off, d.off - start.off);
    auto sr = parse_semiring(name);
    if (!sr) {
      throw Error(Code::kSyntax,
                  fmt::format("unknown semiring '{}'; expected nat-exact, "
                              "nat-le, interval or zero-one-many",
                              name),
                  pos_of(start));
    }
    sr_ = *sr;
    cur_ = d;
  }

  Decl decl() {
    Decl d;
    Token name = peek();
    d.name = expect_name("a declaration name");
    d.pos = name.pos;
    expect_sym(":");
    sig_mode_ = true;
    depth_ = 0;
    Token first = peek();
    if (first.kind == Tok::kNewline || first.kind == Tok::kEof) {
      sig_mode_ = false;
      fail(first, "a type");
    }
    t_pos_ = first.pos;
    d.type = type();
    Token end = peek();
    sig_mode_ = false;
    if (end.kind != Tok::kNewline && end.kind != Tok::kEof) {
      fail(end, "end of line after the signature");
    }
    check_type_wf(d.type, sr_, first.pos);
    Token def = peek();
    std::string def_name = expect_name(
        fmt::format("the definition '{} = ...'", d.name));
    if (def_name != d.name) {
      throw Error(Code::kSyntax,
                  fmt::format("definition of '{}' does not follow its "
                              "signature '{}'",
                              def_name, d.name),
                  def.pos);
    }
    expect_sym("=");
    d.body = term();
    Token after = peek();
    if (after.kind != Tok::kEof && !at_decl_boundary()) {
      fail(after, "a new declaration or end of input");
    }
    return d;
  }

  // A new declaration starts with `name :` at the start of a line.
  bool at_decl_boundary() const {
    if (depth_ != 0) return false;
    Token t = peek();
    if (t.kind != Tok::kIdent || t.pos.col != 1) return false;
    return is_sym(peek2(), ":");
  }

  // --- types ---------------------------------------------------------------

  Type type() {
    Type left = chain();
    Token op = peek();
    if (!is_sym(op, "-o")) return left;
    next();
    dangling_check(op);
    return ty_fun(left, type());
  }

  void dangling_check(const Token& op) const {
    Token t = peek();
    if (t.kind == Tok::kNewline || t.kind == Tok::kEof) {
      throw Error(Code::kSyntax,
                  fmt::format("'{}' is missing its right operand", op.text),
                  op.pos);
    }
  }

  Type chain() {
    std::vector<Type> parts = {postfix()};
    std::string op;
    for (;;) {
      Token t = peek();
      if (!is_sym(t, "*") && !is_sym(t, "+")) break;
      if (!op.empty() && t.text != op) {
        throw Error(Code::kSyntax,
                    fmt::format("cannot mix '{}' and '{}' without "
                                "parentheses",
                                op, t.text),
                    t.pos);
      }
      op = t.text;
      next();
      dangling_check(t);
      parts.push_back(postfix());
    }
    Type acc = parts.back();
    for (size_t i = parts.size() - 1; i-- > 0;) {
      acc = op == "*" ? ty_tensor(parts[i], acc) : ty_sum(parts[i], acc);
    }
    return acc;
  }

  Type postfix(bool allow_boxes = true) {
    Type t = type_atom();
    while (allow_boxes && is_sym(peek(), "[")) t = ty_box(grade(), t);
    return t;
  }

  Grade grade() {
    Token open = expect_sym("[");
    Cursor c = cur_;
    Cursor start = c;
    while (c.off < src_.size() && src_[c.off] != ']' && src_[c.off] != '\n') {
      advance(c);
    }
    if (at(c.off) != ']') {
      throw Error(Code::kSyntax, "unterminated grade, expected ']'",
                  open.pos);
    }
    std::string_view raw = src_.substr(start.off, c.off - start.off);
    size_t lead = raw.find_first_not_of(" \t");
    size_t trail = raw.find_last_not_of(" \t");
    std::string_view text =
        lead == std::string_view::npos ? "" : raw.substr(lead, trail - lead + 1);
    Position gpos = pos_of(start);
    gpos.col += lead == std::string_view::npos ? 0 : static_cast<int>(lead);
    try {
      Grade g = parse_grade(text, sr_);
      advance(c);
      cur_ = c;
      return g;
    } catch (const Error& e) {
      Position p = gpos;
      p.col += e.position().col - 1;
      throw Error(Code::kSyntax, e.diagnostic().message, p);
    }
  }

  Type type_atom() {
    Token t = peek();
    if (t.kind == Tok::kIdent) {
      if (t.text == "Unit") {
        next();
        return ty_unit();
      }
      if (t.text == "Int") {
        next();
        return ty_base(BaseKind::kInt);
      }
      if (t.text == "Res") {
        next();
        return ty_base(BaseKind::kRes);
      }
      if (t.text == "mu") {
        next();
        Token x = peek();
        std::string name = expect_name("a recursion variable");
        if (!std::isupper(static_cast<unsigned char>(name[0]))) {
          fail(x, "an upper-case recursion variable");
        }
        Token dot = expect_sym(".");
        dangling_check(dot);
        return ty_mu(name, type());
      }
      if (kKeywords.count(t.text)) fail(t, "a type");
      next();
      if (std::isupper(static_cast<unsigned char>(t.text[0]))) {
        return ty_recvar(t.text);
      }
      return ty_var(t.text);
    }
    if (is_sym(t, "(")) {
      next();
      ++depth_;
      Type inner = type();
      expect_sym(")");
      --depth_;
      return inner;
    }
    fail(t, "a type");
  }

  // --- terms ---------------------------------------------------------------

  Term term() {
    Token t = peek();
    if (is_sym(t, "\\")) {
      next();
      std::string x = expect_name("a variable");
      expect_sym("->");
      return t_lam(x, term(), t.pos);
    }
    if (is_kw(t, "letrec")) {
      next();
      std::string x = expect_name("a variable");
      expect_sym("=");
      Term bound = term();
      expect_kw("in");
      return t_letrec(x, bound, term(), t.pos);
    }
    if (is_kw(t, "case")) {
      next();
      Term scrut = term();
      expect_kw("of");
      std::vector<Branch> branches;
      for (;;) {
        Pattern p = pattern();
        expect_sym("->");
        branches.push_back({p, term()});
        if (!is_sym(peek(), ";")) break;
        next();
      }
      return t_case(scrut, std::move(branches), t.pos);
    }
    return app();
  }

  bool starts_atom(const Token& t) const {
    if (t.kind == Tok::kInt) return true;
    if (t.kind == Tok::kIdent) {
      if (!kKeywords.count(t.text)) return true;
      return t.text == "unit" || t.text == "inl" || t.text == "inr" ||
             parse_derive_kind(t.text).has_value();
    }
    return is_sym(t, "(") || is_sym(t, "[");
  }

  Term app() {
    Term f = atom();
    while (starts_atom(peek()) && !at_decl_boundary()) {
      Token t = peek();
      f = t_app(f, atom(), t.pos);
    }
    return f;
  }

  Term atom() {
    Token t = peek();
    if (t.kind == Tok::kInt) {
      next();
      int64_t v = 0;
      auto [p, ec] = std::from_chars(t.text.data(),
                                     t.text.data() + t.text.size(), v);
      if (ec != std::errc()) fail(t, "an integer literal in range");
      return t_int(v, t.pos);
    }
    if (t.kind == Tok::kIdent) {
      if (t.text == "unit") {
        next();
        return t_unit(t.pos);
      }
      if (t.text == "inl" || t.text == "inr") {
        next();
        Token a = peek();
        if (!starts_atom(a)) fail(a, "an argument");
        Term arg = atom();
        return t.text == "inl" ? t_inl(arg, t.pos) : t_inr(arg, t.pos);
      }
      if (auto k = parse_derive_kind(t.text); k && t.text != "copyshape") {
        next();
        expect_sym("@");
        Token ty = peek();
        Type at = postfix(false);
        check_type_wf(at, sr_, ty.pos);
        return t_derive(*k, at, t.pos);
      }
      return t_var(expect_name("a term"), t.pos);
    }
    if (is_sym(t, "[")) {
      next();
      ++depth_;
      Term inner = term();
      expect_sym("]");
      --depth_;
      return t_promote(inner, t.pos);
    }
    if (is_sym(t, "(")) {
      next();
      ++depth_;
      Term first = term();
      Token sep = peek();
      Term out;
      if (is_sym(sep, ",")) {
        next();
        out = t_pair(first, term(), t.pos);
      } else if (is_sym(sep, ":")) {
        next();
        Token ty = peek();
        Type a = type();
        check_type_wf(a, sr_, ty.pos);
        out = t_ann(first, a, t.pos);
      } else {
        out = first;
      }
      expect_sym(")");
      --depth_;
      return out;
    }
    fail(t, "a term");
  }

  // --- patterns ------------------------------------------------------------

  Pattern pattern() {
    Token t = peek();
    if (t.kind == Tok::kInt) {
      next();
      int64_t v = 0;
      auto [p, ec] = std::from_chars(t.text.data(),
                                     t.text.data() + t.text.size(), v);
      if (ec != std::errc()) fail(t, "an integer literal in range");
      return p_int(v, t.pos);
    }
    if (is_sym(t, "_")) {
      next();
      return p_wild(t.pos);
    }
    if (t.kind == Tok::kIdent) {
      if (t.text == "unit") {
        next();
        return p_con(ConKind::kUnit, {}, t.pos);
      }
      if (t.text == "inl" || t.text == "inr") {
        next();
        return p_con(t.text == "inl" ? ConKind::kInl : ConKind::kInr,
                     {pattern()}, t.pos);
      }
      return p_var(expect_name("a pattern"), t.pos);
    }
    if (is_sym(t, "[")) {
      next();
      Pattern inner = pattern();
      expect_sym("]");
      return p_box(inner, t.pos);
    }
    if (is_sym(t, "(")) {
      next();
      Pattern first = pattern();
      if (is_sym(peek(), ",")) {
        next();
        Pattern second = pattern();
        expect_sym(")");
        return p_con(ConKind::kPair, {first, second}, t.pos);
      }
      expect_sym(")");
      return first;
    }
    fail(t, "a pattern");
  }

  std::string_view src_;
  std::string file_;
  SemiringId sr_;
  Cursor cur_;
  Position t_pos_;
  bool sig_mode_ = false;
  int depth_ = 0;
};

}  // namespace

Program parse_program(std::string_view text, std::string file) {
  return Parser(text, std::move(file), SemiringId::kNatExact).program();
}

Type parse_type(std::string_view text, SemiringId sr) {
  return Parser(text, "", sr).whole_type();
}

Term parse_term(std::string_view text, SemiringId sr) {
  return Parser(text, "", sr).whole_term();
}

Pattern parse_pattern(std::string_view text) {
  return Parser(text, "", SemiringId::kNatExact).whole_pattern();
}

}  // namespace grlin
