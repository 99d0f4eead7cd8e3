#include "pical/parser.hpp"

#include <cctype>
#include <sstream>

namespace pical {

std::vector<Name> Program::names() const {
  std::vector<Name> out;
  for (const FreeDecl& d : decls) out.push_back(d.name);
  return out;
}
PreCtx Program::gamma() const {
  PreCtx out;
  for (const FreeDecl& d : decls) out.push_back(d.type);
  return out;
}
Idxs Program::idxs() const {
  Idxs out;
  for (const FreeDecl& d : decls) out.push_back(d.usage_alg);
  return out;
}
Ctx Program::usage() const {
  Ctx out;
  for (const FreeDecl& d : decls) out.push_back(d.usage);
  return out;
}

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, Eof };
  Kind kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_trivia();
    std::size_t line = line_, col = col_;
    if (pos_ >= text_.size()) {
      current_ = Token{Token::Kind::Eof, "", line, col};
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (!(std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '^')) break;
        word += d;
        bump();
      }
      current_ = Token{Token::Kind::Ident, word, line, col};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        num += text_[pos_];
        bump();
      }
      current_ = Token{Token::Kind::Number, num, line, col};
      return;
    }
    static const std::string puncts = ":;.?!|()<>[],@";
    if (puncts.find(c) != std::string::npos) {
      bump();
      current_ = Token{Token::Kind::Punct, std::string(1, c), line, col};
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
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
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token current_{Token::Kind::Eof, "", 1, 1};
};

class Parser {
 public:
  Parser(std::string_view text, const AlgebraSet& set) : lex_(text), set_(set) {}

  Program run() {
    std::vector<FreeDecl> decls;
    while (at_ident("free")) decls.push_back(decl());
    Raw proc = parse_proc();
    expect_eof();
    return Program{std::move(decls), std::move(proc)};
  }

 private:
  [[noreturn]] void error(const std::string& msg, const Token& t) {
    throw ParseError(msg + (t.kind == Token::Kind::Eof ? " (got end of input)"
                                                       : " (got '" + t.text + "')"),
                    t.line, t.col);
  }

  bool at_ident(const char* word) {
    return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == word;
  }
  bool at_punct(char c) {
    return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text[0] == c;
  }

  void eat_ident(const char* word) {
    if (!at_ident(word)) error(std::string("expected '") + word + "'", lex_.peek());
    lex_.take();
  }
  void eat_punct(char c) {
    if (!at_punct(c)) error(std::string("expected '") + c + "'", lex_.peek());
    lex_.take();
  }

  Name name() {
    Token t = lex_.peek();
    if (t.kind != Token::Kind::Ident) error("expected a name", t);
    if (!Name::valid_text(t.text)) error("'" + t.text + "' is not a valid name", t);
    lex_.take();
    return Name(t.text);
  }

  AlgebraId algebra() {
    Token t = lex_.peek();
    if (t.kind != Token::Kind::Ident) error("expected an algebra", t);
    if (!set_.contains(t.text)) error("unknown algebra '" + t.text + "'", t);
    lex_.take();
    return t.text;
  }

  Usage usage_literal(const AlgebraId& alg) {
    Token t = lex_.peek();
    if (t.kind != Token::Kind::Number && !(t.kind == Token::Kind::Ident && t.text == "w"))
      error("expected a usage", t);
    auto u = set_.at(alg).parse_usage(t.text);
    if (!u) error("'" + t.text + "' is not a usage of algebra " + alg, t);
    lex_.take();
    return *u;
  }

  std::pair<AlgebraId, UsagePair> usage_clause() {
    AlgebraId alg = algebra();
    eat_punct('(');
    Usage in = usage_literal(alg);
    eat_punct(',');
    Usage out = usage_literal(alg);
    eat_punct(')');
    return {alg, UsagePair{in, out}};
  }

  Type type() {
    if (at_ident("unit")) {
      lex_.take();
      return Type::unit();
    }
    if (at_ident("chan")) {
      lex_.take();
      eat_punct('<');
      Type payload = type();
      eat_punct('>');
      eat_punct('[');
      auto [alg, pair] = usage_clause();
      eat_punct(']');
      return Type::chan(std::move(payload), std::move(alg), pair);
    }
    error("expected a type", lex_.peek());
  }

  FreeDecl decl() {
    eat_ident("free");
    Name n = name();
    eat_punct(':');
    Type t = type();
    AlgebraId alg = "sha";
    UsagePair pair{Usage::omega(), Usage::omega()};
    if (at_punct('@')) {
      lex_.take();
      auto [a, p] = usage_clause();
      alg = a;
      pair = p;
    }
    eat_punct(';');
    return FreeDecl{std::move(n), std::move(t), std::move(alg), pair};
  }

  Raw parse_proc() {
    Raw left = atom();
    if (at_punct('|')) {
      lex_.take();
      Raw right = parse_proc();
      return Raw::par(std::move(left), std::move(right));
    }
    return left;
  }

  Raw atom() {
    if (at_ident("end")) {
      lex_.take();
      return Raw::end();
    }
    if (at_ident("new")) {
      Token where = lex_.take();
      Name binder = name();
      eat_punct(':');
      Type t = type();
      if (!t.is_chan())
        throw ParseError("'new' requires a channel type", where.line, where.col);
      eat_punct('@');
      AlgebraId mult_alg = algebra();
      Usage mult = usage_literal(mult_alg);
      eat_punct('.');
      Raw body = atom();
      NuAnnot annot{t.payload(), t.alg(), t.usage(), std::move(mult_alg), mult};
      return Raw::res(std::move(binder), std::move(annot), std::move(body));
    }
    if (at_punct('(')) {
      lex_.take();
      Raw inner = parse_proc();
      eat_punct(')');
      return inner;
    }
    Name subject = name();
    if (at_punct('?')) {
      lex_.take();
      eat_punct('(');
      Name binder = name();
      eat_punct(')');
      eat_punct('.');
      Raw body = atom();
      return Raw::recv(std::move(subject), std::move(binder), std::move(body));
    }
    if (at_punct('!')) {
      lex_.take();
      Name payload = name();
      eat_punct('.');
      Raw body = atom();
      return Raw::send(std::move(subject), std::move(payload), std::move(body));
    }
    error("expected '?' or '!' after a name", lex_.peek());
  }

  void expect_eof() {
    if (lex_.peek().kind != Token::Kind::Eof) error("trailing input", lex_.peek());
  }

  Lexer lex_;
  const AlgebraSet& set_;
};

}  // namespace

Program parse(std::string_view text, const AlgebraSet& set) {
  Parser parser(text, set);
  return parser.run();
}

std::string print_program(const Program& p) {
  std::ostringstream out;
  for (const FreeDecl& d : p.decls) {
    out << "free " << d.name.text() << " : " << to_string(d.type) << " @ " << d.usage_alg << " "
        << to_string(d.usage) << ";\n";
  }
  out << to_string(p.proc) << "\n";
  return out.str();
}

}  // namespace pical
