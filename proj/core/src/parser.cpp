#include "divstab/parser.hpp"

#include <cctype>

namespace divstab {

namespace {

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;

  explicit Lexer(const std::string& s) : src(s) {}

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool done() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool accept(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) throw SyntaxError(pos, std::string("expected ") + what);
  }

  std::string read_digits() {
    std::string d;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
      d += src[pos++];
    }
    return d;
  }

  std::string read_ident() {
    std::string id;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
      id += src[pos++];
    }
    return id;
  }
};

class Parser {
 public:
  Parser(const std::string& src, const std::vector<std::string>& vars)
      : lex_(src), vars_(vars) {}

  Polynomial parse() {
    Polynomial p = parse_expr();
    if (!lex_.done()) {
      throw SyntaxError(lex_.pos, "unexpected trailing input");
    }
    return p;
  }

 private:
  int nvars() const { return static_cast<int>(vars_.size()); }

  Polynomial parse_expr() {
    bool neg = lex_.accept('-');
    Polynomial acc = parse_term();
    if (neg) acc = -acc;
    for (;;) {
      if (lex_.accept('+')) {
        acc += parse_term();
      } else if (lex_.accept('-')) {
        acc -= parse_term();
      } else {
        break;
      }
    }
    return acc;
  }

  Polynomial parse_term() {
    Polynomial acc = parse_factor();
    while (lex_.accept('*')) acc = acc * parse_factor();
    return acc;
  }

  Polynomial parse_factor() {
    Polynomial base = parse_base();
    if (lex_.accept('^')) {
      unsigned long e = parse_uint_exponent();
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  unsigned long parse_uint_exponent() {
    lex_.skip_ws();
    std::size_t here = lex_.pos;
    std::string d = lex_.read_digits();
    if (d.empty()) throw SyntaxError(here, "expected unsigned integer exponent");
    if (lex_.pos < lex_.src.size() && lex_.src[lex_.pos] == '/') {
      throw NonIntegerExponentError(here);
    }
    return std::stoul(d);
  }

  Polynomial parse_base() {
    lex_.skip_ws();
    std::size_t here = lex_.pos;
    char c = lex_.peek();
    if (c == '(') {
      lex_.accept('(');
      Polynomial p = parse_expr();
      lex_.expect(')', "')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = lex_.read_digits();
      std::string den = "1";
      if (lex_.pos < lex_.src.size() && lex_.src[lex_.pos] == '/') {
        ++lex_.pos;
        std::size_t dpos = lex_.pos;
        den = lex_.read_digits();
        if (den.empty()) throw SyntaxError(dpos, "expected denominator digits");
      }
      Rational r = rational_parse(num + "/" + den);
      return Polynomial::constant(nvars(), r);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id = lex_.read_ident();
      for (int i = 0; i < nvars(); ++i) {
        if (vars_[i] == id) return Polynomial::variable(nvars(), i);
      }
      throw UnknownVariableError(here, id);
    }
    throw SyntaxError(here, "expected number, variable or '('");
  }

  Lexer lex_;
  const std::vector<std::string>& vars_;
};

}  // namespace

Polynomial parse_polynomial(const std::string& src,
                            const std::vector<std::string>& vars) {
  if (vars.empty()) throw std::invalid_argument("empty variable list");
  return Parser(src, vars).parse();
}

}  // namespace divstab
