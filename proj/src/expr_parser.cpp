// Infix notation for SmoothFn, accepted wherever an expression tree is expected in JSON:
//   numbers, t, e (Euler's number), + - * /, ^ with an integer or parenthesized p/q exponent,
//   exp(x), log(x), sqrt(x), bump(eta) / bump(eta, x), blend(eta, inner, outer).
#include <cctype>
#include <cmath>
#include <string>

#include "gnat/errors.hpp"
#include "gnat/smooth_fn.hpp"

namespace gnat {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  SmoothFn parse() {
    SmoothFn f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParameterError("expression \"" + s_ + "\", column " + std::to_string(pos_ + 1) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  SmoothFn expr() {
    SmoothFn f = term();
    for (;;) {
      if (eat('+'))
        f = f + term();
      else if (eat('-'))
        f = f - term();
      else
        return f;
    }
  }
  SmoothFn term() {
    SmoothFn f = unary();
    for (;;) {
      if (eat('*'))
        f = f * unary();
      else if (eat('/'))
        f = f / unary();
      else
        return f;
    }
  }
  SmoothFn unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  long integer() {
    skip();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    const long v = std::stol(s_.substr(start, pos_ - start));
    return neg ? -v : v;
  }
  SmoothFn power() {
    SmoothFn base = atom();
    if (!eat('^')) return base;
    long num = 1, den = 1;
    if (eat('(')) {
      num = integer();
      if (eat('/')) den = integer();
      expect(')');
    } else {
      num = integer();
    }
    if (den <= 0) fail("exponent denominator must be positive");
    return SmoothFn::pow(base, num, den);
  }
  double number_literal() {
    skip();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }
  SmoothFn atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return SmoothFn::constant(number_literal());
    if (eat('(')) {
      SmoothFn f = expr();
      expect(')');
      return f;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "t") return SmoothFn::identity();
      if (id == "e") return SmoothFn::constant(std::exp(1.0));
      if (id == "exp" || id == "log" || id == "sqrt") {
        expect('(');
        SmoothFn a = expr();
        expect(')');
        if (id == "exp") return SmoothFn::exp(a);
        if (id == "log") return SmoothFn::log(a);
        return SmoothFn::pow(a, 1, 2);
      }
      if (id == "bump") {
        expect('(');
        const double eta = number_literal();
        SmoothFn arg = SmoothFn::identity();
        if (eat(',')) arg = expr();
        expect(')');
        return SmoothFn::bump(eta, arg);
      }
      if (id == "blend") {
        expect('(');
        const double eta = number_literal();
        expect(',');
        SmoothFn inner = expr();
        expect(',');
        SmoothFn outer = expr();
        expect(')');
        return SmoothFn::blend(eta, inner, outer);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

SmoothFn parse_expression(const std::string& text) { return Parser(text).parse(); }

}  // namespace gnat
