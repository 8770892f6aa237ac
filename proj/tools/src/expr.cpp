#include "wsspec/cli/expr.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>

namespace wsspec::cli {

namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Affine parse() {
    Affine v = expression();
    skip();
    if (pos_ != text_.size())
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string &what) const {
    throw std::invalid_argument("expression '" + std::string(text_) +
                                "': " + what);
  }

  void skip() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Affine expression() {
    Affine v = term();
    while (true) {
      if (accept('+')) {
        const Affine r = term();
        v = {v.constant + r.constant, v.slope + r.slope};
      } else if (accept('-')) {
        const Affine r = term();
        v = {v.constant - r.constant, v.slope - r.slope};
      } else {
        return v;
      }
    }
  }

  Affine term() {
    Affine v = unary();
    while (true) {
      if (accept('*')) {
        const Affine r = unary();
        if (v.uses_placeholder() && r.uses_placeholder())
          fail("eps appears nonlinearly");
        v = {v.constant * r.constant,
             v.constant * r.slope + v.slope * r.constant};
      } else if (accept('/')) {
        const Affine r = unary();
        if (r.uses_placeholder())
          fail("division by an eps-dependent term");
        if (r.constant == std::complex<double>(0.0))
          fail("division by zero");
        v = {v.constant / r.constant, v.slope / r.constant};
      } else {
        return v;
      }
    }
  }

  Affine unary() {
    if (accept('-')) {
      const Affine v = unary();
      return {-v.constant, -v.slope};
    }
    if (accept('+'))
      return unary();
    return primary();
  }

  Affine primary() {
    skip();
    if (pos_ >= text_.size())
      fail("unexpected end");
    if (accept('(')) {
      Affine v = expression();
      if (!accept(')'))
        fail("missing ')'");
      return v;
    }
    if (text_.substr(pos_, 3) == "eps") {
      pos_ += 3;
      return {0.0, 1.0};
    }
    if (text_[pos_] == 'i') {
      ++pos_;
      return {{0.0, 1.0}, 0.0};
    }
    double value = 0.0;
    const char *begin = text_.data() + pos_;
    const char *end = text_.data() + text_.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr == begin)
      fail("expected a number, 'i', 'eps' or '('");
    pos_ += static_cast<std::size_t>(ptr - begin);
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      ++pos_;
      return {{0.0, value}, 0.0};
    }
    return {value, 0.0};
  }
};

} // namespace

Affine parse_affine(std::string_view text) { return Parser(text).parse(); }

std::vector<Affine> parse_affine_list(std::string_view text) {
  std::vector<Affine> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_affine(text.substr(0, comma)));
    if (comma == std::string_view::npos)
      return out;
    text = text.substr(comma + 1);
  }
}

std::complex<double> parse_complex(std::string_view text) {
  const Affine a = parse_affine(text);
  if (a.uses_placeholder())
    throw std::invalid_argument("expression '" + std::string(text) +
                                "': eps is not allowed here");
  return a.constant;
}

} // namespace wsspec::cli
