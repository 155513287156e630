#include "icrl/game24/expr.hpp"

#include <algorithm>
#include <cctype>

namespace icrl::game24 {

namespace {

constexpr std::size_t kMaxDigits = 12;

int precedence(Op op) { return (op == Op::Add || op == Op::Sub) ? 1 : 2; }

bool all_digits(std::string_view s) {
  return !s.empty() && s.size() <= kMaxDigits &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::int64_t to_int(std::string_view s) {
  std::int64_t v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

std::int64_t pow10(std::size_t n) {
  std::int64_t v = 1;
  while (n-- > 0) v *= 10;
  return v;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  Expr parse_sum() {
    Expr lhs = parse_product();
    while (true) {
      skip_space();
      if (eat('+')) {
        lhs = Expr::binary(Op::Add, lhs, parse_product());
      } else if (eat('-')) {
        lhs = Expr::binary(Op::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_product() {
    Expr lhs = parse_atom();
    while (true) {
      skip_space();
      if (eat('*')) {
        lhs = Expr::binary(Op::Mul, lhs, parse_atom());
      } else if (eat('/')) {
        lhs = Expr::binary(Op::Div, lhs, parse_atom());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_atom() {
    skip_space();
    if (eat('(') || eat('[')) {
      Expr inner = parse_sum();
      skip_space();
      if (!eat(')') && !eat(']')) fail("missing ')'");
      return inner;
    }
    std::size_t begin = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '.')) {
      ++pos_;
    }
    if (begin == pos_) fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'"
                                                : "unexpected end of expression");
    Rational value;
    if (!parse_rational(text_.substr(begin, pos_ - begin), value)) {
      fail("bad number '" + std::string(text_.substr(begin, pos_ - begin)) + "'");
    }
    return Expr::leaf(value);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ExprParseError(what + " in \"" + std::string(text_) + "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Rational apply(Op op, Rational lhs, Rational rhs) {
  switch (op) {
    case Op::Add:
      return lhs + rhs;
    case Op::Sub:
      return lhs - rhs;
    case Op::Mul:
      return lhs * rhs;
    case Op::Div:
      if (rhs.numerator() == 0) throw DivisionByZero();
      return lhs / rhs;
  }
  throw std::logic_error("unknown operator");
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

bool parse_rational(std::string_view text, Rational& out) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den) || to_int(den) == 0) return false;
    out = Rational(to_int(num), to_int(den));
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac) || whole.size() + frac.size() > kMaxDigits) {
      return false;
    }
    std::int64_t scale = pow10(frac.size());
    out = Rational(to_int(whole) * scale + to_int(frac), scale);
  } else {
    if (!all_digits(text)) return false;
    out = Rational(to_int(text));
  }
  if (negative) out = -out;
  return true;
}

Expr Expr::leaf(Rational value) {
  Expr e;
  auto node = std::make_shared<Node>();
  node->value = value;
  e.node_ = std::move(node);
  return e;
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  Expr e;
  auto node = std::make_shared<Node>();
  node->op = op;
  node->lhs = std::make_shared<const Expr>(std::move(lhs));
  node->rhs = std::make_shared<const Expr>(std::move(rhs));
  e.node_ = std::move(node);
  return e;
}

Rational Expr::evaluate() const {
  if (is_leaf()) return value();
  return apply(op(), lhs().evaluate(), rhs().evaluate());
}

std::vector<Rational> Expr::leaves() const {
  if (is_leaf()) return {value()};
  auto out = lhs().leaves();
  auto right = rhs().leaves();
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

std::string Expr::to_string() const {
  if (is_leaf()) return format_rational(value());
  auto wrap = [&](const Expr& child, bool right_side) {
    std::string s = child.to_string();
    if (child.is_leaf()) {
      return child.value().numerator() < 0 ? "(" + s + ")" : s;
    }
    int mine = precedence(op());
    int theirs = precedence(child.op());
    bool needs = theirs < mine || (right_side && theirs == mine &&
                                   (op() == Op::Sub || op() == Op::Div));
    return needs ? "(" + s + ")" : s;
  };
  return wrap(lhs(), false) + " " + static_cast<char>(op()) + " " + wrap(rhs(), true);
}

Expr parse_expression(std::string_view text) {
  std::string normalized = normalize_operators(text);
  return Parser(normalized).parse();
}

std::string normalize_operators(std::string_view text) {
  static const std::pair<std::string_view, std::string_view> kReplacements[] = {
      {"\xC3\x97", "*"},          // ×
      {"\xC3\xB7", "/"},          // ÷
      {"\xE2\x88\x92", "-"},      // −
      {"\xE2\x80\x93", "-"},      // –
      {"\xE2\x88\x97", "*"},      // ∗
      {"\xC2\xA0", " "},          // nbsp
  };
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    bool replaced = false;
    for (const auto& [from, to] : kReplacements) {
      if (text.substr(i, from.size()) == from) {
        out += to;
        i += from.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) out += text[i++];
  }
  return out;
}

bool same_multiset(std::vector<Rational> a, std::vector<Rational> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace icrl::game24
