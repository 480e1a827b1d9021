#include "hdual/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

namespace hdual {

struct Expr::Node {
  ExprKind kind;
  DualComplex value;
  Var var = Var::q;
  std::vector<Expr> operands;  // empty for leaves; a vector so leaves never recurse into Expr()
  unsigned n = 0;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_constant_node(DualComplex c) {
  auto node = std::make_shared<Expr::Node>();
  node->kind = ExprKind::constant;
  node->value = c;
  return node;
}

DualComplex int_power(DualComplex base, unsigned n) {
  DualComplex out(1.0);
  for (unsigned k = 0; k < n; ++k) out *= base;
  return out;
}

}  // namespace

Expr::Expr() {
  static const NodePtr zero = make_constant_node(DualComplex{});
  node_ = zero;
}
Expr::Expr(DualComplex c) : node_(make_constant_node(c)) {}
Expr::Expr(double c) : Expr(DualComplex(c)) {}
Expr::Expr(int c) : Expr(DualComplex(static_cast<double>(c))) {}

Expr Expr::variable(Var v) {
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::variable;
  node->var = v;
  return Expr(std::move(node));
}

ExprKind Expr::kind() const { return node_->kind; }

std::optional<DualComplex> Expr::as_constant() const {
  if (node_->kind == ExprKind::constant) return node_->value;
  return std::nullopt;
}

bool Expr::is_zero() const { return node_->kind == ExprKind::constant && node_->value.is_zero(); }
bool Expr::is_one() const { return node_->kind == ExprKind::constant && node_->value.is_one(); }

Var Expr::variable_name() const { return node_->var; }
const Expr& Expr::lhs() const { return node_->operands.at(0); }
const Expr& Expr::rhs() const { return node_->operands.at(1); }
const Expr& Expr::operand() const { return node_->operands.at(0); }
unsigned Expr::exponent() const { return node_->n; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  auto ca = a.as_constant();
  auto cb = b.as_constant();
  if (ca && cb) return Expr(*ca + *cb);
  auto node = std::make_shared<Expr::Node>();
  node->kind = ExprKind::add;
  node->operands = {a, b};
  return Expr(std::move(node));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  auto ca = a.as_constant();
  auto cb = b.as_constant();
  if (ca && cb) return Expr(*ca * *cb);
  auto node = std::make_shared<Expr::Node>();
  node->kind = ExprKind::mul;
  node->operands = {a, b};
  return Expr(std::move(node));
}

Expr operator-(const Expr& a) {
  if (auto c = a.as_constant()) return Expr(-*c);
  if (a.kind() == ExprKind::neg) return a.operand();
  auto node = std::make_shared<Expr::Node>();
  node->kind = ExprKind::neg;
  node->operands = {a};
  return Expr(std::move(node));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr pow(const Expr& base, unsigned n) {
  if (n == 0) return Expr(1.0);
  if (n == 1) return base;
  if (auto c = base.as_constant()) return Expr(int_power(*c, n));
  auto node = std::make_shared<Expr::Node>();
  node->kind = ExprKind::pow;
  node->operands = {base};
  node->n = n;
  return Expr(std::move(node));
}

namespace {

Expr make_unary(ExprKind kind, const Expr& a) {
  if (auto c = a.as_constant()) {
    switch (kind) {
      case ExprKind::exp: return Expr(exp(*c));
      case ExprKind::sin: return Expr(sin(*c));
      case ExprKind::cos: return Expr(cos(*c));
      default: break;
    }
  }
  auto node = std::make_shared<Expr::Node>();
  node->kind = kind;
  node->operands = {a};
  return Expr(std::move(node));
}

}  // namespace

Expr exp(const Expr& a) { return make_unary(ExprKind::exp, a); }
Expr sin(const Expr& a) { return make_unary(ExprKind::sin, a); }
Expr cos(const Expr& a) { return make_unary(ExprKind::cos, a); }

namespace {

// Trees share subtrees heavily after diff and substitute, so every walker
// memoizes on node identity.
struct NodeKey {
  const void* ptr;
  bool operator==(const NodeKey&) const = default;
};
struct NodeKeyHash {
  std::size_t operator()(NodeKey k) const { return std::hash<const void*>{}(k.ptr); }
};

template <typename V>
using Memo = std::unordered_map<NodeKey, V, NodeKeyHash>;

NodeKey key_of(const Expr& e) { return NodeKey{e.identity()}; }

class Evaluator {
 public:
  explicit Evaluator(const Env& env) : env_(env) {}

  DualComplex operator()(const Expr& f) {
    const NodeKey key = key_of(f);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    DualComplex value;
    switch (f.kind()) {
      case ExprKind::constant: value = *f.as_constant(); break;
      case ExprKind::variable: value = f.variable_name() == Var::q ? env_.q : env_.p; break;
      case ExprKind::add: value = (*this)(f.lhs()) + (*this)(f.rhs()); break;
      case ExprKind::mul: value = (*this)(f.lhs()) * (*this)(f.rhs()); break;
      case ExprKind::neg: value = -(*this)(f.operand()); break;
      case ExprKind::pow: value = int_power((*this)(f.operand()), f.exponent()); break;
      case ExprKind::exp: value = exp((*this)(f.operand())); break;
      case ExprKind::sin: value = sin((*this)(f.operand())); break;
      case ExprKind::cos: value = cos((*this)(f.operand())); break;
    }
    memo_.emplace(key, value);
    return value;
  }

 private:
  const Env& env_;
  Memo<DualComplex> memo_;
};

class Differentiator {
 public:
  explicit Differentiator(Var v) : v_(v) {}

  Expr operator()(const Expr& f) {
    const NodeKey key = key_of(f);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Expr d;
    switch (f.kind()) {
      case ExprKind::constant: break;
      case ExprKind::variable: d = Expr(f.variable_name() == v_ ? 1.0 : 0.0); break;
      case ExprKind::add: d = (*this)(f.lhs()) + (*this)(f.rhs()); break;
      case ExprKind::mul: d = (*this)(f.lhs()) * f.rhs() + f.lhs() * (*this)(f.rhs()); break;
      case ExprKind::neg: d = -(*this)(f.operand()); break;
      case ExprKind::pow: {
        const unsigned n = f.exponent();
        d = Expr(static_cast<double>(n)) * pow(f.operand(), n - 1) * (*this)(f.operand());
        break;
      }
      case ExprKind::exp: d = f * (*this)(f.operand()); break;
      case ExprKind::sin: d = cos(f.operand()) * (*this)(f.operand()); break;
      case ExprKind::cos: d = -(sin(f.operand()) * (*this)(f.operand())); break;
    }
    memo_.emplace(key, d);
    return d;
  }

 private:
  Var v_;
  Memo<Expr> memo_;
};

class Substituter {
 public:
  Substituter(const Expr& q_new, const Expr& p_new) : q_(q_new), p_(p_new) {}

  Expr operator()(const Expr& f) {
    const NodeKey key = key_of(f);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Expr out;
    switch (f.kind()) {
      case ExprKind::constant: out = f; break;
      case ExprKind::variable: out = f.variable_name() == Var::q ? q_ : p_; break;
      case ExprKind::add: out = (*this)(f.lhs()) + (*this)(f.rhs()); break;
      case ExprKind::mul: out = (*this)(f.lhs()) * (*this)(f.rhs()); break;
      case ExprKind::neg: out = -(*this)(f.operand()); break;
      case ExprKind::pow: out = pow((*this)(f.operand()), f.exponent()); break;
      case ExprKind::exp: out = exp((*this)(f.operand())); break;
      case ExprKind::sin: out = sin((*this)(f.operand())); break;
      case ExprKind::cos: out = cos((*this)(f.operand())); break;
    }
    memo_.emplace(key, out);
    return out;
  }

 private:
  const Expr& q_;
  const Expr& p_;
  Memo<Expr> memo_;
};

}  // namespace

DualComplex eval(const Expr& f, const Env& env) { return Evaluator(env)(f); }

Expr diff(const Expr& f, Var v) { return Differentiator(v)(f); }

Expr substitute(const Expr& f, const Expr& q_new, const Expr& p_new) {
  return Substituter(q_new, p_new)(f);
}

double max_residual(const Expr& f, const Expr& g, std::span<const Env> points) {
  double worst = 0.0;
  for (const Env& env : points) {
    const double r = max_abs_diff(eval(f, env), eval(g, env));
    if (std::isnan(r)) return r;
    worst = std::max(worst, r);
  }
  return worst;
}

double max_magnitude(const Expr& f, std::span<const Env> points) {
  double worst = 0.0;
  for (const Env& env : points) worst = std::max(worst, max_abs(eval(f, env)));
  return worst;
}

bool expr_approx_eq(const Expr& f, const Expr& g, std::span<const Env> points, double tol) {
  const double r = max_residual(f, g, points);
  return r <= tol;
}

std::vector<Env> sample_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::vector<Env> points;
  points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double q = coord(rng);
    const double p = coord(rng);
    points.push_back({q, p});
  }
  return points;
}

std::size_t Expr::node_count() const {
  std::size_t count = 1;
  switch (kind()) {
    case ExprKind::add:
    case ExprKind::mul: count += lhs().node_count() + rhs().node_count(); break;
    case ExprKind::neg:
    case ExprKind::pow:
    case ExprKind::exp:
    case ExprKind::sin:
    case ExprKind::cos: count += operand().node_count(); break;
    default: break;
  }
  return count;
}

std::string Expr::str() const {
  switch (kind()) {
    case ExprKind::constant: {
      const DualComplex c = *as_constant();
      std::string s = to_string(c);
      if (c.is_real() && c.re >= 0) return s;
      return "(" + s + ")";
    }
    case ExprKind::variable: return variable_name() == Var::q ? "q" : "p";
    case ExprKind::add: return "(" + lhs().str() + " + " + rhs().str() + ")";
    case ExprKind::mul: return lhs().str() + "*" + rhs().str();
    case ExprKind::neg: return "-(" + operand().str() + ")";
    case ExprKind::pow: return "(" + operand().str() + ")^" + std::to_string(exponent());
    case ExprKind::exp: return "exp(" + operand().str() + ")";
    case ExprKind::sin: return "sin(" + operand().str() + ")";
    case ExprKind::cos: return "cos(" + operand().str() + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("parse error at position " + std::to_string(pos_) + ": " + msg, pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      if (accept('+')) {
        e = e + parse_product();
      } else if (accept('-')) {
        e = e - parse_product();
      } else {
        return e;
      }
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    while (accept('*')) e = e * parse_unary();
    return e;
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a non-negative integer");
      unsigned n = 0;
      auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, n);
      if (ec != std::errc()) fail("exponent out of range");
      return pow(base, n);
    }
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view word = text_.substr(start, pos_ - start);
      if (word == "q") return Expr::q();
      if (word == "p") return Expr::p();
      if (word == "i") return Expr(DualComplex::unit_i());
      if (word == "exp" || word == "sin" || word == "cos") {
        expect('(');
        Expr arg = parse_sum();
        expect(')');
        if (word == "exp") return exp(arg);
        if (word == "sin") return sin(arg);
        return cos(arg);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(word) + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace hdual
