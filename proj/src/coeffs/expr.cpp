#include "coeffs/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace cornerfem {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  double number = 0;
  std::string ident;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t k = 0;
  while (k < s.size()) {
    char c = s[k];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++k;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s.c_str() + k;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) throw ValidationError("expression: bad number at '" + s.substr(k) + "'");
      out.push_back({Tok::Number, v, {}});
      k += std::size_t(end - begin);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = k;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, 0, s.substr(k, j - k)});
      k = j;
      continue;
    }
    switch (c) {
      case '+': out.push_back({Tok::Plus, 0, {}}); break;
      case '-': out.push_back({Tok::Minus, 0, {}}); break;
      case '*': out.push_back({Tok::Star, 0, {}}); break;
      case '/': out.push_back({Tok::Slash, 0, {}}); break;
      case '^': out.push_back({Tok::Caret, 0, {}}); break;
      case '(': out.push_back({Tok::LParen, 0, {}}); break;
      case ')': out.push_back({Tok::RParen, 0, {}}); break;
      default: throw ValidationError(std::string("expression: unexpected character '") + c + "'");
    }
    ++k;
  }
  out.push_back({Tok::End, 0, {}});
  return out;
}

// Expression AST evaluated on jets.
struct Node {
  virtual ~Node() = default;
  virtual Jet eval(const Domain& dom, const Vec2& x, int ord) const = 0;
  // constant-folded value when the subtree is constant (used for exponents)
  virtual bool constant(Complex* v) const {
    (void)v;
    return false;
  }
};
using NodePtr = std::shared_ptr<const Node>;

struct ConstNode final : Node {
  Complex v;
  explicit ConstNode(Complex c) : v(c) {}
  Jet eval(const Domain&, const Vec2&, int ord) const override { return Jet::constant(v, ord); }
  bool constant(Complex* out) const override {
    *out = v;
    return true;
  }
};

struct VarNode final : Node {
  enum class Which { X, Y, R, Theta } which;
  explicit VarNode(Which w) : which(w) {}
  Jet eval(const Domain& dom, const Vec2& x, int ord) const override {
    switch (which) {
      case Which::X: return Jet::variable_x(x.x(), ord);
      case Which::Y: return Jet::variable_y(x.y(), ord);
      case Which::R: return dom.weight_jet(x, ord);
      case Which::Theta: {
        int v = dom.nearest_vertex(x);
        return dom.polar_jets(v, x, ord).second;
      }
    }
    return Jet::constant(0.0, ord);
  }
};

struct UnaryNode final : Node {
  enum class Op { Neg, Sin, Cos, Exp, Log } op;
  NodePtr arg;
  UnaryNode(Op o, NodePtr a) : op(o), arg(std::move(a)) {}
  Jet eval(const Domain& dom, const Vec2& x, int ord) const override {
    Jet a = arg->eval(dom, x, ord);
    switch (op) {
      case Op::Neg: return -a;
      case Op::Sin: return sin(a);
      case Op::Cos: return cos(a);
      case Op::Exp: return exp(a);
      case Op::Log: return log(a);
    }
    return a;
  }
  bool constant(Complex* out) const override {
    Complex v;
    if (!arg->constant(&v)) return false;
    switch (op) {
      case Op::Neg: *out = -v; break;
      case Op::Sin: *out = std::sin(v); break;
      case Op::Cos: *out = std::cos(v); break;
      case Op::Exp: *out = std::exp(v); break;
      case Op::Log: *out = std::log(v); break;
    }
    return true;
  }
};

struct BinaryNode final : Node {
  enum class Op { Add, Sub, Mul, Div, Pow } op;
  NodePtr lhs, rhs;
  BinaryNode(Op o, NodePtr l, NodePtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
  Jet eval(const Domain& dom, const Vec2& x, int ord) const override {
    if (op == Op::Pow) {
      Complex e;
      if (!rhs->constant(&e) || std::abs(e.imag()) > 0)
        throw ValidationError("expression: exponent of ^ must be a real constant");
      return pow(lhs->eval(dom, x, ord), e.real());
    }
    Jet a = lhs->eval(dom, x, ord);
    Jet b = rhs->eval(dom, x, ord);
    switch (op) {
      case Op::Add: return a + b;
      case Op::Sub: return a - b;
      case Op::Mul: return a * b;
      case Op::Div: return a / b;
      default: return a;
    }
  }
  bool constant(Complex* out) const override {
    Complex a, b;
    if (!lhs->constant(&a) || !rhs->constant(&b)) return false;
    switch (op) {
      case Op::Add: *out = a + b; break;
      case Op::Sub: *out = a - b; break;
      case Op::Mul: *out = a * b; break;
      case Op::Div: *out = a / b; break;
      case Op::Pow: *out = std::pow(a, b); break;
    }
    return true;
  }
};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  NodePtr parse() {
    NodePtr e = expression();
    expect(Tok::End, "trailing tokens");
    return e;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) throw ValidationError(std::string("expression: expected ") + what);
    ++pos_;
  }

  NodePtr expression() {  // + and -
    NodePtr e = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      Tok k = take().kind;
      NodePtr r = term();
      e = std::make_shared<BinaryNode>(
          k == Tok::Plus ? BinaryNode::Op::Add : BinaryNode::Op::Sub, e, r);
    }
    return e;
  }

  NodePtr term() {  // * and /
    NodePtr e = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      Tok k = take().kind;
      NodePtr r = unary();
      e = std::make_shared<BinaryNode>(
          k == Tok::Star ? BinaryNode::Op::Mul : BinaryNode::Op::Div, e, r);
    }
    return e;
  }

  NodePtr unary() {
    if (peek().kind == Tok::Minus) {
      take();
      return std::make_shared<UnaryNode>(UnaryNode::Op::Neg, unary());
    }
    if (peek().kind == Tok::Plus) {
      take();
      return unary();
    }
    return power();
  }

  NodePtr power() {  // right-associative ^
    NodePtr base = primary();
    if (peek().kind == Tok::Caret) {
      take();
      NodePtr e = unary();  // allows 2^-3
      return std::make_shared<BinaryNode>(BinaryNode::Op::Pow, base, e);
    }
    return base;
  }

  NodePtr primary() {
    Token t = take();
    switch (t.kind) {
      case Tok::Number: return std::make_shared<ConstNode>(Complex(t.number));
      case Tok::LParen: {
        NodePtr e = expression();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        const std::string& id = t.ident;
        if (id == "x") return std::make_shared<VarNode>(VarNode::Which::X);
        if (id == "y") return std::make_shared<VarNode>(VarNode::Which::Y);
        if (id == "r") return std::make_shared<VarNode>(VarNode::Which::R);
        if (id == "theta") return std::make_shared<VarNode>(VarNode::Which::Theta);
        if (id == "pi") return std::make_shared<ConstNode>(Complex(M_PI));
        if (id == "i") return std::make_shared<ConstNode>(Complex(0.0, 1.0));
        if (id == "sin" || id == "cos" || id == "exp" || id == "log") {
          expect(Tok::LParen, "'(' after function name");
          NodePtr a = expression();
          expect(Tok::RParen, "')'");
          UnaryNode::Op op = id == "sin"   ? UnaryNode::Op::Sin
                             : id == "cos" ? UnaryNode::Op::Cos
                             : id == "exp" ? UnaryNode::Op::Exp
                                           : UnaryNode::Op::Log;
          return std::make_shared<UnaryNode>(op, a);
        }
        throw ValidationError("expression: unknown identifier '" + id + "'");
      }
      default: throw ValidationError("expression: unexpected token");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

FieldPtr parse_expression(const std::string& text, std::shared_ptr<const Domain> domain,
                          int singular_exponent) {
  NodePtr ast = Parser(tokenize(text)).parse();
  return make_field(
      [ast, domain](const Vec2& x, int ord) { return ast->eval(*domain, x, ord); },
      singular_exponent);
}

}  // namespace cornerfem
