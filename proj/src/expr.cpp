#include "ct/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "ct/errors.hpp"

namespace ct {

namespace {

ScalarField make_const(double c, int dim) { return constant_field(c, dim); }

ScalarField make_trig(bool is_cos, int axis, const ContactModel& model) {
  const double k = 2.0 * std::numbers::pi / model.periods[axis];
  const int dim = model.dim();
  ScalarField f;
  if (is_cos) {
    f.value = [k, axis](const Vec& x) { return std::cos(k * x[axis]); };
    f.grad = [k, axis, dim](const Vec& x) {
      Vec g = Vec::Zero(dim);
      g[axis] = -k * std::sin(k * x[axis]);
      return g;
    };
  } else {
    f.value = [k, axis](const Vec& x) { return std::sin(k * x[axis]); };
    f.grad = [k, axis, dim](const Vec& x) {
      Vec g = Vec::Zero(dim);
      g[axis] = k * std::cos(k * x[axis]);
      return g;
    };
  }
  return f;
}

ScalarField add(const ScalarField& a, const ScalarField& b) {
  ScalarField f;
  auto av = a.value, bv = b.value;
  f.value = [av, bv](const Vec& x) { return av(x) + bv(x); };
  if (a.has_grad() && b.has_grad()) {
    auto ag = a.grad, bg = b.grad;
    f.grad = [ag, bg](const Vec& x) { return Vec(ag(x) + bg(x)); };
  }
  return f;
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
  ScalarField f;
  auto av = a.value, bv = b.value;
  f.value = [av, bv](const Vec& x) { return av(x) - bv(x); };
  if (a.has_grad() && b.has_grad()) {
    auto ag = a.grad, bg = b.grad;
    f.grad = [ag, bg](const Vec& x) { return Vec(ag(x) - bg(x)); };
  }
  return f;
}

ScalarField mul(const ScalarField& a, const ScalarField& b) {
  ScalarField f;
  auto av = a.value, bv = b.value;
  f.value = [av, bv](const Vec& x) { return av(x) * bv(x); };
  if (a.has_grad() && b.has_grad()) {
    auto ag = a.grad, bg = b.grad;
    f.grad = [av, bv, ag, bg](const Vec& x) { return Vec(ag(x) * bv(x) + bg(x) * av(x)); };
  }
  return f;
}

ScalarField negate(const ScalarField& a) {
  ScalarField f;
  auto av = a.value;
  f.value = [av](const Vec& x) { return -av(x); };
  if (a.has_grad()) {
    auto ag = a.grad;
    f.grad = [ag](const Vec& x) { return Vec(-ag(x)); };
  }
  return f;
}

class Parser {
 public:
  Parser(const std::string& text, const ContactModel& model) : s_(text), model_(model) {}

  ScalarField parse() {
    ScalarField f = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    f.label = s_;
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigInvalid("expression '" + s_ + "': " + why + " at position " +
                        std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  ScalarField expr() {
    ScalarField acc = term();
    for (;;) {
      if (eat('+')) {
        acc = add(acc, term());
      } else if (eat('-')) {
        acc = sub(acc, term());
      } else {
        return acc;
      }
    }
  }

  ScalarField term() {
    ScalarField acc = factor();
    while (eat('*')) acc = mul(acc, factor());
    return acc;
  }

  ScalarField factor() {
    if (eat('-')) return negate(factor());
    return atom();
  }

  ScalarField atom() {
    skip_ws();
    if (eat('(')) {
      ScalarField f = expr();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return basis_function();
    fail("expected a number, a basis function, or '('");
  }

  ScalarField number() {
    skip_ws();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s_.substr(pos_), &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    return make_const(v, model_.dim());
  }

  ScalarField basis_function() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string name = s_.substr(start, pos_ - start);

    bool is_cos;
    std::string rest;
    if (name.rfind("cos2pi", 0) == 0) {
      is_cos = true;
      rest = name.substr(6);
    } else if (name.rfind("sin2pi", 0) == 0) {
      is_cos = false;
      rest = name.substr(6);
    } else {
      fail("unknown basis function '" + name + "'");
    }

    int axis = -1;
    if (rest == "x") axis = 0;
    else if (rest == "y") axis = 1;
    else if (rest == "z") axis = 2;
    else if (rest.size() >= 2 && rest[0] == 'x') {
      try {
        axis = std::stoi(rest.substr(1)) - 1;
      } catch (const std::exception&) {
        axis = -1;
      }
    }
    if (axis < 0 || axis >= model_.dim())
      fail("basis function '" + name + "' addresses no coordinate of this model");
    return make_trig(is_cos, axis, model_);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  const ContactModel& model_;
};

}  // namespace

ScalarField parse_scalar_field(const std::string& text, const ContactModel& model) {
  if (text.empty()) throw ConfigInvalid("empty expression");
  return Parser(text, model).parse();
}

std::vector<ScalarField> parse_observables(const std::string& text, const ContactModel& model) {
  std::vector<ScalarField> out;
  int depth = 0;
  std::string cur;
  auto flush = [&]() {
    if (cur.find_first_not_of(" \t") == std::string::npos)
      throw ConfigInvalid("observable list has an empty entry");
    out.push_back(parse_scalar_field(cur, model));
    cur.clear();
  };
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

}  // namespace ct
