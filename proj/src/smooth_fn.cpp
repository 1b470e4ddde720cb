#include "gnat/smooth_fn.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "gnat/errors.hpp"

namespace gnat {

struct SmoothFn::Node {
  Kind kind = Kind::Const;
  double value = 0.0;  // Const: the constant; Bump: eta
  long num = 1, den = 1;  // Pow exponent
  std::vector<SmoothFn> args;
};

namespace {

const char* kind_name(SmoothFn::Kind k) {
  switch (k) {
    case SmoothFn::Kind::Const: return "const";
    case SmoothFn::Kind::T: return "t";
    case SmoothFn::Kind::Add: return "add";
    case SmoothFn::Kind::Mul: return "mul";
    case SmoothFn::Kind::Neg: return "neg";
    case SmoothFn::Kind::Inv: return "inv";
    case SmoothFn::Kind::Pow: return "pow";
    case SmoothFn::Kind::Exp: return "exp";
    case SmoothFn::Kind::Log: return "log";
    case SmoothFn::Kind::Bump: return "bump";
    case SmoothFn::Kind::Blend: return "blend";
  }
  return "?";
}

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

[[noreturn]] void domain_fail(const SmoothFn& node, double t, const std::string& why) {
  throw DomainError("domain error in node '" + node.to_string() + "' at t=" + fmt_num(t) + ": " +
                    why);
}

}  // namespace

SmoothFn::SmoothFn() : SmoothFn(constant(0.0)) {}

SmoothFn SmoothFn::constant(double c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = c;
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::identity() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::T;
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::sum(std::vector<SmoothFn> terms) {
  if (terms.empty()) return constant(0.0);
  if (terms.size() == 1) return terms.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Add;
  n->args = std::move(terms);
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::product(std::vector<SmoothFn> factors) {
  if (factors.empty()) return constant(1.0);
  if (factors.size() == 1) return factors.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mul;
  n->args = std::move(factors);
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::neg(SmoothFn f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Neg;
  n->args = {std::move(f)};
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::inv(SmoothFn f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Inv;
  n->args = {std::move(f)};
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::pow(SmoothFn f, long num, long den) {
  if (den == 0) throw ParameterError("pow: zero denominator in exponent");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num, den);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->num = g ? num / g : num;
  n->den = g ? den / g : den;
  n->args = {std::move(f)};
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::exp(SmoothFn f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exp;
  n->args = {std::move(f)};
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::log(SmoothFn f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Log;
  n->args = {std::move(f)};
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::bump(double eta, SmoothFn arg) {
  if (!(eta > 0.0)) throw ParameterError("bump: eta must be positive, got " + fmt_num(eta));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bump;
  n->value = eta;
  n->args = {std::move(arg)};
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::blend(double eta, SmoothFn inner, SmoothFn outer) {
  if (!(eta > 0.0)) throw ParameterError("blend: eta must be positive, got " + fmt_num(eta));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Blend;
  n->value = eta;
  n->args = {std::move(inner), std::move(outer)};
  return SmoothFn(std::move(n));
}

SmoothFn::Kind SmoothFn::kind() const { return node_->kind; }
bool SmoothFn::is_zero_constant() const { return node_->kind == Kind::Const && node_->value == 0.0; }
bool SmoothFn::is_constant() const { return node_->kind == Kind::Const; }
double SmoothFn::constant_value() const { return node_->value; }

Jet2 smooth_step(const Jet2& x) {
  if (x.value <= 0.0) return Jet2::constant(0.0);
  if (x.value >= 1.0) return Jet2::constant(1.0);
  // s = 1 / (1 + e^w), w = 1/x - 1/(1-x); flat tails are exact zeros in double.
  const Jet2 w = reciprocal(x) - reciprocal(1.0 - x);
  if (w.value > 700.0) return Jet2::constant(0.0);
  if (w.value < -700.0) return Jet2::constant(1.0);
  return reciprocal(1.0 + gnat::exp(w));
}

Jet2 SmoothFn::eval(double t) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return Jet2::constant(n.value);
    case Kind::T: return Jet2::variable(t);
    case Kind::Add: {
      Jet2 acc = Jet2::constant(0.0);
      for (const auto& a : n.args) acc = acc + a.eval(t);
      return acc;
    }
    case Kind::Mul: {
      Jet2 acc = Jet2::constant(1.0);
      for (const auto& a : n.args) acc = acc * a.eval(t);
      return acc;
    }
    case Kind::Neg: return -n.args[0].eval(t);
    case Kind::Inv: {
      const Jet2 a = n.args[0].eval(t);
      if (a.value == 0.0 || !std::isfinite(a.value)) domain_fail(*this, t, "reciprocal of zero");
      return reciprocal(a);
    }
    case Kind::Pow: {
      const Jet2 a = n.args[0].eval(t);
      const double r = static_cast<double>(n.num) / static_cast<double>(n.den);
      const bool integer = n.den == 1;
      if (a.value == 0.0) {
        // Need finite f, f', f'' at 0: allowed for exponents 0, 1 or >= 2.
        if (!(r == 0.0 || r == 1.0 || r >= 2.0))
          domain_fail(*this, t, "power with exponent " + fmt_num(r) + " at zero base");
      } else if (a.value < 0.0 && !integer) {
        domain_fail(*this, t, "non-integer power of a negative base");
      }
      return gnat::pow(a, r);
    }
    case Kind::Exp: return gnat::exp(n.args[0].eval(t));
    case Kind::Log: {
      const Jet2 a = n.args[0].eval(t);
      if (!(a.value > 0.0)) domain_fail(*this, t, "log of non-positive argument");
      return gnat::log(a);
    }
    case Kind::Bump: {
      const Jet2 a = n.args[0].eval(t);
      const double half = 0.5 * n.value;
      const Jet2 x = (a - half) / half;
      return 1.0 - smooth_step(x);
    }
    case Kind::Blend: {
      const double eta = n.value;
      if (t <= 0.5 * eta) return n.args[0].eval(t);
      if (t >= eta) return n.args[1].eval(t);
      const Jet2 f = 1.0 - smooth_step((Jet2::variable(t) - 0.5 * eta) / (0.5 * eta));
      return f * n.args[0].eval(t) + (1.0 - f) * n.args[1].eval(t);
    }
  }
  throw std::logic_error("unknown SmoothFn node");
}

std::string SmoothFn::to_string() const {
  const Node& n = *node_;
  auto join = [&](const char* sep) {
    std::string s = "(";
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      if (i) s += sep;
      s += n.args[i].to_string();
    }
    return s + ")";
  };
  switch (n.kind) {
    case Kind::Const: return fmt_num(n.value);
    case Kind::T: return "t";
    case Kind::Add: return join(" + ");
    case Kind::Mul: return join("*");
    case Kind::Neg: return "-" + n.args[0].to_string();
    case Kind::Inv: return "1/" + n.args[0].to_string();
    case Kind::Pow:
      return n.args[0].to_string() + "^(" + std::to_string(n.num) +
             (n.den == 1 ? "" : "/" + std::to_string(n.den)) + ")";
    case Kind::Exp: return "exp(" + n.args[0].to_string() + ")";
    case Kind::Log: return "log(" + n.args[0].to_string() + ")";
    case Kind::Bump: return "bump[" + fmt_num(n.value) + "](" + n.args[0].to_string() + ")";
    case Kind::Blend:
      return "blend[" + fmt_num(n.value) + "](" + n.args[0].to_string() + ", " +
             n.args[1].to_string() + ")";
  }
  return "?";
}

nlohmann::json SmoothFn::to_json() const {
  const Node& n = *node_;
  nlohmann::json j;
  j["kind"] = kind_name(n.kind);
  switch (n.kind) {
    case Kind::Const: j["value"] = n.value; break;
    case Kind::T: break;
    case Kind::Add:
    case Kind::Mul: {
      j["args"] = nlohmann::json::array();
      for (const auto& a : n.args) j["args"].push_back(a.to_json());
      break;
    }
    case Kind::Pow:
      j["num"] = n.num;
      j["den"] = n.den;
      j["arg"] = n.args[0].to_json();
      break;
    case Kind::Bump:
      j["eta"] = n.value;
      if (n.args[0].kind() != Kind::T) j["arg"] = n.args[0].to_json();
      break;
    case Kind::Blend:
      j["eta"] = n.value;
      j["inner"] = n.args[0].to_json();
      j["outer"] = n.args[1].to_json();
      break;
    default: j["arg"] = n.args[0].to_json(); break;
  }
  return j;
}

SmoothFn SmoothFn::from_json(const nlohmann::json& j) {
  if (j.is_number()) return constant(j.get<double>());
  if (j.is_string()) return parse_expression(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind"))
    throw ParameterError("expression must be a number, an infix string, or an object with \"kind\"");
  const std::string k = j.at("kind").get<std::string>();
  auto arg = [&]() {
    if (!j.contains("arg")) throw ParameterError("expression kind '" + k + "' needs \"arg\"");
    return from_json(j.at("arg"));
  };
  auto args = [&]() {
    if (!j.contains("args") || !j.at("args").is_array())
      throw ParameterError("expression kind '" + k + "' needs an \"args\" array");
    std::vector<SmoothFn> v;
    for (const auto& a : j.at("args")) v.push_back(from_json(a));
    return v;
  };
  if (k == "const") return constant(j.at("value").get<double>());
  if (k == "t") return identity();
  if (k == "add") return sum(args());
  if (k == "mul") return product(args());
  if (k == "neg") return neg(arg());
  if (k == "inv") return inv(arg());
  if (k == "exp") return exp(arg());
  if (k == "log") return log(arg());
  if (k == "bump") {
    const double eta = j.at("eta").get<double>();
    return j.contains("arg") ? bump(eta, from_json(j.at("arg"))) : bump(eta);
  }
  if (k == "blend")
    return blend(j.at("eta").get<double>(), from_json(j.at("inner")), from_json(j.at("outer")));
  if (k == "pow") {
    long num = 1, den = 1;
    if (j.contains("exponent")) {
      const auto& e = j.at("exponent");
      if (e.is_array() && e.size() == 2) {
        num = e[0].get<long>();
        den = e[1].get<long>();
      } else if (e.is_number_integer()) {
        num = e.get<long>();
      } else {
        throw ParameterError("pow exponent must be an integer or [num, den]");
      }
    } else {
      num = j.at("num").get<long>();
      den = j.value("den", 1L);
    }
    return pow(arg(), num, den);
  }
  throw ParameterError("unknown expression kind '" + k + "'");
}

SmoothFn operator+(const SmoothFn& a, const SmoothFn& b) { return SmoothFn::sum({a, b}); }
SmoothFn operator-(const SmoothFn& a, const SmoothFn& b) { return SmoothFn::sum({a, SmoothFn::neg(b)}); }
SmoothFn operator-(const SmoothFn& a) { return SmoothFn::neg(a); }
SmoothFn operator*(const SmoothFn& a, const SmoothFn& b) { return SmoothFn::product({a, b}); }
SmoothFn operator*(double c, const SmoothFn& a) { return SmoothFn::product({SmoothFn::constant(c), a}); }
SmoothFn operator/(const SmoothFn& a, const SmoothFn& b) { return SmoothFn::product({a, SmoothFn::inv(b)}); }

Jet2 eval_jet2(const SmoothFn& f, double t) {
  if (!(t >= 0.0)) throw DomainError("evaluation point must be >= 0, got t=" + fmt_num(t));
  return f.eval(t);
}

SmoothFn build_bump(double eta) { return SmoothFn::bump(eta); }

SmoothFn SmoothFn::derivative_impl() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return constant(0.0);
    case Kind::T: return constant(1.0);
    case Kind::Add: {
      std::vector<SmoothFn> terms;
      for (const auto& a : n.args) {
        SmoothFn d = a.derivative_impl();
        if (!d.is_zero_constant()) terms.push_back(std::move(d));
      }
      return sum(std::move(terms));
    }
    case Kind::Mul: {
      std::vector<SmoothFn> terms;
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        SmoothFn d = n.args[i].derivative_impl();
        if (d.is_zero_constant()) continue;
        std::vector<SmoothFn> f;
        for (std::size_t j = 0; j < n.args.size(); ++j) f.push_back(j == i ? d : n.args[j]);
        terms.push_back(product(std::move(f)));
      }
      return sum(std::move(terms));
    }
    case Kind::Neg: return neg(n.args[0].derivative_impl());
    case Kind::Inv:
      return neg(product({n.args[0].derivative_impl(), pow(n.args[0], -2)}));
    case Kind::Pow: {
      if (n.num == 0) return constant(0.0);
      const double r = static_cast<double>(n.num) / static_cast<double>(n.den);
      return product({constant(r), pow(n.args[0], n.num - n.den, n.den), n.args[0].derivative_impl()});
    }
    case Kind::Exp: return product({*this, n.args[0].derivative_impl()});
    case Kind::Log: return product({n.args[0].derivative_impl(), inv(n.args[0])});
    case Kind::Bump:
    case Kind::Blend:
      throw ParameterError("symbolic derivative of a cutoff node is not supported: " + to_string());
  }
  throw std::logic_error("unknown SmoothFn node");
}

SmoothFn derivative(const SmoothFn& f) { return f.derivative_impl(); }

}  // namespace gnat
