#pragma once
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnat/jet.hpp"

namespace gnat {

// Expression tree over {const, t, add, mul, neg, inv, pow, exp, log, bump},
// evaluated exactly as a 2-jet. Immutable; copies share structure.
class SmoothFn {
 public:
  enum class Kind { Const, T, Add, Mul, Neg, Inv, Pow, Exp, Log, Bump, Blend };

  SmoothFn();  // the constant 0

  static SmoothFn constant(double c);
  static SmoothFn identity();
  static SmoothFn sum(std::vector<SmoothFn> terms);
  static SmoothFn product(std::vector<SmoothFn> factors);
  static SmoothFn neg(SmoothFn f);
  static SmoothFn inv(SmoothFn f);
  // f^(num/den), den > 0.
  static SmoothFn pow(SmoothFn f, long num, long den = 1);
  static SmoothFn exp(SmoothFn f);
  static SmoothFn log(SmoothFn f);
  // The cutoff f_eta(arg): 1 for arg <= eta/2, 0 for arg >= eta, C-infinity.
  static SmoothFn bump(double eta, SmoothFn arg = identity());
  // f_eta(t) * inner + (1 - f_eta(t)) * outer. `inner` is evaluated only for t < eta and
  // `outer` only for t > eta/2, so either may be singular outside its own region.
  static SmoothFn blend(double eta, SmoothFn inner, SmoothFn outer);

  Kind kind() const;
  bool is_zero_constant() const;
  bool is_constant() const;
  double constant_value() const;  // only meaningful for Kind::Const

  Jet2 eval(double t) const;
  double operator()(double t) const { return eval(t).value; }

  std::string to_string() const;
  nlohmann::json to_json() const;
  static SmoothFn from_json(const nlohmann::json& j);

  struct Node;

 private:
  friend SmoothFn derivative(const SmoothFn& f);
  SmoothFn derivative_impl() const;
  explicit SmoothFn(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

SmoothFn operator+(const SmoothFn& a, const SmoothFn& b);
SmoothFn operator-(const SmoothFn& a, const SmoothFn& b);
SmoothFn operator-(const SmoothFn& a);
SmoothFn operator*(const SmoothFn& a, const SmoothFn& b);
SmoothFn operator*(double c, const SmoothFn& a);
SmoothFn operator/(const SmoothFn& a, const SmoothFn& b);

Jet2 eval_jet2(const SmoothFn& f, double t);
// Symbolic d/dt of an expression tree (no simplification). Bump/blend nodes are rejected.
SmoothFn derivative(const SmoothFn& f);
SmoothFn build_bump(double eta);

// Parses infix notation, e.g. "exp(t/2) + (2/3)*t^(3/2)"; see expr_parser.cpp for the grammar.
SmoothFn parse_expression(const std::string& text);

// Smooth step s(x) = e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)}) on (0,1), 0 below, 1 above.
Jet2 smooth_step(const Jet2& x);

}  // namespace gnat
