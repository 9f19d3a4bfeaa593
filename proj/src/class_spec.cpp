#include "sament/class_spec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <type_traits>

#include "sament/errors.hpp"
#include "sament/piecewise.hpp"
#include "sament/signal_io.hpp"

namespace sament {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Validator {
  BasisSpec basis;

  void operator()(const SmoothSpec& s) const {
    SAMENT_REQUIRE(s.k >= 1, "smooth: k must be >= 1");
    SAMENT_REQUIRE(s.K > 0.0, "smooth: K must be > 0");
  }
  void operator()(const PiecewiseCkSpec& s) const {
    SAMENT_REQUIRE(s.k >= 0 && s.k <= 3, "piecewise_ck: k must be in [0, 3]");
    SAMENT_REQUIRE(s.s >= 0, "piecewise_ck: s must be >= 0");
    SAMENT_REQUIRE(s.K2 > 0.0, "piecewise_ck: K2 must be > 0");
    SAMENT_REQUIRE(s.rho1 > 0.0, "piecewise_ck: rho1 must be > 0");
    SAMENT_REQUIRE(s.A > 0.0, "piecewise_ck: A must be > 0");
    SAMENT_REQUIRE(s.s * s.rho1 < kTwoPi, "piecewise_ck: infeasible, s * rho1 >= 2 pi");
  }
  void operator()(const PiecewiseAnalyticSpec& s) const {
    SAMENT_REQUIRE(s.kappa >= 0, "piecewise_analytic: kappa must be >= 0");
    SAMENT_REQUIRE(s.eta > 0.0, "piecewise_analytic: eta must be > 0");
    SAMENT_REQUIRE(s.K > 0.0, "piecewise_analytic: K must be > 0");
    SAMENT_REQUIRE(s.rho1 > 0.0, "piecewise_analytic: rho1 must be > 0");
    SAMENT_REQUIRE(s.kappa * s.rho1 < kTwoPi, "piecewise_analytic: infeasible, kappa * rho1 >= 2 pi");
  }
  void operator()(const WarpedSpec& s) const {
    SAMENT_REQUIRE(s.base != nullptr, "warped: missing base class");
    const auto* sm = s.base->as<SmoothSpec>();
    SAMENT_REQUIRE(sm != nullptr && sm->k >= 2, "warped: base must be a smooth class with k >= 2");
    validate(*s.base, basis);
    SAMENT_REQUIRE(s.s_warp >= 1, "warped: s_warp must be >= 1");
    SAMENT_REQUIRE(s.warp_strength > 0.0 && s.warp_strength <= 5.0 / 9.0,
                   "warped: warp_strength must be in (0, 5/9]");
  }
  void operator()(const AdditiveSpanSpec& s) const {
    SAMENT_REQUIRE(s.base != nullptr, "additive_span: missing base class");
    validate(*s.base, basis);
    SAMENT_REQUIRE(!s.g.empty(), "additive_span: need at least one fixed function");
    for (const auto& g : s.g)
      SAMENT_REQUIRE(g.basis() == basis, "additive_span: fixed function in a different basis");
    SAMENT_REQUIRE(s.B > 0.0, "additive_span: B must be > 0");
  }
};

struct Namer {
  std::string operator()(const SmoothSpec& s) const {
    return "smooth(k=" + std::to_string(s.k) + ";K=" + num(s.K) + ")";
  }
  std::string operator()(const PiecewiseCkSpec& s) const {
    return "piecewise_ck(k=" + std::to_string(s.k) + ";s=" + std::to_string(s.s) + ";K2=" + num(s.K2) +
           ";rho1=" + num(s.rho1) + ";A=" + num(s.A) + ")";
  }
  std::string operator()(const PiecewiseAnalyticSpec& s) const {
    return "piecewise_analytic(kappa=" + std::to_string(s.kappa) + ";eta=" + num(s.eta) +
           ";K=" + num(s.K) + ";rho1=" + num(s.rho1) + ")";
  }
  std::string operator()(const WarpedSpec& s) const {
    return "warped(base=" + canonical(*s.base) + ";s_warp=" + std::to_string(s.s_warp) +
           ";w=" + num(s.warp_strength) + ")";
  }
  std::string operator()(const AdditiveSpanSpec& s) const {
    return "additive_span(base=" + canonical(*s.base) + ";r=" + std::to_string(s.g.size()) +
           ";B=" + num(s.B) + ";g=" + s.g_label + ")";
  }
};

}  // namespace

void validate(const ClassSpec& spec, BasisSpec basis) { std::visit(Validator{basis}, spec.v); }

std::string canonical(const ClassSpec& spec) { return std::visit(Namer{}, spec.v); }

namespace {

class SpecParser {
 public:
  SpecParser(const std::string& text, BasisSpec basis) : t_(text), basis_(basis) {}

  ClassSpec parse_all() {
    ClassSpec s = parse();
    if (i_ != t_.size()) fail("trailing characters");
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw UsageError("bad class spec '" + t_ + "' at offset " + std::to_string(i_) + ": " + what);
  }

  std::string ident() {
    const std::size_t b = i_;
    while (i_ < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[i_])) || t_[i_] == '_')) ++i_;
    if (b == i_) fail("expected a name");
    return t_.substr(b, i_ - b);
  }

  void expect(char c) {
    if (i_ >= t_.size() || t_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  std::string token() {
    const std::size_t b = i_;
    while (i_ < t_.size() && t_[i_] != ';' && t_[i_] != ')') ++i_;
    return t_.substr(b, i_ - b);
  }

  int integer(const std::string& tok) {
    const double v = parse_double(tok);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail("expected an integer, got '" + tok + "'");
    return static_cast<int>(v);
  }

  ClassSpec parse() {
    const std::string name = ident();
    expect('(');
    std::map<std::string, std::string> kv;
    std::shared_ptr<ClassSpec> base;
    while (i_ < t_.size() && t_[i_] != ')') {
      const std::string key = ident();
      expect('=');
      if (key == "base") {
        base = std::make_shared<ClassSpec>(parse());
      } else {
        if (kv.count(key)) fail("duplicate parameter " + key);
        kv[key] = token();
      }
      if (i_ < t_.size() && t_[i_] == ';') ++i_;
    }
    expect(')');

    auto take = [&](const char* key, auto& field) {
      const auto it = kv.find(key);
      if (it == kv.end()) return;
      if constexpr (std::is_same_v<std::decay_t<decltype(field)>, int>)
        field = integer(it->second);
      else if constexpr (std::is_same_v<std::decay_t<decltype(field)>, double>)
        field = parse_double(it->second);
      else
        field = it->second;
      kv.erase(it);
    };
    ClassSpec out;
    if (name == "smooth") {
      SmoothSpec s;
      take("k", s.k);
      take("K", s.K);
      out.v = s;
    } else if (name == "piecewise_ck") {
      PiecewiseCkSpec s;
      take("k", s.k);
      take("s", s.s);
      take("K2", s.K2);
      take("rho1", s.rho1);
      take("A", s.A);
      out.v = s;
    } else if (name == "piecewise_analytic") {
      PiecewiseAnalyticSpec s;
      take("kappa", s.kappa);
      take("eta", s.eta);
      take("K", s.K);
      take("rho1", s.rho1);
      out.v = s;
    } else if (name == "warped") {
      WarpedSpec s;
      if (!base) fail("warped needs base=");
      s.base = base;
      take("s_warp", s.s_warp);
      take("w", s.warp_strength);
      out.v = s;
    } else if (name == "additive_span") {
      AdditiveSpanSpec s;
      if (!base) fail("additive_span needs base=");
      s.base = base;
      int r = 1;
      take("r", r);
      take("B", s.B);
      std::string g = "hat";
      take("g", g);
      if (g != "hat") fail("only g=hat is supported");
      if (r < 1 || r > 64) fail("r must be in [1, 64]");
      s.g = hat_functions(r, basis_);
      s.g_label = g;
      out.v = s;
    } else {
      fail("unknown class '" + name + "'");
    }
    if (!kv.empty()) fail("unknown parameter '" + kv.begin()->first + "' for " + name);
    if (base && name != "warped" && name != "additive_span") fail(name + " takes no base");
    return out;
  }

  const std::string& t_;
  BasisSpec basis_;
  std::size_t i_ = 0;
};

}  // namespace

ClassSpec parse_class_spec(const std::string& text, BasisSpec basis) {
  ClassSpec s = SpecParser(text, basis).parse_all();
  validate(s, basis);
  return s;
}

std::vector<Signal> hat_functions(int r, BasisSpec basis) {
  SAMENT_REQUIRE(r >= 1, "need at least one hat function");
  std::vector<Signal> out;
  const double hw = std::numbers::pi / r;
  for (int i = 0; i < r; ++i) {
    const double c = -std::numbers::pi + (i + 0.5) * kTwoPi / r;
    const PolynomialPiece up{c, {1.0, 1.0 / hw}};
    const PolynomialPiece down{c, {1.0, -1.0 / hw}};
    out.push_back(analyze_polynomial_on_interval(up, c - hw, c, basis) +
                  analyze_polynomial_on_interval(down, c, c + hw, basis));
  }
  return out;
}

std::vector<double> warp_amplitudes(const WarpedSpec& w) {
  std::vector<double> a(static_cast<std::size_t>(w.s_warp));
  for (int i = 1; i <= w.s_warp; ++i) a[static_cast<std::size_t>(i - 1)] = w.warp_strength / (i * w.s_warp);
  return a;
}

double warp(std::span<const double> a, std::span<const double> tau, double x) {
  double y = x;
  for (std::size_t i = 0; i < a.size(); ++i) y += tau[i] * a[i] * std::sin(static_cast<double>(i + 1) * x);
  return y;
}

}  // namespace sament
