#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "shellspec/couplings.hpp"
#include "shellspec/geometry.hpp"

namespace shellspec {

// Coupling expression: a trigonometric polynomial in arc length,
//   expr   := term (('+'|'-') term)*
//   term   := number | [number '*'] ('cos'|'sin') '(' integer ')'
// where cos(k) stands for cos(2 pi k s / l) on a curve of length l.
struct TrigExpr {
  struct Term {
    double coef = 0.0;
    int kind = 0;  // 0 constant, 1 cos, 2 sin
    int k = 0;
  };
  std::vector<Term> terms;

  bool is_constant() const {
    for (const auto& t : terms)
      if (t.kind != 0) return false;
    return true;
  }

  double constant_value() const {
    double v = 0.0;
    for (const auto& t : terms) v += t.coef;
    return v;
  }

  CouplingFunction to_function(double period) const {
    if (is_constant()) return CouplingFunction(constant_value());
    std::vector<Term> ts = terms;
    return CouplingFunction::function([ts, period](double s) {
      double v = 0.0;
      for (const auto& t : ts) {
        if (t.kind == 0)
          v += t.coef;
        else if (t.kind == 1)
          v += t.coef * std::cos(2.0 * kPi * t.k * s / period);
        else
          v += t.coef * std::sin(2.0 * kPi * t.k * s / period);
      }
      return v;
    });
  }

  static TrigExpr parse(const std::string& text) {
    TrigExpr e;
    size_t i = 0;
    auto skip = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto fail = [&](const std::string& what) -> void {
      throw std::invalid_argument("bad coupling expression '" + text + "': " + what);
    };
    double sign = 1.0;
    skip();
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      sign = text[i] == '-' ? -1.0 : 1.0;
      ++i;
    }
    while (true) {
      skip();
      if (i >= text.size()) fail("missing term");
      Term t;
      t.coef = sign;
      bool have_number = false;
      if (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.') {
        size_t used = 0;
        t.coef = sign * std::stod(text.substr(i), &used);
        i += used;
        have_number = true;
        skip();
        if (i < text.size() && text[i] == '*') {
          ++i;
          skip();
        } else if (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])))) {
          fail("expected '*' between coefficient and cos/sin");
        }
      }
      if (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
        if (text.compare(i, 4, "cos(") == 0 || text.compare(i, 4, "sin(") == 0) {
          t.kind = text[i] == 'c' ? 1 : 2;
          i += 4;
          size_t used = 0;
          t.k = std::stoi(text.substr(i), &used);
          i += used;
          skip();
          if (i >= text.size() || text[i] != ')') fail("missing ')'");
          ++i;
          if (t.k < 0) fail("harmonic index must be non-negative");
        } else {
          fail("unknown function (only cos(k), sin(k))");
        }
      } else if (!have_number) {
        fail("expected number or cos/sin");
      }
      e.terms.push_back(t);
      skip();
      if (i >= text.size()) break;
      if (text[i] == '+')
        sign = 1.0;
      else if (text[i] == '-')
        sign = -1.0;
      else
        fail("expected '+' or '-'");
      ++i;
    }
    return e;
  }
};

// Flat key = value run configuration; '#' starts a comment.
class Config {
 public:
  static Config from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r");
        size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      std::string t = trim(line);
      if (t.empty()) continue;
      auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
      std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
      if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
      cfg.kv_[key] = val;
    }
    return cfg;
  }

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
  }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError(key, "missing required key");
    return it->second;
  }
  std::string get_string(const std::string& key, const std::string& def) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
  }

  double get_double(const std::string& key) const { return parse_double(key, get_string(key)); }
  double get_double(const std::string& key, double def) const {
    return has(key) ? get_double(key) : def;
  }

  int get_int(const std::string& key) const {
    const std::string v = get_string(key);
    try {
      size_t used = 0;
      int r = std::stoi(v, &used);
      if (used != v.size()) throw std::invalid_argument("");
      return r;
    } catch (...) {
      throw ConfigError(key, "not an integer: '" + v + "'");
    }
  }
  int get_int(const std::string& key, int def) const { return has(key) ? get_int(key) : def; }

  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& def) const {
    if (!has(key)) return def;
    std::vector<double> out;
    std::string v = get_string(key);
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
  }

  Curve make_curve() const {
    std::string kind = get_string("curve.kind", "circle");
    if (kind == "circle") return Curve::circle(get_double("curve.radius", 1.0));
    if (kind == "ellipse") return Curve::ellipse(get_double("curve.a"), get_double("curve.b"));
    if (kind == "star")
      return Curve::star(get_double("curve.radius", 1.0), get_double("curve.amplitude", 0.2),
                         get_int("curve.lobes", 5));
    throw ConfigError("curve.kind", "expected circle|ellipse|star, got '" + kind + "'");
  }

  Couplings make_couplings(double period) const {
    Couplings c;
    c.period = period;
    auto one = [&](const std::string& key) {
      if (!has(key)) return CouplingFunction(0.0);
      try {
        return TrigExpr::parse(get_string(key)).to_function(period);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(key, e.what());
      }
    };
    c.eta = one("couplings.eta");
    c.tau = one("couplings.tau");
    c.lambda = one("couplings.lambda");
    c.omega = one("couplings.omega");
    return c;
  }

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  static double parse_double(const std::string& key, const std::string& v) {
    try {
      size_t used = 0;
      std::string t = v;
      size_t a = t.find_first_not_of(" \t");
      size_t b = t.find_last_not_of(" \t");
      t = a == std::string::npos ? "" : t.substr(a, b - a + 1);
      double r = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument("");
      return r;
    } catch (...) {
      throw ConfigError(key, "not a number: '" + v + "'");
    }
  }

  std::map<std::string, std::string> kv_;
};

// All floating-point CSV output carries 15 significant digits.
inline std::string format_g15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

}  // namespace shellspec
