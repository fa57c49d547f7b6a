#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bdp/numeric.hpp"

namespace bdp {

// Growth class of one rate sequence as i -> inf: either geometric with
// ratio != 1, or asymptotically c * i^p (constant rates are p = 0).
struct GrowthClass {
  enum class Kind { Geometric, Polynomial, Unknown };
  Kind kind = Kind::Unknown;
  double ratio = 1.0;  // Geometric
  double coeff = 0.0;  // Polynomial
  double expo = 0.0;   // Polynomial

  static GrowthClass geometric(double r, double c) {
    GrowthClass g;
    g.kind = Kind::Geometric;
    g.ratio = r;
    g.coeff = c;
    return g;
  }
  static GrowthClass polynomial(double c, double p) {
    GrowthClass g;
    g.kind = Kind::Polynomial;
    g.coeff = c;
    g.expo = p;
    return g;
  }
  static GrowthClass unknown() { return {}; }
};

// lim seq1_i / seq2_i as an extended real (index shifts do not matter).
ExtReal growth_limit_ratio(const GrowthClass& seq1, const GrowthClass& seq2);

// Asymptotics a closed-form family exposes to the series engine.
struct RateAsymptotics {
  GrowthClass a_class;  // growth of a_i
  GrowthClass b_class;  // growth of b_i
  Index stable_from = 0;  // index past which the closed form governs (table length)

  bool known() const {
    return a_class.kind != GrowthClass::Kind::Unknown &&
           b_class.kind != GrowthClass::Kind::Unknown;
  }
  // lim mu_{i+1}/mu_i = lim b_i/a_{i+1}
  ExtReal mu_ratio() const { return growth_limit_ratio(b_class, a_class); }
  // lim a_i/b_i
  ExtReal a_over_b() const { return growth_limit_ratio(a_class, b_class); }
  // lim a_{i+1}/a_i
  ExtReal a_step() const;
  // lim b_{i+1}/b_i
  ExtReal b_step() const;
};

// Birth-death rate evaluator: death rates a_i (i >= 1) and birth rates
// b_i (i >= 0), both strictly positive. Log accessors exist because the
// measures mu_i = prod b/prod a routinely leave double range.
class Rates {
 public:
  virtual ~Rates() = default;
  virtual double a(Index i) const = 0;
  virtual double b(Index i) const = 0;
  virtual double log_a(Index i) const = 0;
  virtual double log_b(Index i) const = 0;
  // Growth information for series certificates; pure evaluators have none.
  virtual RateAsymptotics asymptotics() const { return {}; }
};

struct ConstantFamily {
  double a = 1.0;
  double b = 1.0;
};

// a_i = a_base * a_ratio^i, b_i = b_base * b_ratio^i
struct GeometricFamily {
  double a_base = 1.0;
  double a_ratio = 1.0;
  double b_base = 1.0;
  double b_ratio = 1.0;
};

// a_i = a_coeff * i^a_exp (i >= 1), b_i = b_coeff * (i+1)^b_exp.
// The +1 shift keeps b_0 positive for positive exponents.
struct PowerFamily {
  double a_coeff = 1.0;
  double a_exp = 0.0;
  double b_coeff = 1.0;
  double b_exp = 0.0;
};

using ClosedFamily = std::variant<ConstantFamily, GeometricFamily, PowerFamily>;

// Finite tables for a_1..a_m and b_0..b_{k-1}; the tail family takes
// over at the first index past each table.
struct TableFamily {
  std::vector<double> a;  // a[j] is a_{j+1}
  std::vector<double> b;  // b[j] is b_j
  ClosedFamily tail;
};

class RateSpec final : public Rates {
 public:
  using Family = std::variant<ConstantFamily, GeometricFamily, PowerFamily, TableFamily>;

  RateSpec(Family family, std::string description = {});

  double a(Index i) const override;
  double b(Index i) const override;
  double log_a(Index i) const override;
  double log_b(Index i) const override;

  // Table specs report their tail family's growth classes.
  RateAsymptotics asymptotics() const override;

  const Family& family() const { return family_; }
  const std::string& description() const { return description_; }

  static RateSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  Family family_;
  std::string description_;
};

}  // namespace bdp
