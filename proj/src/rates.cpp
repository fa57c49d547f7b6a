#include "bdp/rates.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bdp {

namespace {

void require_positive(double v, const char* what, Index i) {
  if (!(v > 0.0) || std::isinf(v)) {
    std::ostringstream os;
    os << "rate " << what << "(" << i << ") = " << v << " is not a positive finite number";
    throw std::domain_error(os.str());
  }
}

double eval_a(const ConstantFamily& f, Index) { return f.a; }
double eval_b(const ConstantFamily& f, Index) { return f.b; }
double log_eval_a(const ConstantFamily& f, Index) { return std::log(f.a); }
double log_eval_b(const ConstantFamily& f, Index) { return std::log(f.b); }

double eval_a(const GeometricFamily& f, Index i) { return f.a_base * std::pow(f.a_ratio, double(i)); }
double eval_b(const GeometricFamily& f, Index i) { return f.b_base * std::pow(f.b_ratio, double(i)); }
double log_eval_a(const GeometricFamily& f, Index i) {
  return std::log(f.a_base) + double(i) * std::log(f.a_ratio);
}
double log_eval_b(const GeometricFamily& f, Index i) {
  return std::log(f.b_base) + double(i) * std::log(f.b_ratio);
}

double eval_a(const PowerFamily& f, Index i) { return f.a_coeff * std::pow(double(i), f.a_exp); }
double eval_b(const PowerFamily& f, Index i) { return f.b_coeff * std::pow(double(i + 1), f.b_exp); }
double log_eval_a(const PowerFamily& f, Index i) {
  return std::log(f.a_coeff) + f.a_exp * std::log(double(i));
}
double log_eval_b(const PowerFamily& f, Index i) {
  return std::log(f.b_coeff) + f.b_exp * std::log(double(i + 1));
}

double eval_a(const TableFamily& f, Index i) {
  const std::size_t k = std::size_t(i - 1);
  if (k < f.a.size()) return f.a[k];
  return std::visit([i](const auto& tail) { return eval_a(tail, i); }, f.tail);
}
double eval_b(const TableFamily& f, Index i) {
  const std::size_t k = std::size_t(i);
  if (k < f.b.size()) return f.b[k];
  return std::visit([i](const auto& tail) { return eval_b(tail, i); }, f.tail);
}
double log_eval_a(const TableFamily& f, Index i) {
  const std::size_t k = std::size_t(i - 1);
  if (k < f.a.size()) return std::log(f.a[k]);
  return std::visit([i](const auto& tail) { return log_eval_a(tail, i); }, f.tail);
}
double log_eval_b(const TableFamily& f, Index i) {
  const std::size_t k = std::size_t(i);
  if (k < f.b.size()) return std::log(f.b[k]);
  return std::visit([i](const auto& tail) { return log_eval_b(tail, i); }, f.tail);
}

GrowthClass a_growth(const ConstantFamily& f) { return GrowthClass::polynomial(f.a, 0.0); }
GrowthClass b_growth(const ConstantFamily& f) { return GrowthClass::polynomial(f.b, 0.0); }
GrowthClass a_growth(const GeometricFamily& f) {
  if (f.a_ratio == 1.0) return GrowthClass::polynomial(f.a_base, 0.0);
  return GrowthClass::geometric(f.a_ratio, f.a_base);
}
GrowthClass b_growth(const GeometricFamily& f) {
  if (f.b_ratio == 1.0) return GrowthClass::polynomial(f.b_base, 0.0);
  return GrowthClass::geometric(f.b_ratio, f.b_base);
}
GrowthClass a_growth(const PowerFamily& f) { return GrowthClass::polynomial(f.a_coeff, f.a_exp); }
GrowthClass b_growth(const PowerFamily& f) { return GrowthClass::polynomial(f.b_coeff, f.b_exp); }
GrowthClass a_growth(const TableFamily& f) {
  return std::visit([](const auto& tail) { return a_growth(tail); }, f.tail);
}
GrowthClass b_growth(const TableFamily& f) {
  return std::visit([](const auto& tail) { return b_growth(tail); }, f.tail);
}

void validate(const ConstantFamily& f) {
  require_positive(f.a, "a", 1);
  require_positive(f.b, "b", 0);
}
void validate(const GeometricFamily& f) {
  require_positive(f.a_base, "a.base", 1);
  require_positive(f.a_ratio, "a.ratio", 1);
  require_positive(f.b_base, "b.base", 0);
  require_positive(f.b_ratio, "b.ratio", 0);
}
void validate(const PowerFamily& f) {
  require_positive(f.a_coeff, "a.coefficient", 1);
  require_positive(f.b_coeff, "b.coefficient", 0);
  if (!std::isfinite(f.a_exp) || !std::isfinite(f.b_exp))
    throw std::domain_error("power family exponents must be finite");
}
void validate(const TableFamily& f) {
  for (std::size_t k = 0; k < f.a.size(); ++k) require_positive(f.a[k], "a", Index(k + 1));
  for (std::size_t k = 0; k < f.b.size(); ++k) require_positive(f.b[k], "b", Index(k));
  std::visit([](const auto& tail) { validate(tail); }, f.tail);
}

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key()))
      throw std::invalid_argument(where + ": unknown key \"" + item.key() + "\"");
  }
}

double get_number(const nlohmann::json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw std::invalid_argument(where + ": missing key \"" + key + "\"");
  if (!j[key].is_number()) throw std::invalid_argument(where + "." + key + ": expected a number");
  return j[key].get<double>();
}

std::vector<double> get_array(const nlohmann::json& j, const std::string& key,
                              const std::string& where) {
  if (!j.contains(key) || !j[key].is_array())
    throw std::invalid_argument(where + ": expected array \"" + key + "\"");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw std::invalid_argument(where + "." + key + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

ClosedFamily closed_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json closed_to_json(const ConstantFamily& f) {
  return {{"family", "constant"}, {"a", {{"value", f.a}}}, {"b", {{"value", f.b}}}};
}
nlohmann::json closed_to_json(const GeometricFamily& f) {
  return {{"family", "geometric"},
          {"a", {{"base", f.a_base}, {"ratio", f.a_ratio}}},
          {"b", {{"base", f.b_base}, {"ratio", f.b_ratio}}}};
}
nlohmann::json closed_to_json(const PowerFamily& f) {
  return {{"family", "power"},
          {"a", {{"coefficient", f.a_coeff}, {"exponent", f.a_exp}}},
          {"b", {{"coefficient", f.b_coeff}, {"exponent", f.b_exp}}}};
}

ClosedFamily closed_from_json(const nlohmann::json& j, const std::string& where) {
  reject_unknown_keys(j, {"family", "a", "b"}, where);
  if (!j.contains("family") || !j["family"].is_string())
    throw std::invalid_argument(where + ": missing string \"family\"");
  const std::string fam = j["family"].get<std::string>();
  if (!j.contains("a") || !j.contains("b"))
    throw std::invalid_argument(where + ": missing \"a\" or \"b\"");
  const auto& ja = j["a"];
  const auto& jb = j["b"];
  if (fam == "constant") {
    reject_unknown_keys(ja, {"value"}, where + ".a");
    reject_unknown_keys(jb, {"value"}, where + ".b");
    ConstantFamily f{get_number(ja, "value", where + ".a"), get_number(jb, "value", where + ".b")};
    return f;
  }
  if (fam == "geometric") {
    reject_unknown_keys(ja, {"base", "ratio"}, where + ".a");
    reject_unknown_keys(jb, {"base", "ratio"}, where + ".b");
    GeometricFamily f{get_number(ja, "base", where + ".a"), get_number(ja, "ratio", where + ".a"),
                      get_number(jb, "base", where + ".b"), get_number(jb, "ratio", where + ".b")};
    return f;
  }
  if (fam == "power") {
    reject_unknown_keys(ja, {"coefficient", "exponent"}, where + ".a");
    reject_unknown_keys(jb, {"coefficient", "exponent"}, where + ".b");
    PowerFamily f{get_number(ja, "coefficient", where + ".a"),
                  get_number(ja, "exponent", where + ".a"),
                  get_number(jb, "coefficient", where + ".b"),
                  get_number(jb, "exponent", where + ".b")};
    return f;
  }
  throw std::invalid_argument(where + ": unknown family \"" + fam + "\"");
}

}  // namespace

ExtReal growth_limit_ratio(const GrowthClass& s1, const GrowthClass& s2) {
  using K = GrowthClass::Kind;
  if (s1.kind == K::Unknown || s2.kind == K::Unknown) return ExtReal::unknown();
  if (s1.kind == K::Geometric && s2.kind == K::Geometric) {
    if (s1.ratio > s2.ratio) return ExtReal::infinite();
    if (s1.ratio < s2.ratio) return ExtReal::zero();
    return ExtReal::finite(s1.coeff / s2.coeff);
  }
  if (s1.kind == K::Geometric) {  // s2 polynomial
    return s1.ratio > 1.0 ? ExtReal::infinite() : ExtReal::zero();
  }
  if (s2.kind == K::Geometric) {
    return s2.ratio > 1.0 ? ExtReal::zero() : ExtReal::infinite();
  }
  // both polynomial
  if (s1.expo > s2.expo) return ExtReal::infinite();
  if (s1.expo < s2.expo) return ExtReal::zero();
  return ExtReal::finite(s1.coeff / s2.coeff);
}

ExtReal RateAsymptotics::a_step() const {
  using K = GrowthClass::Kind;
  if (a_class.kind == K::Geometric) return ExtReal::finite(a_class.ratio);
  if (a_class.kind == K::Polynomial) return ExtReal::finite(1.0);
  return ExtReal::unknown();
}

ExtReal RateAsymptotics::b_step() const {
  using K = GrowthClass::Kind;
  if (b_class.kind == K::Geometric) return ExtReal::finite(b_class.ratio);
  if (b_class.kind == K::Polynomial) return ExtReal::finite(1.0);
  return ExtReal::unknown();
}

RateSpec::RateSpec(Family family, std::string description)
    : family_(std::move(family)), description_(std::move(description)) {
  std::visit([](const auto& f) { validate(f); }, family_);
}

double RateSpec::a(Index i) const {
  if (i < 1) throw std::out_of_range("a(i) requires i >= 1");
  const double v = std::visit([i](const auto& f) { return eval_a(f, i); }, family_);
  require_positive(v, "a", i);
  return v;
}

double RateSpec::b(Index i) const {
  if (i < 0) throw std::out_of_range("b(i) requires i >= 0");
  const double v = std::visit([i](const auto& f) { return eval_b(f, i); }, family_);
  require_positive(v, "b", i);
  return v;
}

double RateSpec::log_a(Index i) const {
  if (i < 1) throw std::out_of_range("log_a(i) requires i >= 1");
  return std::visit([i](const auto& f) { return log_eval_a(f, i); }, family_);
}

double RateSpec::log_b(Index i) const {
  if (i < 0) throw std::out_of_range("log_b(i) requires i >= 0");
  return std::visit([i](const auto& f) { return log_eval_b(f, i); }, family_);
}

RateAsymptotics RateSpec::asymptotics() const {
  RateAsymptotics out;
  out.a_class = std::visit([](const auto& f) { return a_growth(f); }, family_);
  out.b_class = std::visit([](const auto& f) { return b_growth(f); }, family_);
  if (const auto* t = std::get_if<TableFamily>(&family_))
    out.stable_from = Index(std::max(t->a.size() + 1, t->b.size()));
  return out;
}

RateSpec RateSpec::from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, {"family", "a", "b", "tail", "description"}, "rates");
  if (!j.contains("family") || !j["family"].is_string())
    throw std::invalid_argument("rates: missing string \"family\"");
  const std::string fam = j["family"].get<std::string>();
  std::string descr = j.value("description", std::string{});
  if (fam == "table") {
    if (!j.contains("a") || !j.contains("b") || !j.contains("tail"))
      throw std::invalid_argument("rates(table): needs \"a\", \"b\", \"tail\"");
    reject_unknown_keys(j["a"], {"values"}, "rates.a");
    reject_unknown_keys(j["b"], {"values"}, "rates.b");
    TableFamily f;
    f.a = get_array(j["a"], "values", "rates.a");
    f.b = get_array(j["b"], "values", "rates.b");
    f.tail = closed_from_json(j["tail"], "rates.tail");
    return RateSpec(std::move(f), std::move(descr));
  }
  if (j.contains("tail"))
    throw std::invalid_argument("rates: \"tail\" is only valid for the table family");
  nlohmann::json closed = j;
  closed.erase("description");
  ClosedFamily f = closed_from_json(closed, "rates");
  return std::visit(
      [&](auto&& c) { return RateSpec(Family(std::move(c)), std::move(descr)); }, std::move(f));
}

nlohmann::json RateSpec::to_json() const {
  nlohmann::json j = std::visit(
      [](const auto& f) -> nlohmann::json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, TableFamily>) {
          nlohmann::json out{{"family", "table"},
                             {"a", {{"values", f.a}}},
                             {"b", {{"values", f.b}}}};
          out["tail"] = std::visit([](const auto& t) { return closed_to_json(t); }, f.tail);
          return out;
        } else {
          return closed_to_json(f);
        }
      },
      family_);
  if (!description_.empty()) j["description"] = description_;
  return j;
}

}  // namespace bdp
