#include "holofact/json_io.hpp"

#include <algorithm>
#include <cmath>

namespace holofact {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::CenterMismatch: return "CenterMismatch";
    case Errc::ConstantTermMismatch: return "ConstantTermMismatch";
    case Errc::LogOfZeroConstantTerm: return "LogOfZeroConstantTerm";
    case Errc::InsufficientOrder: return "InsufficientOrder";
    case Errc::UnsupportedVariant: return "UnsupportedVariant";
    case Errc::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case Errc::RayDivergence: return "RayDivergence";
    case Errc::SeedAtExceptionalValue: return "SeedAtExceptionalValue";
    case Errc::NonElhSpec: return "NonElhSpec";
    case Errc::BoxHitsExceptionalValue: return "BoxHitsExceptionalValue";
    case Errc::NotRegularDirection: return "NotRegularDirection";
    case Errc::OverlapMismatch: return "OverlapMismatch";
    case Errc::GIncomplete: return "GIncomplete";
    case Errc::NotOmittedOnProbe: return "NotOmittedOnProbe";
    case Errc::BranchObstruction: return "BranchObstruction";
    case Errc::ZeroValueOnProbe: return "ZeroValueOnProbe";
    case Errc::HPrimeZeroOnBox: return "HPrimeZeroOnBox";
    case Errc::IncompleteInput: return "IncompleteInput";
    case Errc::SubadditivityViolation: return "SubadditivityViolation";
    case Errc::GNotZeroAtOrigin: return "GNotZeroAtOrigin";
    case Errc::DegenerateModulus: return "DegenerateModulus";
    case Errc::OutsideValidatedDisk: return "OutsideValidatedDisk";
    case Errc::UnderflowAtStage: return "UnderflowAtStage";
    case Errc::SchemaError: return "SchemaError";
    case Errc::StrictFieldError: return "StrictFieldError";
  }
  return "UnknownError";
}

}  // namespace holofact

namespace holofact::io {

namespace {

using cplx = std::complex<double>;

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw Error(Errc::SchemaError, path + ": " + what);
}

double number_from_json(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

int int_from_json(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_fail(path, "expected an integer");
  return j.get<int>();
}

std::vector<cplx> complex_list(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of [re, im] pairs");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(complex_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

json complex_list_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (const cplx& z : v) out.push_back(complex_to_json(z));
  return out;
}

}  // namespace

void reject_unknown_keys(const json& j, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known)
      throw Error(Errc::StrictFieldError, path + "." + it.key());
  }
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    schema_fail(path, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const catalog::CatalogFn& f) {
  json out;
  out["kind"] = catalog::kind_name(f);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, catalog::IntExpPoly>) {
          out["p"] = complex_list_json(v.p);
          out["c"] = complex_to_json(v.c);
        } else if constexpr (std::is_same_v<T, catalog::ExpAffine>) {
          out["alpha"] = complex_to_json(v.alpha);
          out["a"] = complex_to_json(v.a);
          out["b"] = complex_to_json(v.b);
        } else if constexpr (std::is_same_v<T, catalog::Affine>) {
          out["a"] = complex_to_json(v.a);
        } else if constexpr (std::is_same_v<T, catalog::Monomial>) {
          out["n"] = v.n;
        } else if constexpr (std::is_same_v<T, catalog::ScaledExp>) {
          out["lambda"] = complex_to_json(v.lambda);
        } else if constexpr (std::is_same_v<T, catalog::NgLimit>) {
          out["cs"] = v.cs;
          out["prefix"] = v.prefix;
        } else if constexpr (std::is_same_v<T, catalog::Chain>) {
          json factors = json::array();
          for (const auto& g : v.factors) factors.push_back(to_json(g));
          out["factors"] = factors;
        } else if constexpr (std::is_same_v<T, catalog::Scale>) {
          out["lambda"] = complex_to_json(v.lambda);
        } else if constexpr (std::is_same_v<T, catalog::PowRoot>) {
          out["den"] = v.den;
        } else if constexpr (std::is_same_v<T, catalog::LogShift>) {
          out["w0"] = complex_to_json(v.w0);
        }
      },
      f.v);
  return out;
}

catalog::CatalogFn catalog_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  if (!j.contains("kind") || !j["kind"].is_string())
    schema_fail(path, "missing string field 'kind'");
  std::string kind = j["kind"].get<std::string>();
  catalog::CatalogFn f;
  if (kind == "int_exp_poly") {
    reject_unknown_keys(j, path, {"kind", "p", "c"});
    if (!j.contains("p")) schema_fail(path, "int_exp_poly needs 'p'");
    catalog::IntExpPoly v;
    v.p = complex_list(j["p"], path + ".p");
    if (j.contains("c")) v.c = complex_from_json(j["c"], path + ".c");
    f = catalog::CatalogFn{v};
  } else if (kind == "exp_affine") {
    reject_unknown_keys(j, path, {"kind", "alpha", "a", "b"});
    catalog::ExpAffine v;
    if (j.contains("alpha")) v.alpha = complex_from_json(j["alpha"], path + ".alpha");
    if (!j.contains("a")) schema_fail(path, "exp_affine needs 'a'");
    v.a = complex_from_json(j["a"], path + ".a");
    if (j.contains("b")) v.b = complex_from_json(j["b"], path + ".b");
    f = catalog::CatalogFn{v};
  } else if (kind == "affine") {
    reject_unknown_keys(j, path, {"kind", "a"});
    catalog::Affine v;
    if (j.contains("a")) v.a = complex_from_json(j["a"], path + ".a");
    f = catalog::CatalogFn{v};
  } else if (kind == "monomial") {
    reject_unknown_keys(j, path, {"kind", "n"});
    if (!j.contains("n")) schema_fail(path, "monomial needs 'n'");
    f = catalog::CatalogFn{catalog::Monomial{int_from_json(j["n"], path + ".n")}};
  } else if (kind == "scaled_exp") {
    reject_unknown_keys(j, path, {"kind", "lambda"});
    if (!j.contains("lambda")) schema_fail(path, "scaled_exp needs 'lambda'");
    f = catalog::CatalogFn{
        catalog::ScaledExp{complex_from_json(j["lambda"], path + ".lambda")}};
  } else if (kind == "z_exp_h") {
    reject_unknown_keys(j, path, {"kind"});
    f = catalog::CatalogFn{catalog::ZExpH{}};
  } else if (kind == "int_exp_exp") {
    reject_unknown_keys(j, path, {"kind"});
    f = catalog::CatalogFn{catalog::IntExpExp{}};
  } else if (kind == "ng_limit") {
    reject_unknown_keys(j, path, {"kind", "cs", "prefix"});
    if (!j.contains("cs") || !j["cs"].is_array()) schema_fail(path, "ng_limit needs 'cs'");
    catalog::NgLimit v;
    for (std::size_t i = 0; i < j["cs"].size(); ++i)
      v.cs.push_back(number_from_json(j["cs"][i], path + ".cs"));
    v.prefix = j.contains("prefix") ? int_from_json(j["prefix"], path + ".prefix")
                                    : static_cast<int>(v.cs.size());
    f = catalog::CatalogFn{v};
  } else if (kind == "chain") {
    reject_unknown_keys(j, path, {"kind", "factors"});
    if (!j.contains("factors") || !j["factors"].is_array())
      schema_fail(path, "chain needs 'factors'");
    catalog::Chain v;
    for (std::size_t i = 0; i < j["factors"].size(); ++i)
      v.factors.push_back(catalog_from_json(j["factors"][i],
                                            path + ".factors[" + std::to_string(i) + "]"));
    f = catalog::CatalogFn{v};
  } else if (kind == "scale") {
    reject_unknown_keys(j, path, {"kind", "lambda"});
    if (!j.contains("lambda")) schema_fail(path, "scale needs 'lambda'");
    f = catalog::CatalogFn{catalog::Scale{complex_from_json(j["lambda"], path + ".lambda")}};
  } else if (kind == "pow_root") {
    reject_unknown_keys(j, path, {"kind", "den"});
    if (!j.contains("den")) schema_fail(path, "pow_root needs 'den'");
    f = catalog::CatalogFn{catalog::PowRoot{int_from_json(j["den"], path + ".den")}};
  } else if (kind == "log_shift") {
    reject_unknown_keys(j, path, {"kind", "w0"});
    catalog::LogShift v;
    if (j.contains("w0")) v.w0 = complex_from_json(j["w0"], path + ".w0");
    f = catalog::CatalogFn{v};
  } else {
    schema_fail(path, "unknown kind '" + kind + "'");
  }
  catalog::validate(f);
  return f;
}

json to_json(const ivp::IvpSpec& spec) {
  json out;
  out["type"] = spec.type == ivp::IvpType::Type1 ? "type1" : "type2";
  out["F"] = complex_list_json(spec.f_exp);
  out["G"] = complex_list_json(spec.g_exp);
  out["N"] = spec.zero_order;
  out["a"] = complex_to_json(spec.exceptional);
  out["alpha"] = complex_to_json(spec.center);
  out["a0"] = complex_to_json(spec.seed);
  return out;
}

ivp::IvpSpec ivp_from_json(const json& j, const std::string& path) {
  reject_unknown_keys(j, path, {"type", "F", "G", "N", "a", "alpha", "a0"});
  ivp::IvpSpec spec;
  if (!j.contains("type") || !j["type"].is_string())
    schema_fail(path, "missing string field 'type'");
  std::string type = j["type"].get<std::string>();
  if (type == "type1")
    spec.type = ivp::IvpType::Type1;
  else if (type == "type2")
    spec.type = ivp::IvpType::Type2;
  else
    schema_fail(path + ".type", "expected 'type1' or 'type2'");
  if (!j.contains("F")) schema_fail(path, "missing 'F'");
  spec.f_exp = complex_list(j["F"], path + ".F");
  if (!j.contains("G")) schema_fail(path, "missing 'G'");
  spec.g_exp = complex_list(j["G"], path + ".G");
  if (j.contains("N")) spec.zero_order = int_from_json(j["N"], path + ".N");
  if (spec.zero_order < 0) schema_fail(path + ".N", "must be >= 0");
  if (j.contains("a")) spec.exceptional = complex_from_json(j["a"], path + ".a");
  if (j.contains("alpha")) spec.center = complex_from_json(j["alpha"], path + ".alpha");
  if (j.contains("a0")) spec.seed = complex_from_json(j["a0"], path + ".a0");
  if (spec.f_exp.empty()) schema_fail(path + ".F", "must be nonempty");
  if (spec.g_exp.empty()) schema_fail(path + ".G", "must be nonempty");
  return spec;
}

json to_json(const catalog::AsymptoticSet& s) {
  json out;
  out["values"] = complex_list_json(s.values);
  out["complete"] = s.complete;
  switch (s.provenance) {
    case catalog::Provenance::ClosedForm: out["provenance"] = "closed-form"; break;
    case catalog::Provenance::SectorQuadrature:
      out["provenance"] = "sector-quadrature";
      break;
    case catalog::Provenance::SetAlgebra: out["provenance"] = "set-algebra"; break;
  }
  return out;
}

json to_json(const lab::FactorChain& chain) {
  json out;
  json factors = json::array();
  for (const auto& f : chain.factors) factors.push_back(to_json(f));
  out["factors"] = factors;
  switch (chain.provenance) {
    case lab::Provenance::OmittedAffine: out["provenance"] = "omitted-affine"; break;
    case lab::Provenance::OmittedLog: out["provenance"] = "omitted-log"; break;
    case lab::Provenance::FractionalRoot: out["provenance"] = "fractional-root"; break;
    case lab::Provenance::Identity: out["provenance"] = "identity"; break;
    case lab::Provenance::User: out["provenance"] = "user"; break;
  }
  return out;
}

json to_json(const ivp::DiskChart& chart) {
  json out;
  out["id"] = chart.id;
  out["center"] = complex_to_json(chart.spec.center);
  out["seed"] = complex_to_json(chart.spec.seed);
  out["generation"] = chart.generation;
  if (chart.parent)
    out["parent"] = *chart.parent;
  else
    out["parent"] = nullptr;
  if (chart.entry_angle)
    out["entry_angle"] = *chart.entry_angle;
  else
    out["entry_angle"] = nullptr;
  out["entire"] = chart.empirical.unbounded;
  if (chart.empirical.unbounded)
    out["radius"] = nullptr;
  else
    out["radius"] = chart.empirical.value;
  out["bounds"] = {{"banach", chart.theory.banach},
                   {"picard", chart.theory.picard},
                   {"cauchy", chart.theory.cauchy},
                   {"M", chart.theory.M},
                   {"K", chart.theory.K},
                   {"box_a", chart.theory.box_a},
                   {"box_b", chart.theory.box_b}};
  json coeffs = json::array();
  int keep = std::min(16, chart.L.order());
  for (int n = 0; n < keep; ++n) coeffs.push_back(complex_to_json(chart.L.coeffs[n]));
  out["coeffs"] = coeffs;
  return out;
}

json to_json(const atlas::Atlas& atlas) {
  json out;
  out["schema"] = "atlas-v1";
  json charts = json::array();
  for (const auto& c : atlas.charts) charts.push_back(to_json(c));
  out["charts"] = charts;
  json edges = json::array();
  for (const auto& e : atlas.edges)
    edges.push_back({{"parent", e.parent},
                     {"child", e.child},
                     {"entry_angle", e.entry_angle},
                     {"overlap_residual", e.overlap_residual}});
  out["edges"] = edges;
  json singular = json::array();
  for (const auto& sp : atlas.singular)
    singular.push_back({{"location", complex_to_json(sp.location)},
                        {"chart", sp.chart_id},
                        {"generation", sp.generation},
                        {"blowup_mag", sp.blowup_mag},
                        {"singular_value", complex_to_json(sp.singular_value)},
                        {"corroboration_residual", sp.corroboration_residual},
                        {"angle", sp.angle},
                        {"refined", sp.refined}});
  out["singular"] = singular;
  out["budget_used"] = {{"generations", atlas.generations_used},
                        {"charts", atlas.charts.size()}};
  out["budget_exhausted"] = atlas.budget_exhausted;
  return out;
}

json to_json(const ng::NgSequence& seq) {
  json out;
  out["cs"] = seq.cs;
  out["margins"] = seq.margins;
  out["bisection_iters"] = seq.bisection_iters;
  return out;
}

json to_json(const atlas::StructureReport& rep) {
  json out;
  out["pass"] = rep.pass;
  out["g_values_complete"] = rep.g_values_complete;
  out["g_asymptotic_values"] = complex_list_json(rep.g_asymptotic_values);
  json points = json::array();
  for (const auto& pc : rep.points)
    points.push_back({{"index", pc.index},
                      {"tail_decreasing", pc.tail_decreasing},
                      {"final_residual", pc.final_residual},
                      {"matches_g_value", pc.matches_g_value},
                      {"g_value_distance", pc.g_value_distance}});
  out["points"] = points;
  out["zero_singular_violation"] = rep.zero_singular_violation;
  out["closure_violations"] = rep.closure_violations;
  out["notes"] = rep.notes;
  return out;
}

}  // namespace holofact::io
