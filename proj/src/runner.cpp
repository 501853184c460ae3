#include "holofact/runner.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace holofact::runner {

namespace {

using io::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int int_field(const json& j, const char* key, const std::string& path, int fallback,
              int min_value) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    throw Error(Errc::SchemaError, path + "." + key + ": expected an integer");
  int v = j[key].get<int>();
  if (v < min_value)
    throw Error(Errc::SchemaError,
                path + "." + key + ": must be >= " + std::to_string(min_value));
  return v;
}

double real_field(const json& j, const char* key, const std::string& path,
                  double fallback, bool positive) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw Error(Errc::SchemaError, path + "." + key + ": expected a number");
  double v = j[key].get<double>();
  if (positive && !(v > 0))
    throw Error(Errc::SchemaError, path + "." + key + ": must be positive");
  return v;
}

void validate_params(Command cmd, const json& p) {
  const std::string path = "params";
  switch (cmd) {
    case Command::Solve:
      io::reject_unknown_keys(p, path, {"spec", "order"});
      if (!p.contains("spec")) throw Error(Errc::SchemaError, "params.spec is required");
      (void)io::ivp_from_json(p["spec"], path + ".spec");
      (void)int_field(p, "order", path, 64, 8);
      break;
    case Command::Radius: {
      io::reject_unknown_keys(p, path, {"spec", "box", "order"});
      if (!p.contains("spec")) throw Error(Errc::SchemaError, "params.spec is required");
      (void)io::ivp_from_json(p["spec"], path + ".spec");
      (void)int_field(p, "order", path, 64, 16);
      if (p.contains("box")) {
        const json& b = p["box"];
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number() ||
            !(b[0].get<double>() > 0) || !(b[1].get<double>() > 0))
          throw Error(Errc::SchemaError, "params.box: expected [a, b] with a, b > 0");
      }
      break;
    }
    case Command::Atlas: {
      io::reject_unknown_keys(p, path,
                              {"spec", "budget", "order", "blowup_threshold"});
      if (!p.contains("spec")) throw Error(Errc::SchemaError, "params.spec is required");
      (void)io::ivp_from_json(p["spec"], path + ".spec");
      (void)int_field(p, "order", path, 64, 16);
      (void)real_field(p, "blowup_threshold", path, 1e8, true);
      if (p.contains("budget")) {
        io::reject_unknown_keys(p["budget"], path + ".budget",
                                {"max_generation", "max_charts", "angles_per_chart"});
        (void)int_field(p["budget"], "max_generation", path + ".budget", 3, 0);
        (void)int_field(p["budget"], "max_charts", path + ".budget", 256, 1);
        (void)int_field(p["budget"], "angles_per_chart", path + ".budget", 64, 4);
      }
      break;
    }
    case Command::Factor: {
      io::reject_unknown_keys(p, path,
                              {"f", "mode", "omitted", "N", "samples", "box_radius"});
      if (!p.contains("f")) throw Error(Errc::SchemaError, "params.f is required");
      (void)io::catalog_from_json(p["f"], path + ".f");
      if (!p.contains("mode") || !p["mode"].is_string())
        throw Error(Errc::SchemaError, "params.mode must be 'omitted' or 'root'");
      std::string mode = p["mode"].get<std::string>();
      if (mode != "omitted" && mode != "root")
        throw Error(Errc::SchemaError, "params.mode must be 'omitted' or 'root'");
      if (mode == "omitted" && p.contains("omitted"))
        (void)io::complex_from_json(p["omitted"], path + ".omitted");
      if (mode == "root") (void)int_field(p, "N", path, 1, 1);
      (void)int_field(p, "samples", path, 200, 1);
      (void)real_field(p, "box_radius", path, 2.0, true);
      break;
    }
    case Command::Ng:
      io::reject_unknown_keys(p, path, {"K"});
      (void)int_field(p, "K", path, 12, 1);
      break;
    case Command::Asym:
      io::reject_unknown_keys(p, path, {"f", "iterate"});
      if (!p.contains("f")) throw Error(Errc::SchemaError, "params.f is required");
      (void)io::catalog_from_json(p["f"], path + ".f");
      (void)int_field(p, "iterate", path, 0, 0);
      break;
    case Command::MaxMod: {
      io::reject_unknown_keys(p, path, {"f", "r", "r_grid"});
      if (!p.contains("f")) throw Error(Errc::SchemaError, "params.f is required");
      (void)io::catalog_from_json(p["f"], path + ".f");
      bool has_r = p.contains("r"), has_grid = p.contains("r_grid");
      if (has_r == has_grid)
        throw Error(Errc::SchemaError, "params: exactly one of 'r' or 'r_grid'");
      if (has_r) (void)real_field(p, "r", path, 1.0, true);
      if (has_grid) {
        if (!p["r_grid"].is_array() || p["r_grid"].empty())
          throw Error(Errc::SchemaError, "params.r_grid: expected a nonempty array");
        for (const auto& r : p["r_grid"])
          if (!r.is_number() || !(r.get<double>() > 0))
            throw Error(Errc::SchemaError, "params.r_grid: radii must be positive");
      }
      break;
    }
    case Command::Recursion:
      io::reject_unknown_keys(p, path, {"g", "h", "n_max", "order"});
      if (!p.contains("g") || !p.contains("h"))
        throw Error(Errc::SchemaError, "params.g and params.h are required");
      (void)io::catalog_from_json(p["g"], path + ".g");
      (void)io::catalog_from_json(p["h"], path + ".h");
      (void)int_field(p, "n_max", path, 3, 0);
      (void)int_field(p, "order", path, 64, 8);
      break;
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::SchemaError, "cannot open output file " + path);
  out << text;
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Atlas: return "atlas";
    case Command::Radius: return "radius";
    case Command::Factor: return "factor";
    case Command::Ng: return "ng";
    case Command::Asym: return "asym";
    case Command::MaxMod: return "maxmod";
    case Command::Recursion: return "recursion";
  }
  return "?";
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

RunConfig parse_config(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::SchemaError, "config is not valid JSON");
  io::reject_unknown_keys(j, "config", {"command", "params"});
  if (!j.contains("command") || !j["command"].is_string())
    throw Error(Errc::SchemaError, "config.command must be a string");
  std::string name = j["command"].get<std::string>();
  RunConfig cfg;
  cfg.raw_text = text;
  if (name == "solve") cfg.command = Command::Solve;
  else if (name == "atlas") cfg.command = Command::Atlas;
  else if (name == "radius") cfg.command = Command::Radius;
  else if (name == "factor") cfg.command = Command::Factor;
  else if (name == "ng") cfg.command = Command::Ng;
  else if (name == "asym") cfg.command = Command::Asym;
  else if (name == "maxmod") cfg.command = Command::MaxMod;
  else if (name == "recursion") cfg.command = Command::Recursion;
  else throw Error(Errc::SchemaError, "config.command: unknown command '" + name + "'");
  cfg.params = j.contains("params") ? j["params"] : json::object();
  validate_params(cfg.command, cfg.params);
  return cfg;
}

namespace {

json execute(const RunConfig& cfg, const std::string& out_dir, const std::string& hash,
             std::vector<std::string>& extra_files) {
  const json& p = cfg.params;
  json result;
  auto csv_header = [&](std::ofstream& out, const std::string& cols) {
    out << cols << ",tool_version,config_hash\r\n";
  };
  auto csv_tail = [&]() { return std::string(",\"") + kToolVersion + "\"," + hash; };

  switch (cfg.command) {
    case Command::Solve: {
      ivp::IvpSpec spec = io::ivp_from_json(p["spec"], "params.spec");
      int order = int_field(p, "order", "params", 64, 8);
      ivp::DiskChart chart = ivp::solve_local(spec, order);
      result["chart"] = io::to_json(chart);
      result["residual"] = ivp::residual_check(chart, 100);
      break;
    }
    case Command::Radius: {
      ivp::IvpSpec spec = io::ivp_from_json(p["spec"], "params.spec");
      int order = int_field(p, "order", "params", 64, 16);
      ivp::DiskChart chart = ivp::solve_local(spec, order, false);
      double emp = series::radius_or_inf(chart.empirical);
      std::vector<ivp::TheoryBounds> rows;
      if (p.contains("box")) {
        rows.push_back(existence_bounds(spec, p["box"][0].get<double>(),
                                        p["box"][1].get<double>()));
      } else {
        rows = ivp::searched_bounds(spec);
      }
      std::size_t best = 0;
      for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].picard > rows[best].picard) best = i;
      std::string csv_path = out_dir + "/radius.csv";
      std::ofstream csv(csv_path, std::ios::binary);
      csv_header(csv, "box_a,box_b,banach,picard,cauchy,empirical,selected");
      json jrows = json::array();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& b = rows[i];
        csv << fmt17(b.box_a) << ',' << fmt17(b.box_b) << ',' << fmt17(b.banach) << ','
            << fmt17(b.picard) << ',' << fmt17(b.cauchy) << ','
            << (std::isfinite(emp) ? fmt17(emp) : "inf") << ','
            << (i == best ? "true" : "false") << csv_tail() << "\r\n";
        jrows.push_back({{"box_a", b.box_a},
                         {"box_b", b.box_b},
                         {"banach", b.banach},
                         {"picard", b.picard},
                         {"cauchy", b.cauchy},
                         {"selected", i == best}});
      }
      extra_files.push_back(csv_path);
      result["rows"] = jrows;
      result["empirical"] = std::isfinite(emp) ? json(emp) : json();
      result["entire"] = chart.empirical.unbounded;
      break;
    }
    case Command::Atlas: {
      ivp::IvpSpec spec = io::ivp_from_json(p["spec"], "params.spec");
      atlas::Budget budget;
      if (p.contains("budget")) {
        budget.max_generation =
            int_field(p["budget"], "max_generation", "params.budget", 3, 0);
        budget.max_charts = int_field(p["budget"], "max_charts", "params.budget", 256, 1);
        budget.angles_per_chart =
            int_field(p["budget"], "angles_per_chart", "params.budget", 64, 4);
      }
      atlas::AtlasOptions opt;
      opt.order = int_field(p, "order", "params", 64, 16);
      opt.blowup_threshold = real_field(p, "blowup_threshold", "params", 1e8, true);
      atlas::Atlas a = atlas::build_atlas(spec, budget, opt);
      json aj = io::to_json(a);
      aj["tool"] = kToolVersion;
      aj["config_hash"] = hash;
      std::string atlas_path = out_dir + "/atlas.json";
      write_text(atlas_path, aj.dump(2) + "\n");
      extra_files.push_back(atlas_path);
      result["charts"] = a.charts.size();
      result["singular_points"] = a.singular.size();
      result["budget_exhausted"] = a.budget_exhausted;
      result["verify"] = io::to_json(atlas::verify_singular_structure(a));
      break;
    }
    case Command::Factor: {
      catalog::CatalogFn f = io::catalog_from_json(p["f"], "params.f");
      std::string mode = p["mode"].get<std::string>();
      int samples = int_field(p, "samples", "params", 200, 1);
      double box = real_field(p, "box_radius", "params", 2.0, true);
      lab::FactorChain chain;
      if (mode == "omitted") {
        std::complex<double> omitted{};
        if (p.contains("omitted"))
          omitted = io::complex_from_json(p["omitted"], "params.omitted");
        chain = lab::picard_factorize(f, omitted);
      } else {
        chain = lab::root_factorize(f, int_field(p, "N", "params", 1, 1));
      }
      result["chain"] = io::to_json(chain);
      result["residual"] = lab::verify_composition(f, chain, samples, box);
      break;
    }
    case Command::Ng: {
      ng::NgSequence seq = ng::build_cs(int_field(p, "K", "params", 12, 1));
      result["sequence"] = io::to_json(seq);
      break;
    }
    case Command::Asym: {
      catalog::CatalogFn f = io::catalog_from_json(p["f"], "params.f");
      int iterate = int_field(p, "iterate", "params", 0, 0);
      catalog::AsymptoticSet s = catalog::asymptotic_values(f);
      if (iterate > 0) s = lab::asym_iterate(f, s, iterate);
      result["set"] = io::to_json(s);
      break;
    }
    case Command::MaxMod: {
      catalog::CatalogFn f = io::catalog_from_json(p["f"], "params.f");
      std::vector<double> grid;
      if (p.contains("r"))
        grid.push_back(p["r"].get<double>());
      else
        for (const auto& r : p["r_grid"]) grid.push_back(r.get<double>());
      std::string csv_path = out_dir + "/maxmod.csv";
      std::ofstream csv(csv_path, std::ios::binary);
      csv_header(csv, "r,max_modulus");
      json rows = json::array();
      for (double r : grid) {
        double m = catalog::max_modulus(f, r);
        csv << fmt17(r) << ',' << fmt17(m) << csv_tail() << "\r\n";
        rows.push_back({{"r", r}, {"max_modulus", m}});
      }
      extra_files.push_back(csv_path);
      result["rows"] = rows;
      break;
    }
    case Command::Recursion: {
      catalog::CatalogFn g = io::catalog_from_json(p["g"], "params.g");
      catalog::CatalogFn h = io::catalog_from_json(p["h"], "params.h");
      int n_max = int_field(p, "n_max", "params", 3, 0);
      int order = int_field(p, "order", "params", 64, 8);
      lab::DivideReport rep = lab::divide_recursion(g, h, n_max, order);
      std::string csv_path = out_dir + "/recursion.csv";
      std::ofstream csv(csv_path, std::ios::binary);
      csv_header(csv, "k,residual");
      for (std::size_t k = 0; k < rep.residuals.size(); ++k)
        csv << k << ',' << fmt17(rep.residuals[k]) << csv_tail() << "\r\n";
      extra_files.push_back(csv_path);
      result["residuals"] = rep.residuals;
      result["pair_identity_residual"] = rep.pair_identity_residual;
      break;
    }
  }
  return result;
}

}  // namespace

RunOutcome run_command(const RunConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::string hash = config_hash(cfg.raw_text);
  RunOutcome outcome;
  outcome.result_path = out_dir + "/result.json";

  json envelope;
  envelope["tool"] = kToolVersion;
  envelope["config_hash"] = hash;
  envelope["command"] = command_name(cfg.command);
  try {
    envelope["result"] = execute(cfg, out_dir, hash, outcome.extra_files);
    envelope["status"] = "ok";
    outcome.exit_code = 0;
  } catch (const Error& e) {
    envelope["status"] = "error";
    envelope["error"] = {{"code", e.code_name()}, {"message", e.what()}};
    outcome.exit_code = (e.code() == Errc::SchemaError || e.code() == Errc::StrictFieldError)
                            ? 2
                            : 1;
  }
  write_text(outcome.result_path, envelope.dump(2) + "\n");
  return outcome;
}

std::string schema_text(const std::string& command) {
  json j;
  if (command == "solve") {
    j = {{"command", "solve"},
         {"params", {{"spec", "<ivp spec>"}, {"order", 64}}}};
  } else if (command == "radius") {
    j = {{"command", "radius"},
         {"params", {{"spec", "<ivp spec>"}, {"box", {1.0, 1.0}}, {"order", 64}}}};
  } else if (command == "atlas") {
    j = {{"command", "atlas"},
         {"params",
          {{"spec", "<ivp spec>"},
           {"budget",
            {{"max_generation", 3}, {"max_charts", 256}, {"angles_per_chart", 64}}},
           {"order", 64},
           {"blowup_threshold", 1e8}}}};
  } else if (command == "factor") {
    j = {{"command", "factor"},
         {"params",
          {{"f", "<catalog fn>"},
           {"mode", "omitted | root"},
           {"omitted", {0.0, 0.0}},
           {"N", 1},
           {"samples", 200},
           {"box_radius", 2.0}}}};
  } else if (command == "ng") {
    j = {{"command", "ng"}, {"params", {{"K", 12}}}};
  } else if (command == "asym") {
    j = {{"command", "asym"}, {"params", {{"f", "<catalog fn>"}, {"iterate", 0}}}};
  } else if (command == "maxmod") {
    j = {{"command", "maxmod"},
         {"params", {{"f", "<catalog fn>"}, {"r_grid", {1.0, 2.0}}}}};
  } else if (command == "recursion") {
    j = {{"command", "recursion"},
         {"params",
          {{"g", "<catalog fn>"}, {"h", "<catalog fn>"}, {"n_max", 3}, {"order", 64}}}};
  } else {
    throw Error(Errc::SchemaError, "unknown command '" + command + "'");
  }
  json spec_shape = {{"type", "type1 | type2"},
                     {"F", {{0.0, 0.0}, {1.0, 0.0}}},
                     {"G", {{0.0, 0.0}, {-1.0, 0.0}}},
                     {"N", 0},
                     {"a", {0.0, 0.0}},
                     {"alpha", {0.0, 0.0}},
                     {"a0", {0.0, 0.0}}};
  json fn_shape = {{"kind",
                    "int_exp_poly | exp_affine | affine | monomial | scaled_exp | z_exp_h "
                    "| int_exp_exp | ng_limit | chain | scale | pow_root | log_shift"}};
  json out = {{"config", j}, {"ivp_spec_shape", spec_shape}, {"catalog_fn_shape", fn_shape}};
  return out.dump(2) + "\n";
}

}  // namespace holofact::runner
