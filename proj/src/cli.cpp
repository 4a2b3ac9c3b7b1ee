#include "resodim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "resodim/boxdim.hpp"
#include "resodim/drop.hpp"
#include "resodim/homogenize.hpp"
#include "resodim/marstrand.hpp"
#include "resodim/planar.hpp"
#include "resodim/resonance.hpp"
#include "resodim/tower.hpp"

namespace resodim {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------- schema --

enum class Kind {
  cantor_ratio,   // rational in (0, 1/2)
  scalar,         // any rational/decimal
  positive_scalar,
  unit_scalar,    // in (0, 1)
  integer,
  positive_int,
  real,
  positive_real,
  int_list,       // comma-separated positive integers
  scalar_list,    // comma-separated scalars
  mode_enum,      // exact | float
  target_enum,    // product | disk
  path,
};

struct KeySpec {
  Kind kind;
  long long lo = 0, hi = 0;  // integer range when applicable
};

using Schema = std::map<std::string, KeySpec>;

const Schema& common_schema() {
  static const Schema s = {
      {"mode", {Kind::mode_enum}},
      {"seed", {Kind::integer, 0, 1'000'000'000}},
      {"out", {Kind::path}},
  };
  return s;
}

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> s = {
      {"resonance",
       {{"a", {Kind::cantor_ratio}},
        {"b", {Kind::cantor_ratio}},
        {"q_max", {Kind::positive_int, 1, 1'000'000'000}},
        {"tol", {Kind::positive_real}}}},
      {"dim",
       {{"a", {Kind::cantor_ratio}},
        {"k_min", {Kind::positive_int, 1, 64}},
        {"k_max", {Kind::positive_int, 1, 64}},
        {"base", {Kind::unit_scalar}},
        {"skip", {Kind::integer, 0, 16}}}},
      {"sumdim",
       {{"a", {Kind::cantor_ratio}},
        {"b", {Kind::cantor_ratio}},
        {"s", {Kind::positive_scalar}},
        {"k_min", {Kind::positive_int, 1, 64}},
        {"k_max", {Kind::positive_int, 1, 64}},
        {"base", {Kind::unit_scalar}},
        {"skip", {Kind::integer, 0, 16}}}},
      {"marstrand",
       {{"a", {Kind::cantor_ratio}},
        {"b", {Kind::cantor_ratio}},
        {"k", {Kind::positive_int, 1, 16}},
        {"eps", {Kind::positive_real}},
        {"theta_steps", {Kind::positive_int, 4, 1'000'000}},
        {"delta", {Kind::positive_real}}}},
      {"tower",
       {{"a", {Kind::cantor_ratio}},
        {"b", {Kind::cantor_ratio}},
        {"tau", {Kind::scalar}},
        {"m", {Kind::positive_int, 1, 16}},
        {"eps", {Kind::positive_real}},
        {"levels", {Kind::positive_int, 1, 64}},
        {"theta_steps", {Kind::positive_int, 4, 1'000'000}},
        {"max_nodes", {Kind::positive_int, 1, 100'000'000}}}},
      {"homogenize",
       {{"a", {Kind::cantor_ratio}},
        {"r", {Kind::scalar_list}},
        {"t", {Kind::scalar_list}},
        {"k", {Kind::positive_int, 1, 100'000}},
        {"max_enumerate", {Kind::positive_int, 1, 10'000'000}}}},
      {"drop",
       {{"xi", {Kind::unit_scalar}},
        {"a", {Kind::int_list}},
        {"b", {Kind::int_list}}}},
      {"project",
       {{"n", {Kind::positive_int, 2, 16}},
        {"zeta", {Kind::unit_scalar}},
        {"theta", {Kind::real}},
        {"spread", {Kind::positive_real}},
        {"xi_steps", {Kind::positive_int, 4, 100'000}},
        {"k_min", {Kind::positive_int, 1, 32}},
        {"k_max", {Kind::positive_int, 1, 32}},
        {"skip", {Kind::integer, 0, 16}}}},
      {"render",
       {{"target", {Kind::target_enum}},
        {"a", {Kind::cantor_ratio}},
        {"b", {Kind::cantor_ratio}},
        {"depth", {Kind::integer, 0, 16}},
        {"n", {Kind::positive_int, 2, 16}},
        {"zeta", {Kind::unit_scalar}},
        {"theta", {Kind::real}},
        {"spread", {Kind::positive_real}}}},
  };
  return s;
}

// ------------------------------------------------------------ validation --

bool parse_int_strict(const std::string& text, long long& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtoll(text.c_str(), &end, 10);
  return end && *end == '\0';
}

bool parse_real_strict(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end && *end == '\0' && std::isfinite(out);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<std::string> check_value(const KeySpec& spec,
                                       const std::string& value) {
  auto as_scalar = [&](Scalar& out) {
    try {
      out = parse_scalar(value, true);
      return true;
    } catch (const std::exception&) {
      return false;
    }
  };
  Scalar s;
  long long n;
  double d;
  switch (spec.kind) {
    case Kind::cantor_ratio:
      if (!as_scalar(s)) return "not a number";
      if (!(Scalar(0) < s && s * Scalar(2) < Scalar(1)))
        return "central Cantor ratio must lie in (0, 1/2)";
      return std::nullopt;
    case Kind::scalar:
      if (!as_scalar(s)) return "not a number";
      return std::nullopt;
    case Kind::positive_scalar:
      if (!as_scalar(s)) return "not a number";
      if (!(s > Scalar(0))) return "must be > 0";
      return std::nullopt;
    case Kind::unit_scalar:
      if (!as_scalar(s)) return "not a number";
      if (!(Scalar(0) < s && s < Scalar(1))) return "must lie in (0, 1)";
      return std::nullopt;
    case Kind::integer:
    case Kind::positive_int:
      if (!parse_int_strict(value, n)) return "not an integer";
      if (n < spec.lo || n > spec.hi)
        return "out of range [" + std::to_string(spec.lo) + ", " +
               std::to_string(spec.hi) + "]";
      return std::nullopt;
    case Kind::real:
      if (!parse_real_strict(value, d)) return "not a number";
      return std::nullopt;
    case Kind::positive_real:
      if (!parse_real_strict(value, d)) return "not a number";
      if (!(d > 0)) return "must be > 0";
      return std::nullopt;
    case Kind::int_list:
      for (const std::string& tok : split_list(value)) {
        if (!parse_int_strict(tok, n) || n < 1)
          return "expected comma-separated positive integers";
      }
      return std::nullopt;
    case Kind::scalar_list:
      for (const std::string& tok : split_list(value)) {
        Scalar tmp;
        try {
          tmp = parse_scalar(tok, true);
        } catch (const std::exception&) {
          return "expected comma-separated numbers";
        }
      }
      return std::nullopt;
    case Kind::mode_enum:
      if (value != "exact" && value != "float")
        return "expected 'exact' or 'float'";
      return std::nullopt;
    case Kind::target_enum:
      if (value != "product" && value != "disk")
        return "expected 'product' or 'disk'";
      return std::nullopt;
    case Kind::path:
      if (value.empty()) return "empty path";
      return std::nullopt;
  }
  return "unhandled kind";
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "resonance", "dim",  "sumdim",  "marstrand", "tower",
      "homogenize", "drop", "project", "render"};
  return names;
}

ConfigResult parse_config(const std::string& text) {
  ConfigResult result;
  ExperimentConfig config;
  std::string prefix;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        result.errors.push_back(
            {lineno, 1, "", "malformed section header: " + line});
        continue;
      }
      prefix = trim(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      result.errors.push_back(
          {lineno, static_cast<int>(raw.size()), "",
           "expected 'key = value', got: " + line});
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      result.errors.push_back({lineno, 1, "", "empty key"});
      continue;
    }
    if (key == "subcommand" || (prefix.empty() && key == "command")) {
      config.subcommand = value;
    } else if (!prefix.empty() && prefix != "common") {
      // a section names the subcommand its keys belong to
      if (config.subcommand.empty()) config.subcommand = prefix;
      config.values[key] = value;
    } else {
      config.values[key] = value;
    }
  }

  auto names_list = [] {
    std::string all;
    for (const auto& n : subcommand_names()) {
      if (!all.empty()) all += ", ";
      all += n;
    }
    return all;
  };
  if (config.subcommand.empty()) {
    result.errors.push_back(
        {0, 0, "subcommand",
         "missing subcommand; available: " + names_list()});
  } else if (!schemas().count(config.subcommand)) {
    result.errors.push_back(
        {0, 0, "subcommand", "unknown subcommand '" + config.subcommand +
                                 "'; available: " + names_list()});
  } else {
    const Schema& schema = schemas().at(config.subcommand);
    for (const auto& [key, value] : config.values) {
      const KeySpec* spec = nullptr;
      if (auto it = schema.find(key); it != schema.end()) spec = &it->second;
      else if (auto jt = common_schema().find(key); jt != common_schema().end())
        spec = &jt->second;
      if (!spec) {
        result.errors.push_back(
            {0, 0, config.subcommand + "." + key, "unknown key"});
        continue;
      }
      if (auto err = check_value(*spec, value)) {
        result.errors.push_back({0, 0, config.subcommand + "." + key, *err});
      }
    }
  }

  if (result.errors.empty()) result.config = std::move(config);
  return result;
}

ConfigResult assemble_config(const std::string& file_text,
                             const std::vector<std::string>& overrides,
                             bool dry_run) {
  std::string text = file_text;
  if (!text.empty() && text.back() != '\n') text += '\n';
  for (const auto& tok : overrides) {
    if (tok.find('=') == std::string::npos)
      text += "subcommand = " + tok + "\n";
    else
      text += tok + "\n";
  }
  ConfigResult result = parse_config(text);
  if (result.config) result.config->dry_run = dry_run;
  return result;
}

// ------------------------------------------------------------------ run --

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

struct Binder {
  const ExperimentConfig& cfg;
  bool exact;

  Scalar scalar(const std::string& key, const std::string& fallback) const {
    return parse_scalar(cfg.get(key, fallback), exact);
  }
  long long integer(const std::string& key, long long fallback) const {
    long long n = fallback;
    if (cfg.has(key)) parse_int_strict(cfg.values.at(key), n);
    return n;
  }
  double real(const std::string& key, double fallback) const {
    double d = fallback;
    if (cfg.has(key)) parse_real_strict(cfg.values.at(key), d);
    return d;
  }
  std::vector<long long> int_list(const std::string& key) const {
    std::vector<long long> out;
    if (!cfg.has(key)) return out;
    for (const auto& tok : split_list(cfg.values.at(key))) {
      long long n = 0;
      parse_int_strict(tok, n);
      out.push_back(n);
    }
    return out;
  }
};

IFS1D bind_cantor(const Binder& b, const std::string& key) {
  if (!b.cfg.has(key))
    throw DomainError("missing required key '" + key + "'");
  return central_cantor(b.scalar(key, "0"));
}

IFS1D bind_system(const Binder& b) {
  if (b.cfg.has("r")) {
    auto rs = split_list(b.cfg.values.at("r"));
    auto ts = b.cfg.has("t") ? split_list(b.cfg.values.at("t"))
                             : std::vector<std::string>(rs.size(), "0");
    if (rs.size() != ts.size())
      throw DomainError("'r' and 't' lists must have equal length");
    std::vector<Similitude1D> maps;
    for (std::size_t i = 0; i < rs.size(); ++i)
      maps.push_back({parse_scalar(rs[i], b.exact), parse_scalar(ts[i], b.exact)});
    return IFS1D::create(std::move(maps));
  }
  return bind_cantor(b, "a");
}

IFS2D bind_planar(const Binder& b) {
  using std::numbers::pi;
  int n = static_cast<int>(b.integer("n", 3));
  Scalar zeta = b.scalar("zeta", "3/10");
  double theta = b.real("theta", pi * (std::sqrt(5.0) - 1) / 2);
  double spread = b.real("spread", 0.6);
  std::vector<Similitude2D> maps;
  for (int i = 0; i < n; ++i) {
    double a = 2 * pi * i / n;
    maps.push_back({zeta, theta, false, Scalar::approx(spread * std::cos(a)),
                    Scalar::approx(spread * std::sin(a))});
  }
  return IFS2D::create(std::move(maps), 0, 0, 1.0);
}

// depth of the central-Cantor refinement reaching delta, for planning only
long long plan_depth(double ratio, double delta) {
  long long d = 0;
  double w = 1;
  while (w > delta && d < 64) {
    w *= ratio;
    ++d;
  }
  return d;
}

RunResult run_impl(const ExperimentConfig& cfg) {
  RunResult res;
  Binder b{cfg, cfg.get("mode", "exact") == "exact"};
  std::string& sum = res.summary;
  const std::string& sub = cfg.subcommand;

  if (sub == "resonance") {
    IFS1D left = bind_cantor(b, "a"), right = bind_cantor(b, "b");
    long long q_max = b.integer("q_max", 1'000'000);
    double tol = b.real("tol", 1e-12);
    if (cfg.dry_run) {
      sum += "planned: " + std::to_string(left.size() * right.size()) +
             " ratio pairs, q_max=" + std::to_string(q_max) + "\n";
      return res;
    }
    ResonanceVerdict v = check_pair(left, right, q_max, tol);
    res.csv = csv_row({"i", "j", "p", "q"});
    std::size_t idx = 0;
    for (std::size_t i = 0; i < left.size(); ++i) {
      for (std::size_t j = 0; j < right.size(); ++j, ++idx) {
        if (v.witnesses[idx]) {
          res.csv += csv_row({std::to_string(i), std::to_string(j),
                              std::to_string(v.witnesses[idx]->p),
                              std::to_string(v.witnesses[idx]->q)});
        }
      }
    }
    sum += std::string("resonant=") + (v.resonant ? "true" : "false") + "\n";
    for (std::size_t i = 0; i < v.witnesses.size(); ++i) {
      if (v.witnesses[i]) {
        sum += "witness=(" + std::to_string(v.witnesses[i]->p) + "," +
               std::to_string(v.witnesses[i]->q) + ")\n";
        break;
      }
    }
    if (v.lattice_alpha) sum += "alpha=" + fmt(*v.lattice_alpha) + "\n";
    return res;
  }

  if (sub == "dim" || sub == "sumdim") {
    IFS1D left = bind_cantor(b, "a");
    DimParams params;
    params.k_min = static_cast<int>(b.integer("k_min", 6));
    params.k_max = static_cast<int>(b.integer("k_max", 12));
    params.skip_coarsest = static_cast<int>(b.integer("skip", 2));
    if (cfg.has("base")) params.scale_ratio = b.scalar("base", "0");
    if (params.k_min > params.k_max)
      throw DomainError("k_min must not exceed k_max");
    DimReport rep;
    if (sub == "dim") {
      if (cfg.dry_run) {
        double base = cfg.has("base") ? b.scalar("base", "0").dbl()
                                      : left.map(0).ratio.abs().dbl();
        long long depth =
            plan_depth(left.map(0).ratio.abs().dbl(),
                       std::pow(base, params.k_max));
        sum += "planned: " + std::to_string(params.k_max - params.k_min + 1) +
               " scales, <= 2^" + std::to_string(depth) +
               " cylinders at the finest\n";
        return res;
      }
      rep = dim_single(left, params);
    } else {
      IFS1D right = bind_cantor(b, "b");
      Scalar s = b.scalar("s", "1");
      if (cfg.dry_run) {
        Scalar base = params.scale_ratio == Scalar(0)
                          ? default_scale_ratio(left, &right)
                          : params.scale_ratio;
        double delta = std::pow(base.dbl(), params.k_max);
        long long da = plan_depth(left.map(0).ratio.abs().dbl(), delta);
        long long db = plan_depth(right.map(0).ratio.abs().dbl(), delta);
        sum += "planned: " + std::to_string(params.k_max - params.k_min + 1) +
               " scales, <= 2^" + std::to_string(da + db) +
               " cylinder pairs at the finest\n";
        return res;
      }
      rep = dim_report(left, right, s, params);
    }
    res.csv = csv_row({"k", "delta", "count"});
    for (const auto& row : rep.series.rows)
      res.csv += csv_row({std::to_string(row.k), row.delta.str(),
                          std::to_string(row.count)});
    sum += "slope=" + fmt(rep.estimate.value) + "\n";
    sum += "stderr=" + fmt(rep.estimate.stderr_) + "\n";
    sum += "max_residual=" + fmt(rep.estimate.max_residual) + "\n";
    sum += "base=" + rep.scale_ratio.str() + "\n";
    return res;
  }

  if (sub == "marstrand") {
    IFS1D left = bind_cantor(b, "a"), right = bind_cantor(b, "b");
    int k = static_cast<int>(b.integer("k", 6));
    double eps = b.real("eps", 0.1);
    int theta_steps = static_cast<int>(b.integer("theta_steps", 4096));
    if (cfg.dry_run) {
      auto rows = mk_sequence(left.map(0).ratio.abs(),
                              right.map(0).ratio.abs(), k);
      long long cells = 1;
      for (int i = 0; i < k; ++i) cells *= 2;
      for (int i = 0; i < rows.back().kp; ++i) cells *= 2;
      sum += "planned: " + std::to_string(cells) + " cells, " +
             std::to_string(theta_steps) + " angles\n";
      return res;
    }
    CellFamily family = product_cells(left, right, k);
    double delta = cfg.has("delta")
                       ? b.real("delta", 0)
                       : calibrate_delta(family, eps, theta_steps);
    GoodAngleSet gset = good_angle_set(family, eps, theta_steps, delta);
    res.csv = csv_row({"theta", "subfamily_size", "good"});
    for (int i = 0; i < theta_steps; ++i) {
      double theta = (i + 0.5) * std::numbers::pi / theta_steps;
      std::size_t size = separated_subfamily(family, theta).size();
      res.csv += csv_row({fmt(theta), std::to_string(size),
                          size >= gset.threshold ? "1" : "0"});
    }
    sum += "cells=" + std::to_string(family.cells.size()) + "\n";
    sum += "rho=" + fmt(family.rho) + "\n";
    sum += "gamma=" + fmt(family.gamma) + "\n";
    sum += "delta=" + fmt(delta) + "\n";
    sum += "threshold=" + std::to_string(gset.threshold) + "\n";
    sum += "bad_measure=" + fmt(gset.bad_measure) + "\n";
    sum += "riesz_energy=" + fmt(riesz_energy(family)) + "\n";
    return res;
  }

  if (sub == "tower") {
    IFS1D left = bind_cantor(b, "a"), right = bind_cantor(b, "b");
    TowerParams params;
    params.m = static_cast<int>(b.integer("m", 3));
    params.eps = b.real("eps", 0.2);
    params.levels = static_cast<int>(b.integer("levels", 8));
    params.theta_steps = static_cast<int>(b.integer("theta_steps", 1024));
    params.max_nodes = static_cast<std::size_t>(b.integer("max_nodes", 200'000));
    Scalar tau = b.scalar("tau", "0");
    if (cfg.dry_run) {
      sum += "planned: " + std::to_string(params.levels) + " levels, m=" +
             std::to_string(params.m) + ", <= " +
             std::to_string(params.max_nodes) + " materialized nodes\n";
      return res;
    }
    TowerReport rep = build_tree(left, right, tau, params);
    res.csv = csv_row({"level", "K", "orbit", "good", "child_count",
                       "node_count", "materialized"});
    for (const auto& lv : rep.levels)
      res.csv += csv_row({std::to_string(lv.j), std::to_string(lv.K),
                          fmt(lv.orbit), lv.good ? "1" : "0",
                          std::to_string(lv.child_count),
                          std::to_string(lv.node_count),
                          lv.materialized ? "1" : "0"});
    sum += "alpha=" + fmt(rep.state.alpha) + "\n";
    sum += "beta=" + fmt(rep.state.beta) + "\n";
    sum += "weyl_measured=" + fmt(rep.weyl.measured) + "\n";
    sum += "weyl_expected=" + fmt(rep.weyl.expected) + "\n";
    sum += "certified_slope=" + fmt(rep.certified_slope) + "\n";
    sum += "theoretical_slope=" + fmt(rep.theoretical_slope) + "\n";
    sum += "gamma=" + fmt(rep.gamma) + "\n";
    return res;
  }

  if (sub == "homogenize") {
    IFS1D sys = bind_system(b);
    long long k = b.integer("k", 10);
    std::size_t max_enum =
        static_cast<std::size_t>(b.integer("max_enumerate", 100'000));
    if (cfg.dry_run) {
      sum += "planned: k=" + std::to_string(k) + ", " +
             std::to_string(sys.size()) + " letters\n";
      return res;
    }
    HomogeneousResult hres = homogeneous_subsystem(sys, k, max_enum);
    res.csv = csv_row({"k", "N", "rho", "tau", "gamma"});
    res.csv += csv_row({std::to_string(hres.report.k), hres.report.N.str(),
                        hres.report.rho.str(), fmt(hres.report.tau),
                        fmt(hres.report.gamma)});
    std::string v;
    for (long long vi : hres.report.v) {
      if (!v.empty()) v += ",";
      v += std::to_string(vi);
    }
    sum += "v=" + v + "\n";
    sum += "tau=" + fmt(hres.report.tau) + "\n";
    sum += std::string("materialized=") +
           (hres.system.has_value() ? "true" : "false") + "\n";
    return res;
  }

  if (sub == "drop") {
    Scalar xi = b.scalar("xi", "1/2");
    auto a_list = b.int_list("a");
    auto b_list = b.int_list("b");
    if (a_list.size() < 2 || b_list.empty())
      throw DomainError("drop needs 'a' (>= 2 exponents) and 'b'");
    if (b_list.size() == 1) b_list.push_back(b_list[0]);
    if (cfg.dry_run) {
      long long ell = a_list[0] * a_list[1] * b_list[0] * b_list[1];
      sum += "planned: ell=" + std::to_string(ell) + ", " +
             std::to_string(a_list.size()) + "+" +
             std::to_string(b_list.size()) + " exponents\n";
      return res;
    }
    DropInstance inst = make_drop_instance(xi, a_list, b_list);
    double bound = essential_pair_bound(inst);
    res.csv = csv_row({"xi", "ell", "beta", "betap", "a", "b", "A", "B", "M0",
                       "M", "p", "q", "bound"});
    res.csv += csv_row({inst.xi.str(), std::to_string(inst.ell),
                        fmt(inst.beta), fmt(inst.betap), std::to_string(inst.a),
                        std::to_string(inst.b), std::to_string(inst.A),
                        std::to_string(inst.B), std::to_string(inst.M0),
                        std::to_string(inst.M), fmt(inst.p), fmt(inst.q),
                        fmt(bound)});
    sum += "beta_sum=" + fmt(inst.beta + inst.betap) + "\n";
    sum += "bound=" + fmt(bound) + "\n";
    return res;
  }

  if (sub == "project") {
    IFS2D sys = bind_planar(b);
    int xi_steps = static_cast<int>(b.integer("xi_steps", 64));
    ProfileParams params;
    params.k_min = static_cast<int>(b.integer("k_min", 4));
    params.k_max = static_cast<int>(b.integer("k_max", 9));
    params.skip_coarsest = static_cast<int>(b.integer("skip", 0));
    if (cfg.dry_run) {
      double balls = std::pow(static_cast<double>(sys.size()), params.k_max);
      sum += "planned: " + std::to_string(xi_steps) + " directions, " +
             std::to_string(params.k_max - params.k_min + 1) +
             " scales, <= " + fmt(balls) + " balls\n";
      return res;
    }
    ProjectionProfile prof = projection_profile(sys, xi_steps, params);
    res.csv = csv_row({"xi", "dim_estimate", "stderr"});
    double lo = 2, hi = 0;
    for (const auto& row : prof.rows) {
      res.csv += csv_row({fmt(row.xi), fmt(row.estimate.value),
                          fmt(row.estimate.stderr_)});
      lo = std::min(lo, row.estimate.value);
      hi = std::max(hi, row.estimate.value);
    }
    sum += "min=" + fmt(lo) + "\n";
    sum += "max=" + fmt(hi) + "\n";
    return res;
  }

  if (sub == "render") {
    std::string target = cfg.get("target", "product");
    int depth = static_cast<int>(b.integer("depth", 3));
    if (target == "product") {
      IFS1D left = bind_cantor(b, "a"), right = bind_cantor(b, "b");
      if (cfg.dry_run) {
        sum += "planned: product squares up to depth " +
               std::to_string(depth) + "\n";
        return res;
      }
      ProductRender ren = render_product(left, right, depth);
      res.svg = ren.svg;
      sum += "squares=" + std::to_string(ren.squares.size()) + "\n";
      sum += "colored_pairs=" + std::to_string(ren.colored_pairs) + "\n";
    } else {
      IFS2D sys = bind_planar(b);
      if (cfg.dry_run) {
        double words = std::pow(static_cast<double>(sys.size()), depth);
        sum += "planned: " + fmt(words) + " disks\n";
        return res;
      }
      res.svg = render_svg(sys, depth);
      sum += "depth=" + std::to_string(depth) + "\n";
    }
    return res;
  }

  throw InternalError("unhandled subcommand " + sub);
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  try {
    return run_impl(config);
  } catch (const std::exception& e) {
    RunResult res;
    res.status = 1;
    const char* type = "internal";
    if (dynamic_cast<const DomainError*>(&e)) type = "domain";
    else if (dynamic_cast<const NumericError*>(&e)) type = "numeric";
    else if (dynamic_cast<const ResourceError*>(&e)) type = "resource";
    json record = {{"error", {{"type", type},
                              {"subcommand", config.subcommand},
                              {"message", e.what()}}}};
    res.error_json = record.dump() + "\n";
    return res;
  }
}

}  // namespace resodim
