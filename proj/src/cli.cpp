#include "wlab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace wlab::cli {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw ConfigError((pointer.empty() ? "/" : pointer) + ": " + what);
}

// Typed access to one JSON object with unknown-key rejection.
class Reader {
 public:
  Reader(const json& j, std::string pointer) : j_(j), ptr_(std::move(pointer)) {
    if (!j_.is_object()) fail(ptr_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& [key, value] : j_.items()) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) fail(at(key), "unknown key");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  std::string at(const std::string& key) const { return ptr_ + "/" + escape_pointer(key); }
  const std::string& pointer() const { return ptr_; }
  const json& get(const char* key) const {
    if (!j_.contains(key)) fail(at(key), "required key is missing");
    return j_.at(key);
  }

  double number(const char* key) const {
    const auto& v = get(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at(key), "expected a finite number");
    return x;
  }
  double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }
  double positive(const char* key) const {
    const double x = number(key);
    if (!(x > 0.0)) fail(at(key), "expected a positive number");
    return x;
  }

  int integer(const char* key) const {
    const auto& v = get(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<int>();
  }
  int integer_or(const char* key, int fallback) const { return has(key) ? integer(key) : fallback; }

  std::string string(const char* key) const {
    const auto& v = get(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const char* key) const {
    const auto& v = get(key);
    if (!v.is_array()) fail(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(at(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Vec2 point(const char* key) const {
    const auto xs = numbers(key);
    if (xs.size() != 2) fail(at(key), "expected [x, y]");
    return {xs[0], xs[1]};
  }

 private:
  const json& j_;
  std::string ptr_;
};

double geodesic_extent(double euclidean, SpaceForm space) {
  if (!space.is_hyperbolic()) return euclidean;
  return euclidean < 1.0 ? 2.0 * std::atanh(euclidean) : std::numeric_limits<double>::infinity();
}

Domain parse_domain(const Reader& r, SpaceForm space, double mesh_size, const fs::path& base_dir) {
  const std::string shape = r.string("shape");
  const auto disk_radius = [&]() {
    if (r.has("geodesic_radius")) {
      if (r.has("radius")) fail(r.pointer(), "give either radius or geodesic_radius");
      if (!space.is_hyperbolic()) fail(r.at("geodesic_radius"), "only meaningful in hyperbolic space");
      return poincare_radius_of(r.positive("geodesic_radius"));
    }
    return r.positive("radius");
  };
  if (shape == "shell" || shape == "ball") {
    ShellSpec s;
    if (shape == "shell") {
      r.allow({"shape", "inner", "outer"});
      s.inner = r.number("inner");
      s.outer = r.positive("outer");
    } else {
      r.allow({"shape", "radius"});
      s.outer = r.positive("radius");
    }
    try {
      s.validate();
    } catch (const std::exception& e) {
      fail(r.pointer(), e.what());
    }
    return s;
  }
  if (shape == "mesh-file") {
    r.allow({"shape", "path"});
    fs::path path = r.string("path");
    if (path.is_relative()) path = base_dir / path;
    try {
      return ExternalMesh{path.string(), load_mesh(path.string())};
    } catch (const std::exception& e) {
      fail(r.at("path"), e.what());
    }
  }
  const auto parsed = parse_shape(shape);
  if (!parsed) fail(r.at("shape"), "unknown shape '" + shape + "'");
  DomainSpec d;
  d.shape = *parsed;
  d.h = mesh_size;
  switch (d.shape) {
    case Shape::Disk:
      r.allow({"shape", "radius", "geodesic_radius", "center"});
      d.radius = disk_radius();
      if (r.has("center")) d.center = r.point("center");
      break;
    case Shape::TranslatedDisk:
      r.allow({"shape", "radius", "geodesic_radius", "center"});
      d.radius = disk_radius();
      d.center = r.point("center");
      break;
    case Shape::Ellipse:
      r.allow({"shape", "semi_a", "semi_b", "aspect", "area", "center"});
      if (r.has("aspect") || r.has("area")) {
        if (r.has("semi_a") || r.has("semi_b")) fail(r.pointer(), "give semi-axes or aspect and area, not both");
        const double rho = r.positive("aspect"), area = r.positive("area");
        d.semi_a = std::sqrt(area * rho / std::numbers::pi);
        d.semi_b = std::sqrt(area / (std::numbers::pi * rho));
      } else {
        d.semi_a = r.positive("semi_a");
        d.semi_b = r.positive("semi_b");
      }
      if (r.has("center")) d.center = r.point("center");
      break;
    case Shape::Annulus:
      r.allow({"shape", "inner_radius", "radius", "center"});
      d.inner_radius = r.positive("inner_radius");
      d.radius = r.positive("radius");
      if (r.has("center")) d.center = r.point("center");
      break;
    case Shape::Polygon: {
      r.allow({"shape", "vertices"});
      const auto& v = r.get("vertices");
      if (!v.is_array()) fail(r.at("vertices"), "expected an array of [x, y] pairs");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = r.at("vertices") + "/" + std::to_string(i);
        if (!v[i].is_array() || v[i].size() != 2 || !v[i][0].is_number() || !v[i][1].is_number())
          fail(p, "expected [x, y]");
        d.vertices.emplace_back(v[i][0].get<double>(), v[i][1].get<double>());
      }
      break;
    }
    case Shape::PerturbedDisk: {
      r.allow({"shape", "radius", "modes", "center"});
      d.radius = r.positive("radius");
      if (r.has("center")) d.center = r.point("center");
      const auto& modes = r.get("modes");
      if (!modes.is_array()) fail(r.at("modes"), "expected an array of modes");
      for (std::size_t i = 0; i < modes.size(); ++i) {
        const Reader m(modes[i], r.at("modes") + "/" + std::to_string(i));
        m.allow({"k", "amplitude", "phase"});
        d.perturbation.push_back({m.integer("k"), m.number("amplitude"), m.number_or("phase", 0.0)});
      }
      break;
    }
  }
  try {
    d.validate();
  } catch (const std::exception& e) {
    fail(r.pointer(), e.what());
  }
  return d;
}

double domain_extent(const Domain& domain, SpaceForm space) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ShellSpec>)
          return d.outer;
        else if constexpr (std::is_same_v<T, DomainSpec>)
          return geodesic_extent(d.max_distance_from_origin(), space);
        else
          return geodesic_extent(d.mesh.max_node_distance(), space);
      },
      domain);
}

std::optional<Check> parse_check(const std::string& name) {
  if (name == "main") return Check::Main;
  if (name == "sharper") return Check::Sharper;
  if (name == "conjecture") return Check::Conjecture;
  if (name == "lemma23") return Check::Monotonicity;
  if (name == "center") return Check::Center;
  return std::nullopt;
}

std::string csv_number(double x) {
  if (!std::isfinite(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string file_safe(const std::string& id) {
  std::string out;
  for (char c : id) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Conjecture margin when computed, else the main gap.
std::optional<double> margin_of(const InequalityReport& r) {
  if (r.conjecture) return r.conjecture->margin;
  if (r.main) return r.main->gap;
  return std::nullopt;
}

}  // namespace

CaseConfig parse_case(const json& doc, const std::string& pointer, const fs::path& base_dir) {
  const Reader r(doc, pointer);
  r.allow({"id", "space", "dimension", "domain", "weight", "checks", "mesh_size",
           "refinement_levels", "frame", "tolerances"});
  CaseConfig c;
  Problem& p = c.problem;
  p.id = r.string("id");
  if (p.id.empty()) fail(r.at("id"), "must not be empty");

  const std::string space = r.has("space") ? r.string("space") : "euclidean";
  if (space == "euclidean")
    p.space = SpaceForm::from_curvature(0);
  else if (space == "hyperbolic")
    p.space = SpaceForm::from_curvature(-1);
  else
    fail(r.at("space"), "expected \"euclidean\" or \"hyperbolic\"");
  p.dimension = r.integer_or("dimension", 2);
  if (p.dimension < 2 || p.dimension > 12) fail(r.at("dimension"), "expected 2 <= dimension <= 12");

  const double mesh_size = r.has("mesh_size") ? r.positive("mesh_size") : 0.1;
  p.settings.refinement_levels = r.integer_or("refinement_levels", 2);
  if (p.settings.refinement_levels < 1 || p.settings.refinement_levels > 6)
    fail(r.at("refinement_levels"), "expected 1 <= refinement_levels <= 6");
  if (r.has("frame")) {
    const auto f = parse_frame(r.string("frame"));
    if (!f) fail(r.at("frame"), "expected \"ambient\" or \"trial-center\"");
    p.settings.frame = *f;
  }
  p.domain = parse_domain(Reader(r.get("domain"), r.at("domain")), p.space, mesh_size, base_dir);

  int certify_grid = 10000;
  double certify_tol = 1e-10;
  if (r.has("tolerances")) {
    const Reader t(r.get("tolerances"), r.at("tolerances"));
    t.allow({"certify_grid", "certify_tol", "shooting_abs", "shooting_rel", "mu_tol",
             "profile_samples", "monotonicity_grid", "confirm_refinements"});
    certify_grid = t.integer_or("certify_grid", certify_grid);
    if (certify_grid < 100) fail(t.at("certify_grid"), "expected at least 100 grid points");
    if (t.has("certify_tol")) certify_tol = t.positive("certify_tol");
    auto& s = p.settings.shooting;
    if (t.has("shooting_abs")) s.abs_tol = t.positive("shooting_abs");
    if (t.has("shooting_rel")) s.rel_tol = t.positive("shooting_rel");
    if (t.has("mu_tol")) s.mu_tol = t.positive("mu_tol");
    s.profile_samples = t.integer_or("profile_samples", s.profile_samples);
    if (s.profile_samples < 64) fail(t.at("profile_samples"), "expected at least 64 samples");
    p.settings.monotonicity_grid = t.integer_or("monotonicity_grid", p.settings.monotonicity_grid);
    if (p.settings.monotonicity_grid < 1000) fail(t.at("monotonicity_grid"), "expected at least 1000 grid points");
    p.settings.confirm_refinements = t.integer_or("confirm_refinements", p.settings.confirm_refinements);
    if (p.settings.confirm_refinements < 0 || p.settings.confirm_refinements > 3)
      fail(t.at("confirm_refinements"), "expected 0 <= confirm_refinements <= 3");
  }

  {
    const Reader w(r.get("weight"), r.at("weight"));
    w.allow({"family", "params", "domain_cap"});
    const std::string name = w.string("family");
    const auto family = parse_weight_family(name);
    if (!family) fail(w.at("family"), "unknown weight family '" + name + "'");
    const auto params = w.numbers("params");
    double cap = 0.0;
    if (w.has("domain_cap")) {
      cap = w.positive("domain_cap");
    } else if (*family == WeightFamily::TabulatedSpline && params.size() >= 2) {
      cap = params[params.size() - 2];
    } else {
      const double extent = domain_extent(p.domain, p.space);
      cap = std::isfinite(extent) ? std::max(2.0 * extent, extent + 1.0) : 1.0;
    }
    try {
      p.phi = make_weight(*family, params, cap);
    } catch (const std::exception& e) {
      fail(w.pointer(), e.what());
    }
    const auto cert = property_I_certify(p.phi, certify_grid, certify_tol);
    if (!cert.passed) fail(w.pointer(), "Property I certification failed: " + cert.summary());
  }

  if (r.has("checks")) {
    const auto& checks = r.get("checks");
    if (!checks.is_array() || checks.empty()) fail(r.at("checks"), "expected a non-empty array");
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const std::string p_i = r.at("checks") + "/" + std::to_string(i);
      if (!checks[i].is_string()) fail(p_i, "expected a string");
      const auto ch = parse_check(checks[i].get<std::string>());
      if (!ch) fail(p_i, "unknown check '" + checks[i].get<std::string>() + "'");
      if (std::find(c.checks.begin(), c.checks.end(), *ch) != c.checks.end()) fail(p_i, "duplicate check");
      c.checks.push_back(*ch);
    }
  } else {
    c.checks = {Check::Main};
  }
  const bool meshed = !std::holds_alternative<ShellSpec>(p.domain);
  for (std::size_t i = 0; i < c.checks.size(); ++i) {
    const std::string p_i = r.at("checks") + "/" + std::to_string(i);
    if (c.checks[i] == Check::Sharper && p.space.is_hyperbolic())
      fail(p_i, "the sharper check is Euclidean only");
    if (c.checks[i] == Check::Center && (!meshed || p.space.is_hyperbolic()))
      fail(p_i, "the center check needs a Euclidean meshed domain");
  }
  try {
    p.validate();
  } catch (const std::exception& e) {
    fail(r.pointer(), e.what());
  }
  return c;
}

RunConfig parse_run_config(const json& doc, const fs::path& base_dir) {
  const Reader r(doc, "");
  r.allow({"schema", "cases"});
  if (r.integer("schema") != 1) fail("/schema", "unsupported schema version (expected 1)");
  const auto& cases = r.get("cases");
  if (!cases.is_array() || cases.empty()) fail("/cases", "expected a non-empty array of cases");
  RunConfig cfg;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string ptr = "/cases/" + std::to_string(i);
    cfg.cases.push_back(parse_case(cases[i], ptr, base_dir));
    if (!ids.insert(cfg.cases.back().problem.id).second) fail(ptr + "/id", "duplicate case id");
  }
  return cfg;
}

namespace {

// Sets a dotted path such as "weight.params[1]" inside a case object.
void assign_path(json& doc, const std::string& path, double value, const std::string& pointer) {
  json* node = &doc;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) fail(pointer, "empty parameter path");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::string key = parts[i];
    std::optional<std::size_t> index;
    if (const auto open = key.find('['); open != std::string::npos) {
      if (key.back() != ']') fail(pointer, "malformed index in '" + path + "'");
      try {
        index = std::stoul(key.substr(open + 1, key.size() - open - 2));
      } catch (const std::exception&) {
        fail(pointer, "malformed index in '" + path + "'");
      }
      key = key.substr(0, open);
    }
    if (!node->is_object()) fail(pointer, "'" + path + "' does not name an object member");
    const bool last = i + 1 == parts.size();
    if (index) {
      if (!node->contains(key) || !(*node)[key].is_array() || *index >= (*node)[key].size())
        fail(pointer, "'" + path + "' indexes past the end of an array");
      node = &(*node)[key][*index];
    } else {
      if (!last && !node->contains(key)) fail(pointer, "'" + path + "' does not exist in the base case");
      node = &(*node)[key];
    }
  }
  *node = value;
}

}  // namespace

SweepConfig parse_sweep_config(const json& doc, const fs::path& base_dir) {
  const Reader r(doc, "");
  r.allow({"schema", "sweep"});
  if (r.integer("schema") != 1) fail("/schema", "unsupported schema version (expected 1)");
  const Reader s(r.get("sweep"), "/sweep");
  s.allow({"base", "parameters"});
  const json& base = s.get("base");
  const Reader base_reader(base, "/sweep/base");
  const std::string base_id = base_reader.string("id");
  const auto& params = s.get("parameters");
  if (!params.is_array() || params.empty() || params.size() > 2)
    fail("/sweep/parameters", "expected one or two parameters");
  SweepConfig cfg;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Reader p(params[i], "/sweep/parameters/" + std::to_string(i));
    p.allow({"path", "values", "from", "to", "count"});
    SweepParameter sp;
    sp.path = p.string("path");
    if (p.has("values")) {
      if (p.has("from") || p.has("to") || p.has("count")) fail(p.pointer(), "give values or from/to/count");
      sp.values = p.numbers("values");
    } else {
      const double from = p.number("from"), to = p.number("to");
      const int count = p.integer("count");
      if (count < 0) fail(p.at("count"), "expected a nonnegative count");
      for (int k = 0; k < count; ++k)
        sp.values.push_back(count == 1 ? from : from + (to - from) * k / (count - 1));
    }
    if (sp.values.empty()) fail(p.pointer(), "empty parameter grid");
    cfg.parameters.push_back(std::move(sp));
  }
  const std::size_t n1 = cfg.parameters[0].values.size();
  const std::size_t n2 = cfg.parameters.size() > 1 ? cfg.parameters[1].values.size() : 1;
  const int width = std::max<int>(3, static_cast<int>(std::to_string(n1 * n2).size()));
  for (std::size_t a = 0; a < n1; ++a) {
    for (std::size_t b = 0; b < n2; ++b) {
      json member = base;
      SweepMember m;
      for (std::size_t k = 0; k < cfg.parameters.size(); ++k) {
        const double v = cfg.parameters[k].values[k == 0 ? a : b];
        assign_path(member, cfg.parameters[k].path, v, "/sweep/parameters/" + std::to_string(k) + "/path");
        m.values.push_back(v);
      }
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "-%0*zu", width, a * n2 + b);
      member["id"] = base_id + suffix;
      m.config = parse_case(member, "/sweep/base", base_dir);
      cfg.members.push_back(std::move(m));
    }
  }
  return cfg;
}

CaseOutcome run_case(const CaseConfig& config) {
  CaseOutcome out;
  auto& rep = out.report;
  const Problem& p = config.problem;
  rep.case_id = p.id;
  rep.domain = describe(p.domain);
  rep.dimension = p.dimension;
  rep.curvature = p.space.curvature();
  rep.weight = p.phi.tag();
  rep.frame = std::string(to_string(p.settings.frame));
  const auto wants = [&](Check c) {
    return std::find(config.checks.begin(), config.checks.end(), c) != config.checks.end();
  };
  try {
    CaseAnalysis a(p);
    std::optional<ConjectureResult> conj;
    if (wants(Check::Conjecture)) conj = a.conjectures();
    rep = a.base_report(conj ? p.dimension : p.dimension - 1);
    rep.conjecture = conj;
    if (conj) rep.notes.push_back("equality rigidity is observed, not proven, numerically");
    if (wants(Check::Main) || wants(Check::Sharper)) rep.main = a.main();
    if (wants(Check::Sharper)) rep.sharper = a.sharper();
    if (wants(Check::Monotonicity)) rep.monotonicity = a.monotonicity();
    if (wants(Check::Center)) {
      rep.center = a.trial_center();
      rep.notes.push_back(rep.center->note);
    }
    out.ball = a.ball_solution();
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  rep.finalize();
  return out;
}

std::vector<CaseOutcome> run_cases(const std::vector<CaseConfig>& cases, int jobs, std::ostream* log) {
  std::vector<CaseOutcome> results(cases.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  const auto worker = [&]() {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      const auto t0 = std::chrono::steady_clock::now();
      results[i] = run_case(cases[i]);
      if (log) {
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::lock_guard lock(log_mutex);
        *log << "[" << results[i].report.verdict << "] " << results[i].report.case_id << " ("
             << dt << " s)";
        if (!results[i].report.error.empty()) *log << ": " << results[i].report.error;
        *log << "\n";
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cases.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(results.begin(), results.end(), [](const CaseOutcome& a, const CaseOutcome& b) {
    return a.report.case_id < b.report.case_id;
  });
  return results;
}

ordered_json report_to_json(const InequalityReport& r) {
  ordered_json j;
  j["id"] = r.case_id;
  j["domain"] = r.domain;
  j["dimension"] = r.dimension;
  j["curvature"] = r.curvature;
  j["weight"] = r.weight;
  j["path"] = r.path;
  j["frame"] = r.frame;
  if (r.frame_shift.squaredNorm() > 0) j["frame_shift"] = {r.frame_shift.x(), r.frame_shift.y()};
  j["volume"] = r.volume;
  j["radius"] = r.radius;
  j["ball_mu"] = r.ball_mu;
  j["eigenvalues"] = r.eigenvalues;
  j["eigen_rel_error"] = r.eigen_rel_error;
  j["volume_rel_error"] = r.volume_rel_error;
  if (r.main) {
    const auto& m = *r.main;
    j["main"] = {{"lhs", m.lhs},
                 {"rhs", m.rhs},
                 {"gap", m.gap},
                 {"tol_budget", m.tol_budget},
                 {"equality_ratio", m.equality_ratio},
                 {"corollary_holds", m.corollary_holds},
                 {"passed", m.passed}};
  }
  if (r.sharper) {
    const auto& s = *r.sharper;
    j["sharper"] = {{"r1", s.r1},
                    {"r2", s.r2},
                    {"inside_volume", s.inside_volume},
                    {"sharper_rhs", s.sharper_rhs},
                    {"sharper_gap", s.sharper_gap},
                    {"rhs_tol", s.rhs_tol},
                    {"gap_tol", s.gap_tol},
                    {"rhs_nonnegative", s.rhs_nonnegative},
                    {"passed", s.passed}};
  }
  if (r.conjecture) {
    const auto& c = *r.conjecture;
    j["conjecture"] = {{"lhs", c.lhs},
                       {"rhs", c.rhs},
                       {"margin", c.margin},
                       {"tol", c.tol},
                       {"confirmed_by_refinement", c.confirmed_by_refinement},
                       {"verdict", c.verdict}};
  }
  if (r.monotonicity) {
    const auto& m = *r.monotonicity;
    j["lemma23"] = {{"passed", m.passed},
                    {"grid", m.grid},
                    {"tolerance", m.tolerance},
                    {"worst_ratio_increase", m.worst_ratio_increase},
                    {"min_slope", m.min_slope},
                    {"min_slope_at", m.min_slope_at}};
  }
  if (r.center) {
    const auto& c = *r.center;
    j["center"] = {{"point", {c.center.x(), c.center.y()}},
                   {"field_norm", c.field_norm},
                   {"scale", c.scale},
                   {"iterations", c.iterations},
                   {"converged", c.converged},
                   {"inside_hull", c.inside_hull}};
  }
  j["notes"] = r.notes;
  j["verdict"] = r.verdict;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

void write_run_outputs(const fs::path& out_dir, const std::vector<CaseOutcome>& outcomes) {
  fs::create_directories(out_dir);
  std::string jsonl, csv = "case_id,n,kappa,weight,R,LHS,RHS,gap,sharper_gap,verdict\n";
  for (const auto& o : outcomes) {
    const auto& r = o.report;
    jsonl += report_to_json(r).dump() + "\n";
    double lhs = NAN, rhs = NAN, gap = NAN, sgap = NAN;
    // The conjecture sums take the columns when requested; reports.jsonl keeps both.
    if (r.conjecture) {
      lhs = r.conjecture->lhs;
      rhs = r.conjecture->rhs;
      gap = r.conjecture->margin;
    } else if (r.main) {
      lhs = r.main->lhs;
      rhs = r.main->rhs;
      gap = r.main->gap;
    }
    if (r.sharper) sgap = r.sharper->sharper_gap;
    csv += csv_text(r.case_id) + "," + std::to_string(r.dimension) + "," + std::to_string(r.curvature) + "," +
           csv_text(r.weight) + "," + csv_number(r.error.empty() ? r.radius : NAN) + "," + csv_number(lhs) +
           "," + csv_number(rhs) + "," + csv_number(gap) + "," + csv_number(sgap) + "," + r.verdict + "\n";
    if (o.ball) {
      const auto& sol = *o.ball;
      const SpaceForm space = sol.ball.space;
      std::string prof = "t,T,f_over_S\n";
      for (const auto& s : sol.profile)
        prof += csv_number(s.t) + "," + csv_number(s.value) + "," + csv_number(s.value / s_kappa(s.t, space)) + "\n";
      const double R = sol.outer_radius(), cap = sol.phi.domain_cap();
      const double fR = sol.profile.back().value;
      for (int k = 1; k <= 200 && cap > R; ++k) {
        const double t = R + (cap - R) * k / 200.0;
        prof += csv_number(t) + "," + csv_number(fR) + "," + csv_number(fR / s_kappa(t, space)) + "\n";
      }
      write_text(out_dir / ("profile_" + file_safe(r.case_id) + ".csv"), prof);
    }
  }
  write_text(out_dir / "reports.jsonl", jsonl);
  write_text(out_dir / "summary.csv", csv);
}

int exit_code(const std::vector<CaseOutcome>& outcomes) {
  bool failed = false;
  for (const auto& o : outcomes) {
    if (o.report.verdict == "error") return 1;
    if (o.report.verdict != "pass") failed = true;
  }
  return failed ? 2 : 0;
}

namespace {

json load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("/: config is not valid JSON: ") + e.what());
  }
}

void print_tally(const std::vector<CaseOutcome>& outcomes, std::ostream& log) {
  std::map<std::string, int> tally;
  for (const auto& o : outcomes) ++tally[o.report.verdict];
  log << outcomes.size() << " case(s):";
  for (const auto& [verdict, count] : tally) log << " " << count << " " << verdict;
  log << "\n";
}

std::string trend_of(std::vector<std::pair<double, const InequalityReport*>> points) {
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  bool up = false, down = false;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto m0 = margin_of(*points[i].second), m1 = margin_of(*points[i + 1].second);
    if (!m0 || !m1) return "undetermined";
    const auto tol_of = [](const InequalityReport& r) {
      return r.conjecture ? r.conjecture->tol : r.main ? r.main->tol_budget : 0.0;
    };
    const double tol = std::max(tol_of(*points[i].second), tol_of(*points[i + 1].second));
    if (*m1 - *m0 > tol) up = true;
    if (*m0 - *m1 > tol) down = true;
  }
  if (up && down) return "non-monotone";
  if (up) return "increasing";
  if (down) return "decreasing";
  return "constant";
}

}  // namespace

int run_command(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_run_config(load_config(opts.config), opts.config.parent_path());
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  }
  const auto outcomes = run_cases(cfg.cases, opts.jobs, opts.verbose ? &log : nullptr);
  try {
    write_run_outputs(opts.out_dir, outcomes);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return 1;
  }
  print_tally(outcomes, log);
  return exit_code(outcomes);
}

int sweep_command(const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  SweepConfig cfg;
  try {
    cfg = parse_sweep_config(load_config(opts.config), opts.config.parent_path());
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  }
  std::vector<CaseConfig> cases;
  for (const auto& m : cfg.members) cases.push_back(m.config);
  const auto outcomes = run_cases(cases, opts.jobs, opts.verbose ? &log : nullptr);
  std::map<std::string, const InequalityReport*> by_id;
  for (const auto& o : outcomes) by_id[o.report.case_id] = &o.report;

  std::string csv = "case_id";
  for (const auto& p : cfg.parameters) csv += "," + csv_text(p.path);
  csv += ",gap,sharper_gap,conjecture_margin,verdict\n";
  ordered_json summary;
  summary["schema"] = 1;
  ordered_json paths = ordered_json::array();
  for (const auto& p : cfg.parameters) paths.push_back(p.path);
  summary["parameters"] = paths;
  summary["members"] = cfg.members.size();
  const InequalityReport* best = nullptr;
  const SweepMember* best_member = nullptr;
  int failures = 0, errors = 0;
  std::vector<std::pair<double, const InequalityReport*>> line;
  for (const auto& m : cfg.members) {
    const auto& r = *by_id.at(m.config.problem.id);
    csv += csv_text(r.case_id);
    for (double v : m.values) csv += "," + csv_number(v);
    csv += "," + csv_number(r.main ? r.main->gap : NAN) + "," + csv_number(r.sharper ? r.sharper->sharper_gap : NAN) +
           "," + csv_number(r.conjecture ? r.conjecture->margin : NAN) + "," + r.verdict + "\n";
    if (r.verdict == "fail") ++failures;
    if (r.verdict == "error") ++errors;
    const auto margin = margin_of(r);
    if (margin && (!best || *margin < *margin_of(*best))) {
      best = &r;
      best_member = &m;
    }
    line.emplace_back(m.values[0], &r);
  }
  summary["failures"] = failures;
  summary["errors"] = errors;
  summary["margin_kind"] = !outcomes.empty() && outcomes.front().report.conjecture ? "conjecture" : "gap";
  if (best) {
    summary["min_margin"] = {{"case_id", best->case_id},
                             {"values", best_member->values},
                             {"margin", *margin_of(*best)}};
  } else {
    summary["min_margin"] = nullptr;
  }
  if (cfg.parameters.size() == 1)
    summary["trend"] = trend_of(line);
  else
    summary["trend"] = nullptr;
  try {
    write_run_outputs(opts.out_dir, outcomes);
    write_text(opts.out_dir / "sweep.csv", csv);
    write_text(opts.out_dir / "sweep_summary.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return 1;
  }
  print_tally(outcomes, log);
  if (best) log << "minimal margin " << *margin_of(*best) << " at " << best->case_id << "\n";
  return exit_code(outcomes);
}

}  // namespace wlab::cli
