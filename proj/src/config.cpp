#include "dirac/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace dirac {

using nlohmann::json;

namespace {

const std::vector<std::pair<Task, const char*>> kTaskNames{
    {Task::CheckConditions, "check-conditions"},
    {Task::Spectrum, "spectrum"},
    {Task::Eigenfunctions, "eigenfunctions"},
    {Task::ValidateAsymptotics, "validate-asymptotics"},
    {Task::RieszReport, "riesz-report"},
};

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ConfigError(source_ + ": " + (path.empty() ? "/" : path) + ": " + what, path.empty() ? "/" : path);
  }

  void only(const json& obj, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
        fail(child(path, key), "unknown field");
    }
  }

  const json& require(const json& obj, const std::string& path, const char* key) const {
    if (!obj.contains(key)) fail(child(path, key), "missing field");
    return obj.at(key);
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
  }

  int integer(const json& j, const std::string& path) const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
  }

  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  /// A number or [re, im].
  Complex complex(const json& j, const std::string& path) const {
    if (j.is_number()) return {number(j, path), 0.0};
    if (j.is_array() && j.size() == 2) return {number(j[0], child(path, 0)), number(j[1], child(path, 1))};
    fail(path, "expected a number or [re, im]");
  }

  ComplexPolynomial polynomial(const json& j, const std::string& path) const {
    if (j.is_number()) return ComplexPolynomial{complex(j, path)};
    if (!j.is_array()) fail(path, "expected a list of coefficients in ascending order");
    std::vector<Complex> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(complex(j[i], child(path, i)));
    return ComplexPolynomial(c);
  }

  ScalarFunction function(const json& j, const std::string& path) const {
    if (j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number())) return ScalarFunction::constant(complex(j, path));
    if (!j.is_array()) fail(path, "expected a list of terms");
    std::vector<Term> terms;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = child(path, i);
      only(j[i], p, {"kind", "coefficient", "parameter"});
      Term t;
      const std::string kind = string(require(j[i], p, "kind"), child(p, "kind"));
      if (kind == "monomial") t.kind = Term::Kind::Monomial;
      else if (kind == "cos") t.kind = Term::Kind::Cos;
      else if (kind == "sin") t.kind = Term::Kind::Sin;
      else if (kind == "step") t.kind = Term::Kind::Step;
      else fail(child(p, "kind"), "unknown term kind '" + kind + "' (monomial, cos, sin, step)");
      t.coefficient = complex(require(j[i], p, "coefficient"), child(p, "coefficient"));
      if (j[i].contains("parameter")) t.parameter = number(j[i]["parameter"], child(p, "parameter"));
      terms.push_back(t);
    }
    try {
      return ScalarFunction(std::move(terms));
    } catch (const SpecError& e) {
      fail(path, e.what());
    }
  }

 private:
  std::string source_;
};

int line_of(const std::string& text, std::size_t byte) {
  const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
  return 1 + static_cast<int>(std::count(text.begin(), end, '\n'));
}

SystemSpec read_system(const Reader& r, const json& j, const std::string& path) {
  r.only(j, path, {"a", "b", "q1", "q2", "kernel"});
  SystemSpec s;
  s.a = r.number(r.require(j, path, "a"), child(path, "a"));
  s.b = r.number(r.require(j, path, "b"), child(path, "b"));
  if (j.contains("q1")) s.q1 = r.function(j["q1"], child(path, "q1"));
  if (j.contains("q2")) s.q2 = r.function(j["q2"], child(path, "q2"));
  if (j.contains("kernel")) {
    const json& k = j["kernel"];
    const std::string kp = child(path, "kernel");
    if (!k.is_array()) r.fail(kp, "expected a list of separable terms");
    for (std::size_t i = 0; i < k.size(); ++i) {
      const std::string p = child(kp, i);
      r.only(k[i], p, {"row", "col", "f", "g"});
      const int row = r.integer(r.require(k[i], p, "row"), child(p, "row"));
      const int col = r.integer(r.require(k[i], p, "col"), child(p, "col"));
      if (row < 1 || row > 2) r.fail(child(p, "row"), "must be 1 or 2");
      if (col < 1 || col > 2) r.fail(child(p, "col"), "must be 1 or 2");
      s.kernel.add(row - 1, col - 1, r.function(r.require(k[i], p, "f"), child(p, "f")),
                   r.function(r.require(k[i], p, "g"), child(p, "g")));
    }
  }
  try {
    validate_spec(s);
  } catch (const SpecError& e) {
    r.fail(path, e.what());
  }
  return s;
}

template <std::size_t C>
std::array<std::array<ComplexPolynomial, C>, 2> read_rows(const Reader& r, const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) r.fail(path, "expected two rows");
  std::array<std::array<ComplexPolynomial, C>, 2> rows;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string p = child(path, i);
    if (!j[i].is_array() || j[i].size() != C) r.fail(p, "expected " + std::to_string(C) + " polynomials");
    for (std::size_t c = 0; c < C; ++c) rows[i][c] = r.polynomial(j[i][c], child(p, c));
  }
  return rows;
}

BoundarySpec read_boundary(const Reader& r, const json& j, const std::string& path) {
  if (!j.is_object()) r.fail(path, "expected an object");
  const std::string type = r.string(r.require(j, path, "type"), child(path, "type"));
  if (type == "linear") {
    r.only(j, path, {"type", "rows"});
    LinearBC bc;
    bc.rows = read_rows<4>(r, r.require(j, path, "rows"), child(path, "rows"));
    return bc;
  }
  if (type == "quadratic") {
    r.only(j, path, {"type", "rows"});
    QuadraticBC bc;
    bc.rows = read_rows<10>(r, r.require(j, path, "rows"), child(path, "rows"));
    return bc;
  }
  if (type == "separated") {
    r.only(j, path, {"type", "p11", "p12", "p21", "p22"});
    auto p = [&](const char* key) { return r.polynomial(r.require(j, path, key), child(path, key)); };
    try {
      return SeparatedBC::make(p("p11"), p("p12"), p("p21"), p("p22"));
    } catch (const ConfigError&) {
      throw;
    } catch (const SpecError& e) {
      r.fail(path, e.what());
    }
  }
  r.fail(child(path, "type"), "unknown boundary type '" + type + "' (linear, quadratic, separated)");
}

GridConfig read_grid(const Reader& r, const json& j, const std::string& path) {
  r.only(j, path, {"n_points", "quad_rule", "newton_tol", "contour_samples"});
  GridConfig g;
  if (j.contains("n_points")) g.n_points = r.integer(j["n_points"], child(path, "n_points"));
  if (j.contains("quad_rule")) {
    const std::string q = r.string(j["quad_rule"], child(path, "quad_rule"));
    if (q == "simpson") g.quad_rule = QuadRule::Simpson;
    else if (q == "trapezoid") g.quad_rule = QuadRule::Trapezoid;
    else r.fail(child(path, "quad_rule"), "expected 'simpson' or 'trapezoid'");
  }
  if (j.contains("newton_tol")) g.newton_tol = r.number(j["newton_tol"], child(path, "newton_tol"));
  if (j.contains("contour_samples"))
    g.contour_samples = r.integer(j["contour_samples"], child(path, "contour_samples"));
  try {
    validate_grid(g);
  } catch (const SpecError& e) {
    r.fail(path, e.what());
  }
  return g;
}

}  // namespace

std::string task_name(Task t) {
  for (const auto& [task, name] : kTaskNames)
    if (task == t) return name;
  return "unknown";
}

std::optional<Task> parse_task(const std::string& name) {
  for (const auto& [task, n] : kTaskNames)
    if (name == n) return task;
  return std::nullopt;
}

ConfigError::ConfigError(const std::string& message, std::string field, int line)
    : SpecError(message), field_(std::move(field)), line_(line) {}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of(text, e.byte);
    throw ConfigError(source + ":" + std::to_string(line) + ": syntax error: " + e.what(), "", line);
  }

  const Reader r(source);
  r.only(doc, "", {"version", "system", "boundary", "grid", "tasks", "output_dir", "spectrum", "asymptotics", "riesz"});
  if (doc.contains("version") && r.integer(doc["version"], "/version") != kConfigVersion)
    r.fail("/version", "unsupported config version (expected " + std::to_string(kConfigVersion) + ")");

  RunConfig cfg;
  cfg.system = read_system(r, r.require(doc, "", "system"), "/system");
  cfg.boundary = read_boundary(r, r.require(doc, "", "boundary"), "/boundary");
  if (doc.contains("grid")) cfg.grid = read_grid(r, doc["grid"], "/grid");
  if (doc.contains("output_dir")) cfg.output_dir = r.string(doc["output_dir"], "/output_dir");

  const json& tasks = r.require(doc, "", "tasks");
  if (!tasks.is_array()) r.fail("/tasks", "expected a list of task names");
  std::set<Task> seen;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string name = r.string(tasks[i], child("/tasks", i));
    const auto t = parse_task(name);
    if (!t) r.fail(child("/tasks", i), "unknown task '" + name + "'");
    if (seen.insert(*t).second) cfg.tasks.push_back(*t);
  }

  if (doc.contains("spectrum")) {
    const json& s = doc["spectrum"];
    r.only(s, "/spectrum", {"n_min", "n_max", "rect", "im_band"});
    if (s.contains("n_min")) cfg.spectrum.n_min = r.integer(s["n_min"], "/spectrum/n_min");
    if (s.contains("n_max")) cfg.spectrum.n_max = r.integer(s["n_max"], "/spectrum/n_max");
    if (cfg.spectrum.n_min > cfg.spectrum.n_max) r.fail("/spectrum", "n_min exceeds n_max");
    if (s.contains("rect")) {
      const json& q = s["rect"];
      if (!q.is_array() || q.size() != 4) r.fail("/spectrum/rect", "expected [re_min, re_max, im_min, im_max]");
      Rect rect{r.number(q[0], "/spectrum/rect/0"), r.number(q[1], "/spectrum/rect/1"),
                r.number(q[2], "/spectrum/rect/2"), r.number(q[3], "/spectrum/rect/3")};
      if (!(rect.width() > 0.0) || !(rect.height() > 0.0)) r.fail("/spectrum/rect", "empty rectangle");
      cfg.spectrum.rect = rect;
    }
    if (s.contains("im_band")) {
      cfg.spectrum.im_band = r.number(s["im_band"], "/spectrum/im_band");
      if (!(*cfg.spectrum.im_band > 0.0)) r.fail("/spectrum/im_band", "must be positive");
    }
  }
  if (doc.contains("asymptotics")) {
    const json& a = doc["asymptotics"];
    r.only(a, "/asymptotics", {"n_min", "n_max"});
    if (a.contains("n_min")) cfg.asymptotics_n_min = r.integer(a["n_min"], "/asymptotics/n_min");
    if (a.contains("n_max")) cfg.asymptotics_n_max = r.integer(a["n_max"], "/asymptotics/n_max");
    if (cfg.asymptotics_n_min < 1 || cfg.asymptotics_n_min > cfg.asymptotics_n_max)
      r.fail("/asymptotics", "need 1 <= n_min <= n_max");
  }
  if (doc.contains("riesz")) {
    const json& z = doc["riesz"];
    r.only(z, "/riesz", {"K", "exclusion"});
    if (z.contains("K")) {
      if (!z["K"].is_array() || z["K"].empty()) r.fail("/riesz/K", "expected a non-empty list of integers");
      cfg.riesz_K.clear();
      for (std::size_t i = 0; i < z["K"].size(); ++i) {
        const int k = r.integer(z["K"][i], child("/riesz/K", i));
        if (k < 0) r.fail(child("/riesz/K", i), "must be non-negative");
        cfg.riesz_K.push_back(k);
      }
    }
    if (z.contains("exclusion")) {
      cfg.exclusion_size = r.integer(z["exclusion"], "/riesz/exclusion");
      if (*cfg.exclusion_size < 0) r.fail("/riesz/exclusion", "must be non-negative");
    }
  }

  const bool separated = std::holds_alternative<SeparatedBC>(cfg.boundary);
  const bool needs_spectrum = std::any_of(cfg.tasks.begin(), cfg.tasks.end(), [](Task t) {
    return t == Task::Spectrum || t == Task::Eigenfunctions;
  });
  if (needs_spectrum && !separated && !cfg.spectrum.rect)
    r.fail("/spectrum/rect", "required for linear and quadratic conditions");
  for (Task t : cfg.tasks)
    if ((t == Task::ValidateAsymptotics || t == Task::RieszReport) && !separated)
      r.fail("/tasks", "task '" + task_name(t) + "' needs separated conditions");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path, "");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace dirac
