#include "dirac/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

namespace dirac {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json degree_json(Degree d) { return d.is_finite() ? json(d.value()) : json(nullptr); }

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_value(std::ostream& out, const json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' '), close(static_cast<std::size_t>(indent), ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << json(it.key()).dump() << ": ";
        write_value(out, it.value(), indent + 2);
      }
      out << '\n' << close << '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      const bool flat = std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) {
        out << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ", ";
          write_value(out, v[i], indent);
        }
        out << ']';
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        write_value(out, v[i], indent + 2);
      }
      out << '\n' << close << ']';
      return;
    }
    case json::value_t::number_float:
      out << number(v.get<double>());
      return;
    default:
      out << v.dump();
  }
}

json gram_json(const std::vector<std::pair<int, GramReport>>& table) {
  json out = json::array();
  for (const auto& [K, g] : table)
    out.push_back({{"K", K},
                   {"size", g.size},
                   {"condition", g.condition},
                   {"min_eigenvalue", g.min_eigenvalue},
                   {"max_eigenvalue", g.max_eigenvalue},
                   {"failed", g.failed}});
  return out;
}

std::string family_of(const BoundarySpec& bc) {
  if (std::holds_alternative<LinearBC>(bc)) return "linear";
  if (std::holds_alternative<QuadraticBC>(bc)) return "quadratic";
  return "separated";
}

bool wants(const RunConfig& cfg, Task t) { return std::find(cfg.tasks.begin(), cfg.tasks.end(), t) != cfg.tasks.end(); }

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::ofstream open(const fs::path& rel) {
    const fs::path p = dir_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw SpecError("cannot write " + p.string());
    files.push_back(p.string());
    return out;
  }
  void json_file(const fs::path& rel, const json& v) {
    auto out = open(rel);
    write_json(out, v);
  }
  void text_file(const fs::path& rel, const std::string& text) { open(rel) << text; }

  std::vector<std::string> files;

 private:
  fs::path dir_;
};

std::vector<std::pair<int, GramReport>> gram_table(const std::map<int, Samples>& functions, const std::vector<int>& Ks,
                                                   const std::set<int>* removed = nullptr) {
  std::vector<std::pair<int, GramReport>> out;
  for (int K : Ks) {
    std::vector<Samples> w;
    int present = 0;
    for (const auto& [n, f] : functions) {
      if (std::abs(n) > K) continue;
      ++present;
      if (!removed || !removed->count(n)) w.push_back(f);
    }
    if (present != 2 * K + 1 || w.empty()) {
      GramReport g;
      g.failed = true;
      g.condition = std::numeric_limits<double>::infinity();
      out.emplace_back(K, g);
      continue;
    }
    out.emplace_back(K, gram_condition(w));
  }
  return out;
}

RieszDiagnostics riesz_diagnostics(const CharContext& ctx, const RunConfig& cfg, const SpectrumResult& spectrum) {
  const auto& sbc = std::get<SeparatedBC>(ctx.bc());
  const int kmax = std::max(cfg.asymptotics_n_max, *std::max_element(cfg.riesz_K.begin(), cfg.riesz_K.end()));
  RieszDiagnostics d;

  std::map<int, std::vector<SpectralPoint>> by_strip;
  for (const SpectralPoint& p : spectrum.points)
    if (p.strip_index && std::abs(*p.strip_index) <= kmax) by_strip[*p.strip_index].push_back(p);
  std::vector<SpectralPoint> usable;
  for (int n = -kmax; n <= kmax; ++n) {
    auto it = by_strip.find(n);
    if (it == by_strip.end() || it->second.size() != 1 || it->second.front().multiplicity != 1) {
      d.skipped_strips.push_back(n);
      continue;
    }
    usable.push_back(it->second.front());
  }
  const RieszSystem sys = assemble_riesz_system(ctx, usable);
  d.tail = tail_sum(sys.transformed, sys.reference);
  d.gram = gram_table(sys.eigenfunctions, cfg.riesz_K);
  d.completeness = completeness_residual(sys.eigenfunctions, default_test_set(ctx.grid().n_points), cfg.riesz_K);

  const int n_excl = cfg.exclusion_size.value_or(sbc.n0() + sbc.n1());
  d.exclusion_points = usable;
  d.exclusion = select_exclusion(usable, n_excl, ExclusionStrategy::LowestModulus);
  std::set<int> removed;
  for (const auto& m : d.exclusion.removed()) removed.insert(*usable[m.point].strip_index);
  d.gram_excluded = gram_table(sys.eigenfunctions, cfg.riesz_K, &removed);
  return d;
}

}  // namespace

void write_json(std::ostream& out, const json& value) {
  write_value(out, value, 0);
  out << '\n';
}

json to_json(const ConditionReport& r, const std::string& family) {
  json degrees = json::object();
  for (const auto& [name, d] : r.degrees) degrees[name] = degree_json(d);
  return {{"family", family},
          {"satisfied", r.satisfied},
          {"rank_ok", r.rank_ok},
          {"rank_witness", r.rank_witness ? complex_json(*r.rank_witness) : json(nullptr)},
          {"removals", r.removals},
          {"max_degree", degree_json(r.max_degree)},
          {"degrees", degrees},
          {"message", r.message}};
}

json to_json(const AsymptoticsReport& r, const std::vector<GrowthReport>& growth) {
  json counts = json::object();
  for (const auto& [n, c] : r.strip_counts) counts[std::to_string(n)] = c;
  json g = json::array();
  for (const GrowthReport& rep : growth) {
    json lambdas = json::array(), im = json::array(), ab = json::array();
    for (const GrowthSample& s : rep.samples) {
      lambdas.push_back(complex_json(s.lambda));
      im.push_back(s.im_scaled);
      ab.push_back(s.abs_scaled);
    }
    g.push_back({{"alpha", rep.alpha},
                 {"smooth", rep.smooth},
                 {"lambda", lambdas},
                 {"im_scaled", im},
                 {"abs_scaled", ab},
                 {"max_im_ratio", rep.max_im_ratio},
                 {"max_abs_ratio", rep.max_abs_ratio}});
  }
  return {{"n", r.n},
          {"e", r.e},
          {"max_e", r.max_e},
          {"min_e", r.min_e},
          {"non_increasing_trend", r.non_increasing_trend},
          {"strip_counts", counts},
          {"anomalous_strips", r.anomalous_strips},
          {"growth", g}};
}

json to_json(const RieszDiagnostics& r) {
  json completeness = json::array();
  for (const CompletenessRow& row : r.completeness)
    completeness.push_back({{"K", row.K}, {"residual", row.residual}, {"relative", row.relative}});
  json removed = json::array();
  for (const auto& m : r.exclusion.removed()) {
    const SpectralPoint& p = r.exclusion_points[m.point];
    removed.push_back({{"lambda", complex_json(p.lambda)}, {"n", *p.strip_index}, {"order", m.order}});
  }
  return {{"tail",
           {{"n", r.tail.n},
            {"term", r.tail.term},
            {"scaled", r.tail.scaled},
            {"K", r.tail.K},
            {"partial_sum", r.tail.partial_sum}}},
          {"gram", gram_json(r.gram)},
          {"completeness", completeness},
          {"exclusion", {{"size", r.exclusion.target_size()}, {"removed", removed}, {"gram", gram_json(r.gram_excluded)}}},
          {"skipped_strips", r.skipped_strips}};
}

std::string emit_plotdata(const RunReport& report, const std::string& kind) {
  std::ostringstream out;
  auto fmt = [](double v) { return number(v); };
  if (kind == "spectrum") {
    if (!report.spectrum) throw SpecError("no spectrum in report");
    out << "n,re,im\n";
    for (const SpectralPoint& p : report.spectrum->points)
      out << (p.strip_index ? std::to_string(*p.strip_index) : "") << ',' << fmt(p.lambda.real()) << ','
          << fmt(p.lambda.imag()) << '\n';
  } else if (kind == "asymptotics") {
    if (!report.asymptotics) throw SpecError("no asymptotics in report");
    out << "n,e_n\n";
    for (std::size_t i = 0; i < report.asymptotics->n.size(); ++i)
      out << report.asymptotics->n[i] << ',' << fmt(report.asymptotics->e[i]) << '\n';
  } else if (kind == "riesz-tail") {
    if (!report.riesz) throw SpecError("no Riesz diagnostics in report");
    out << "K,S_K\n";
    for (std::size_t i = 0; i < report.riesz->tail.K.size(); ++i)
      out << report.riesz->tail.K[i] << ',' << fmt(report.riesz->tail.partial_sum[i]) << '\n';
  } else if (kind == "gram") {
    if (!report.riesz) throw SpecError("no Riesz diagnostics in report");
    out << "K,condition\n";
    for (const auto& [K, g] : report.riesz->gram) out << K << ',' << fmt(g.condition) << '\n';
  } else {
    throw SpecError("unknown plot kind '" + kind + "' (spectrum, asymptotics, riesz-tail, gram)");
  }
  return out.str();
}

RunResult run(const RunConfig& cfg) {
  RunResult result;
  RunReport& rep = result.report;
  rep.family = family_of(cfg.boundary);
  Writer out(cfg.output_dir);
  const CharContext ctx(cfg.system, cfg.boundary, cfg.grid);
  const auto* sbc = std::get_if<SeparatedBC>(&cfg.boundary);

  if (wants(cfg, Task::CheckConditions)) {
    ConditionReport c;
    if (const auto* q = std::get_if<QuadraticBC>(&cfg.boundary)) c = check_theorem2_conditions(*q);
    else if (const auto* l = std::get_if<LinearBC>(&cfg.boundary)) c = check_theorem1_conditions(*l);
    else c = check_theorem1_conditions(sbc->to_linear());
    out.json_file("conditions.json", to_json(c, rep.family));
    if (!c.satisfied) result.exit_code = 2;
    rep.conditions = c;
  }

  const bool need_spectrum = wants(cfg, Task::Spectrum) || wants(cfg, Task::Eigenfunctions) ||
                             wants(cfg, Task::ValidateAsymptotics) || wants(cfg, Task::RieszReport);
  if (need_spectrum) {
    LocateOptions opt;
    opt.im_band = cfg.spectrum.im_band;
    if (cfg.spectrum.rect) {
      rep.spectrum = locate_spectrum(ctx, *cfg.spectrum.rect, opt);
    } else {
      int reach = 0;
      if (wants(cfg, Task::ValidateAsymptotics)) reach = std::max(reach, cfg.asymptotics_n_max);
      if (wants(cfg, Task::RieszReport))
        reach = std::max({reach, cfg.asymptotics_n_max, *std::max_element(cfg.riesz_K.begin(), cfg.riesz_K.end())});
      rep.spectrum = locate_spectrum(ctx, std::min(cfg.spectrum.n_min, -reach), std::max(cfg.spectrum.n_max, reach), opt);
    }
    for (const LocateFailure& f : rep.spectrum->failures)
      std::cerr << "warning: [" << f.rect.re_min << ", " << f.rect.re_max << "] x [" << f.rect.im_min << ", "
                << f.rect.im_max << "]: " << f.reason << '\n';
    auto csv = out.open("spectrum.csv");
    write_spectrum_csv(csv, rep.spectrum->points);
    out.text_file("plot_spectrum.csv", emit_plotdata(rep, "spectrum"));
  }

  if (wants(cfg, Task::Eigenfunctions)) {
    auto index = out.open("eigenfunctions/index.csv");
    index << "file,re,im,multiplicity,branch,order,bc_residual,chain_residual\n";
    const auto& points = rep.spectrum->points;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto rfs = build_root_functions(ctx, points[i]);
      std::vector<Samples> chain_of[2];
      for (int br = 1; br <= 2; ++br) chain_of[br - 1] = omega_chain(ctx, points[i].lambda, br, points[i].multiplicity - 1);
      for (const RootFunction& rf : rfs) {
        const RootFunction unit = normalize(rf);
        char name[64];
        std::snprintf(name, sizeof name, "ev%03zu_b%d_k%d.csv", i, rf.branch, rf.order);
        auto f = out.open(fs::path("eigenfunctions") / name);
        write_root_function_csv(f, unit);
        const auto& chain = chain_of[rf.branch - 1];
        const auto bc = bc_residual_chain(cfg.boundary, chain, points[i].lambda, rf.order);
        const Samples prev = rf.order > 0 ? chain[static_cast<std::size_t>(rf.order - 1)] : Samples();
        const double cr = chain_residual(cfg.system, points[i].lambda, rf.samples, prev) / rf.scale;
        index << name << ',' << number(points[i].lambda.real()) << ',' << number(points[i].lambda.imag()) << ','
              << points[i].multiplicity << ',' << rf.branch << ',' << rf.order << ','
              << number(std::max(std::abs(bc.first), std::abs(bc.second)) / rf.scale) << ',' << number(cr) << '\n';
        rep.root_functions.push_back(unit);
      }
    }
  }

  if (wants(cfg, Task::ValidateAsymptotics)) {
    rep.asymptotics = verify_asymptotics(rep.spectrum->points, *sbc, cfg.system, cfg.asymptotics_n_min,
                                         cfg.asymptotics_n_max);
    std::vector<Complex> up, down;
    for (int k = 0; k <= 3; ++k) {
      up.emplace_back(0.0, 10.0 * (1 << k));
      down.emplace_back(0.0, -10.0 * (1 << k));
    }
    for (double alpha : {0.0, 0.5}) {
      rep.growth.push_back(validate_growth(cfg.system, cfg.grid, up, alpha));
      rep.growth.push_back(validate_growth(cfg.system, cfg.grid, down, alpha));
    }
    json j = to_json(*rep.asymptotics, rep.growth);
    const LeadingRatio lr = leading_ratio(*sbc);
    j["leading_ratio"] = {{"derived", complex_json(lr.derived)}, {"stated", complex_json(lr.stated)}};
    out.json_file("asymptotics.json", j);
    out.text_file("plot_asymptotics.csv", emit_plotdata(rep, "asymptotics"));
  }

  if (wants(cfg, Task::RieszReport)) {
    rep.riesz = riesz_diagnostics(ctx, cfg, *rep.spectrum);
    out.json_file("riesz.json", to_json(*rep.riesz));
    out.text_file("plot_riesz_tail.csv", emit_plotdata(rep, "riesz-tail"));
    out.text_file("plot_gram.csv", emit_plotdata(rep, "gram"));
  }

  result.files = std::move(out.files);
  return result;
}

RunResult run(const std::string& config_path) { return run(load_config(config_path)); }

}  // namespace dirac
