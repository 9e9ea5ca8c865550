#include "dirac/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "dirac/parallel.hpp"

namespace dirac {

namespace {

constexpr int kMaxBisection = 40;
// A child contour passing this close to zero (relative to the term scale)
// means the parent already isolates a zero at the noise level.
constexpr double kNoiseStop = 1e-10;
// Off-centre first so that symmetric regions do not put a zero on the cut:
// an even-order zero on a segment leaves no trace in the argument.
constexpr double kSplitFractions[] = {0.4927, 0.4381, 0.5573, 0.3719, 0.6241, 0.3047, 0.6853};

struct OnContour {};

class ContourWalker {
 public:
  ContourWalker(const ChiFunction& chi, double floor) : chi_(chi), floor_(floor) {}

  CharValue eval(Complex z) {
    const CharValue v = chi_(z);
    ++evaluations;
    if (!is_finite(v.value)) throw NumericalError("characteristic function is not finite on the contour");
    const double ratio = v.scale > 0.0 ? std::abs(v.value) / v.scale : std::abs(v.value);
    min_ratio = std::min(min_ratio, ratio);
    if (ratio < floor_) throw OnContour{};
    return v;
  }

  // Every accepted segment is checked through its midpoint: a zero passing
  // close to a long segment can wrap the argument by a full turn between
  // two samples, which the endpoint difference alone cannot see.
  double segment(Complex z0, Complex v0, Complex z1, Complex v1, int depth) {
    const Complex zm = 0.5 * (z0 + z1);
    const Complex vm = eval(zm).value;
    const double left = std::arg(vm / v0), right = std::arg(v1 / vm);
    const double whole = std::arg(v1 / v0);
    if (std::abs(left) <= 0.5 * kPi && std::abs(right) <= 0.5 * kPi && std::abs(left + right - whole) < 1e-6)
      return whole;
    if (depth >= kMaxBisection) throw OnContour{};
    return segment(z0, v0, zm, vm, depth + 1) + segment(zm, vm, z1, v1, depth + 1);
  }

  int winding(const Rect& r, int samples) {
    const std::array<Complex, 5> corners = {Complex(r.re_min, r.im_min), Complex(r.re_max, r.im_min),
                                            Complex(r.re_max, r.im_max), Complex(r.re_min, r.im_max),
                                            Complex(r.re_min, r.im_min)};
    const double perimeter = 2.0 * (r.width() + r.height());
    double total = 0.0;
    Complex z0 = corners[0];
    Complex v0 = eval(z0).value;
    for (int e = 0; e < 4; ++e) {
      const Complex a = corners[static_cast<std::size_t>(e)], b = corners[static_cast<std::size_t>(e) + 1];
      const int n = std::max(4, static_cast<int>(std::lround(samples * std::abs(b - a) / perimeter)));
      for (int i = 1; i <= n; ++i) {
        const Complex z1 = (i == n) ? b : a + (b - a) * (static_cast<double>(i) / n);
        const Complex v1 = eval(z1).value;
        total += segment(z0, v0, z1, v1, 0);
        z0 = z1;
        v0 = v1;
      }
    }
    const double turns = total / (2.0 * kPi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 0.25) throw OnContour{};
    return static_cast<int>(rounded);
  }

  int evaluations = 0;
  double min_ratio = std::numeric_limits<double>::infinity();

 private:
  const ChiFunction& chi_;
  double floor_;
};

struct Tagged {
  SpectralPoint point;
  int job;
};

class Locator {
 public:
  Locator(const CharContext& ctx, const LocateOptions& options, int job)
      : ctx_(ctx), options_(options), job_(job), chi_([&ctx](Complex z) { return ctx.evaluate(z); }) {
    count_options_.samples = ctx.grid().contour_samples;
    count_options_.max_retries = 0;
  }

  void search(const Rect& rect, int m, std::optional<Complex> hint) {
    if (m <= 0) return;
    if (m == 1) {
      const Complex start = hint && rect.contains(*hint) ? *hint : rect.center();
      if (auto z = refine_simple(ctx_, start, options_.max_newton); z && rect.contains(*z, margin(rect, *z))) {
        add(*z, 1);
        return;
      }
      if (rect.diameter() < options_.min_diameter) {
        fail(rect, "Newton did not converge inside an isolating rectangle");
        add(rect.center(), 1);
        return;
      }
    } else if (rect.diameter() < options_.min_diameter) {
      cluster(rect, m);
      return;
    }
    split(rect, m);
  }

  void fail(const Rect& rect, std::string reason) { failures.push_back({rect, std::move(reason)}); }

  std::vector<Tagged> points;
  std::vector<LocateFailure> failures;

 private:
  static double margin(const Rect& rect, Complex z) { return 1e-9 * std::max(1.0, std::abs(z)) + 1e-3 * rect.diameter(); }

  void add(Complex z, int m) {
    SpectralPoint p;
    p.lambda = z;
    p.multiplicity = m;
    points.push_back({p, job_});
  }

  void cluster(const Rect& rect, int m) {
    if (m <= 4) {
      if (auto z = refine_multiple(ctx_, rect.center(), m, options_.max_newton);
          z && rect.contains(*z, margin(rect, *z))) {
        add(*z, m);
        return;
      }
    }
    fail(rect, "cluster of " + std::to_string(m) + " zeros not refined");
    add(rect.center(), m);
  }

  void split(const Rect& rect, int m) {
    const bool vertical = rect.width() >= rect.height();
    for (double f : kSplitFractions) {
      Rect a = rect, b = rect;
      if (vertical) a.re_max = b.re_min = rect.re_min + f * rect.width();
      else a.im_max = b.im_min = rect.im_min + f * rect.height();
      CountResult ca, cb;
      try {
        ca = count_zeros_rect(chi_, a, count_options_);
        cb = count_zeros_rect(chi_, b, count_options_);
      } catch (const NumericalError&) {
        continue;
      }
      if (ca.winding + cb.winding != m || ca.winding < 0 || cb.winding < 0) continue;
      if (m >= 2 && std::min(ca.min_ratio, cb.min_ratio) < kNoiseStop) {
        cluster(rect, m);
        return;
      }
      search(a, ca.winding, std::nullopt);
      search(b, cb.winding, std::nullopt);
      return;
    }
    fail(rect, "no admissible split");
    cluster(rect, m);
  }

  const CharContext& ctx_;
  const LocateOptions& options_;
  int job_;
  ChiFunction chi_;
  CountOptions count_options_;
};

void finish(const CharContext& ctx, std::vector<Tagged> tagged, const LocateOptions& options, SpectrumResult& out) {
  std::sort(tagged.begin(), tagged.end(), [](const Tagged& x, const Tagged& y) {
    if (x.point.lambda.real() != y.point.lambda.real()) return x.point.lambda.real() < y.point.lambda.real();
    return x.point.lambda.imag() < y.point.lambda.imag();
  });
  std::vector<Tagged> merged;
  for (const Tagged& t : tagged) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Tagged& m) {
      return std::abs(m.point.lambda - t.point.lambda) <= options.merge_tol * std::max(1.0, std::abs(t.point.lambda));
    });
    if (it == merged.end()) {
      merged.push_back(t);
    } else if (it->job == t.job) {
      it->point.multiplicity += t.point.multiplicity;
    } else {
      // The same zero reached from two overlapping (dilated) regions.
      it->point.multiplicity = std::max(it->point.multiplicity, t.point.multiplicity);
    }
  }

  const auto* sbc = std::get_if<SeparatedBC>(&ctx.bc());
  for (Tagged& t : merged) {
    SpectralPoint& p = t.point;
    p.residual = std::abs(ctx.evaluate(p.lambda).value);
    if (sbc) {
      p.strip_index = strip_of(*sbc, ctx.spec(), p.lambda);
      p.model_root = model_roots(*sbc, ctx.spec(), *p.strip_index, *p.strip_index).front();
    }
    out.points.push_back(p);
  }
  std::sort(out.points.begin(), out.points.end(), [](const SpectralPoint& x, const SpectralPoint& y) {
    if (x.lambda.real() != y.lambda.real()) return x.lambda.real() < y.lambda.real();
    return x.lambda.imag() < y.lambda.imag();
  });
}

Complex log_ratio(const SeparatedBC& sbc) { return std::log(leading_ratio(sbc).derived); }

Complex evaluate_plain(const CharContext& ctx, Complex z) { return ctx.evaluate(z).value; }

}  // namespace

Rect Rect::dilated(double fraction) const {
  const double dw = fraction * width(), dh = fraction * height();
  return {re_min - dw, re_max + dw, im_min - dh, im_max + dh};
}

double default_im_band(const SeparatedBC& sbc, const SystemSpec& spec) {
  return 5.0 + std::abs(log_ratio(sbc)) / (spec.b - spec.a);
}

StripSpec strip(const SeparatedBC& sbc, const SystemSpec& spec, int n, std::optional<double> im_band) {
  const double width = spec.b - spec.a;
  const double shift = log_ratio(sbc).imag();
  StripSpec s;
  s.n = n;
  s.re_min = ((2 * n - 1) * kPi - shift) / width;
  s.re_max = ((2 * n + 1) * kPi - shift) / width;
  s.im_band = im_band.value_or(default_im_band(sbc, spec));
  return s;
}

int strip_of(const SeparatedBC& sbc, const SystemSpec& spec, Complex lambda) {
  const double t = ((spec.b - spec.a) * lambda.real() + log_ratio(sbc).imag()) / (2.0 * kPi);
  return static_cast<int>(std::lround(t));
}

std::vector<Complex> model_roots(const SeparatedBC& sbc, const SystemSpec& spec, int n_min, int n_max) {
  const Complex ln_r = log_ratio(sbc);
  if (!is_finite(ln_r)) throw SpecError("leading coefficients must be nonzero");
  std::vector<Complex> out;
  for (int n = n_min; n <= n_max; ++n) out.push_back((kI * ln_r + 2.0 * kPi * n) / (spec.b - spec.a));
  return out;
}

CountResult count_zeros_rect(const ChiFunction& chi, const Rect& rect, const CountOptions& options) {
  if (!(rect.width() > 0.0) || !(rect.height() > 0.0)) throw SpecError("rectangle must have positive extent");
  CountResult result;
  Rect r = rect;
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    ContourWalker walker(chi, options.boundary_floor);
    try {
      result.winding = walker.winding(r, options.samples);
      result.rect = r;
      result.retries = attempt;
      result.min_ratio = walker.min_ratio;
      result.evaluations += walker.evaluations;
      return result;
    } catch (const OnContour&) {
      result.evaluations += walker.evaluations;
      r = r.dilated(0.01);
    }
  }
  throw NumericalError("zero on contour");
}

int count_zeros_rect(const std::function<Complex(Complex)>& chi, const Rect& rect, int samples) {
  CountOptions options;
  options.samples = samples;
  return count_zeros_rect([&chi](Complex z) { return CharValue{chi(z), 1.0}; }, rect, options).winding;
}

std::optional<Complex> refine_simple(const CharContext& ctx, Complex start, int max_iter) {
  const double tol = ctx.grid().newton_tol;
  Complex z = start;
  std::optional<std::pair<Complex, Complex>> previous;
  for (int it = 0; it < max_iter; ++it) {
    const Complex f = evaluate_plain(ctx, z);
    if (f == 0.0) return z;
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    Complex d = (evaluate_plain(ctx, z + h) - evaluate_plain(ctx, z - h)) / (2.0 * h);
    if (!is_finite(d) || std::abs(d) < 1e-300) {
      if (!previous) return std::nullopt;
      d = (f - previous->second) / (z - previous->first);
    }
    const Complex step = f / d;
    previous = {z, f};
    z -= step;
    if (!is_finite(z)) return std::nullopt;
    if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) return z;
  }
  return std::nullopt;
}

std::optional<Complex> refine_multiple(const CharContext& ctx, Complex start, int multiplicity, int max_iter) {
  if (multiplicity == 1) return refine_simple(ctx, start, max_iter);
  if (multiplicity < 1 || multiplicity > 4) throw SpecError("multiplicity must lie in 1..4");
  const double tol = std::max(ctx.grid().newton_tol, 1e-14);
  Complex z = start;
  for (int it = 0; it < max_iter; ++it) {
    const ComplexJet j = ctx.evaluate_jet(z, multiplicity);
    const Complex lead = static_cast<double>(multiplicity) * j[multiplicity];
    if (lead == 0.0) return std::nullopt;
    const Complex step = j[multiplicity - 1] / lead;
    z -= step;
    if (!is_finite(z)) return std::nullopt;
    if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) return z;
  }
  return std::nullopt;
}

SpectrumResult locate_spectrum(const CharContext& ctx, const Rect& region, const LocateOptions& options) {
  SpectrumResult out;
  Locator locator(ctx, options, 0);
  CountOptions top;
  top.samples = ctx.grid().contour_samples;
  try {
    const CountResult c = count_zeros_rect([&ctx](Complex z) { return ctx.evaluate(z); }, region, top);
    locator.search(c.rect, c.winding, std::nullopt);
  } catch (const NumericalError& e) {
    locator.fail(region, e.what());
  }
  out.failures = locator.failures;
  finish(ctx, locator.points, options, out);
  return out;
}

SpectrumResult locate_spectrum(const CharContext& ctx, int n_min, int n_max, const LocateOptions& options) {
  const auto* sbc = std::get_if<SeparatedBC>(&ctx.bc());
  if (sbc == nullptr) throw SpecError("strip enumeration requires separated boundary conditions");
  const int jobs = std::max(0, n_max - n_min + 1);
  std::vector<std::vector<Tagged>> found(static_cast<std::size_t>(jobs));
  std::vector<std::vector<LocateFailure>> failed(static_cast<std::size_t>(jobs));

  const int threads = options.threads > 0 ? options.threads : thread_cap();
  parallel_for(jobs, threads, [&](int i) {
    const int n = n_min + i;
    const StripSpec s = strip(*sbc, ctx.spec(), n, options.im_band);
    Locator locator(ctx, options, i);
    CountOptions top;
    top.samples = ctx.grid().contour_samples;
    try {
      const CountResult c = count_zeros_rect([&ctx](Complex z) { return ctx.evaluate(z); }, s.rect(), top);
      locator.search(c.rect, c.winding, model_roots(*sbc, ctx.spec(), n, n).front());
    } catch (const NumericalError& e) {
      locator.fail(s.rect(), "strip " + std::to_string(n) + ": " + e.what());
    }
    found[static_cast<std::size_t>(i)] = std::move(locator.points);
    failed[static_cast<std::size_t>(i)] = std::move(locator.failures);
  });

  SpectrumResult out;
  std::vector<Tagged> all;
  for (int i = 0; i < jobs; ++i) {
    all.insert(all.end(), found[static_cast<std::size_t>(i)].begin(), found[static_cast<std::size_t>(i)].end());
    out.failures.insert(out.failures.end(), failed[static_cast<std::size_t>(i)].begin(),
                        failed[static_cast<std::size_t>(i)].end());
  }
  finish(ctx, std::move(all), options, out);
  return out;
}

AsymptoticsReport verify_asymptotics(const std::vector<SpectralPoint>& points, const SeparatedBC& sbc,
                                     const SystemSpec& spec, int n_min_abs, int n_max_abs) {
  AsymptoticsReport r;
  std::map<int, double> by_abs;
  for (const SpectralPoint& p : points) {
    const int n = p.strip_index.value_or(strip_of(sbc, spec, p.lambda));
    r.strip_counts[n] += p.multiplicity;
    const int an = std::abs(n);
    if (an < n_min_abs || an > n_max_abs) continue;
    const Complex model = model_roots(sbc, spec, n, n).front();
    const double e = an * std::abs(p.lambda - model);
    r.n.push_back(n);
    r.e.push_back(e);
    by_abs[an] = std::max(by_abs[an], e);
  }
  if (!r.e.empty()) {
    r.max_e = *std::max_element(r.e.begin(), r.e.end());
    r.min_e = *std::min_element(r.e.begin(), r.e.end());
  }
  for (int n = -n_max_abs; n <= n_max_abs; ++n) {
    if (std::abs(n) < n_min_abs) continue;
    auto it = r.strip_counts.find(n);
    if (it == r.strip_counts.end() || it->second != 1) r.anomalous_strips.push_back(n);
  }
  const int mid = (n_min_abs + n_max_abs) / 2;
  double lower = 0.0, upper = 0.0;
  for (auto [an, e] : by_abs) (an <= mid ? lower : upper) = std::max(an <= mid ? lower : upper, e);
  r.non_increasing_trend = upper <= 1.1 * lower + 1e-12;
  return r;
}

std::map<int, int> strip_root_counts(const CharContext& ctx, int n_min_abs, int n_max_abs,
                                     std::optional<double> im_band) {
  const auto* sbc = std::get_if<SeparatedBC>(&ctx.bc());
  if (sbc == nullptr) throw SpecError("strip counts require separated boundary conditions");
  std::vector<int> ns;
  for (int n = -n_max_abs; n <= n_max_abs; ++n)
    if (std::abs(n) >= n_min_abs) ns.push_back(n);
  std::vector<int> counts(ns.size(), -1);
  CountOptions options;
  options.samples = ctx.grid().contour_samples;
  parallel_for(static_cast<int>(ns.size()), thread_cap(), [&](int i) {
    const StripSpec s = strip(*sbc, ctx.spec(), ns[static_cast<std::size_t>(i)], im_band);
    counts[static_cast<std::size_t>(i)] =
        count_zeros_rect([&ctx](Complex z) { return ctx.evaluate(z); }, s.rect(), options).winding;
  });
  std::map<int, int> out;
  for (std::size_t i = 0; i < ns.size(); ++i) out[ns[i]] = counts[i];
  return out;
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectralPoint>& points) {
  out << "n,re,im,multiplicity,residual,re0,im0\n";
  char buf[256];
  for (const SpectralPoint& p : points) {
    if (p.strip_index) out << *p.strip_index;
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%d,%.17g,", p.lambda.real(), p.lambda.imag(), p.multiplicity,
                  p.residual);
    out << buf;
    if (p.model_root) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", p.model_root->real(), p.model_root->imag());
      out << buf;
    } else {
      out << ',';
    }
    out << '\n';
  }
}

int thread_cap() {
  if (const char* env = std::getenv("DIRAC_SPECTRA_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

}  // namespace dirac
