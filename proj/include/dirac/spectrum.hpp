#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dirac/charfn.hpp"

namespace dirac {

struct SpectralPoint {
  Complex lambda{0.0};
  int multiplicity = 1;
  std::optional<int> strip_index;
  /// |chi(lambda)| after refinement.
  double residual = 0.0;
  std::optional<Complex> model_root;
};

struct Rect {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  double diameter() const { return std::hypot(width(), height()); }
  Complex center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  bool contains(Complex z, double margin = 0.0) const {
    return z.real() >= re_min - margin && z.real() <= re_max + margin && z.imag() >= im_min - margin &&
           z.imag() <= im_max + margin;
  }
  /// Each side pushed out by `fraction` of the corresponding extent.
  Rect dilated(double fraction) const;
};

/// (2n-1) pi < (b-a) Re lambda + Im ln R < (2n+1) pi, |Im lambda| <= H.
struct StripSpec {
  int n = 0;
  double re_min = 0.0, re_max = 0.0;
  double im_band = 0.0;

  Rect rect() const { return {re_min, re_max, -im_band, im_band}; }
};

/// 5 + |ln R| / (b-a).
double default_im_band(const SeparatedBC& sbc, const SystemSpec& spec);
StripSpec strip(const SeparatedBC& sbc, const SystemSpec& spec, int n, std::optional<double> im_band = std::nullopt);
/// Strip index of lambda: nearest n to ((b-a) Re lambda + Im ln R) / 2 pi.
int strip_of(const SeparatedBC& sbc, const SystemSpec& spec, Complex lambda);

/// lambda_{n,0} = (i ln R + 2 pi n) / (b-a) for n_min <= n <= n_max with
/// R = C11 C22 / (C12 C21), principal logarithm.
std::vector<Complex> model_roots(const SeparatedBC& sbc, const SystemSpec& spec, int n_min, int n_max);

using ChiFunction = std::function<CharValue(Complex)>;

struct CountResult {
  int winding = 0;
  /// Rectangle actually used (after dilation).
  Rect rect;
  int retries = 0;
  /// min |chi| / scale over the evaluated contour points.
  double min_ratio = 0.0;
  int evaluations = 0;
};

struct CountOptions {
  int samples = 128;
  /// |chi| below floor * scale on the contour counts as a zero on it.
  double boundary_floor = 1e-12;
  int max_retries = 5;
};

/// Winding number of chi along the counter-clockwise boundary of rect.
/// Throws NumericalError("zero on contour") when retries are exhausted.
CountResult count_zeros_rect(const ChiFunction& chi, const Rect& rect, const CountOptions& options = {});
/// Convenience overload for plain functions (scale 1).
int count_zeros_rect(const std::function<Complex(Complex)>& chi, const Rect& rect, int samples = 128);

struct LocateOptions {
  /// 0: DIRAC_SPECTRA_THREADS or the hardware concurrency.
  int threads = 0;
  double min_diameter = 1e-6;
  double merge_tol = 1e-7;
  int max_newton = 50;
  std::optional<double> im_band;
};

struct LocateFailure {
  Rect rect;
  std::string reason;
};

struct SpectrumResult {
  std::vector<SpectralPoint> points;
  std::vector<LocateFailure> failures;
};

/// Zeros of chi inside rect, sorted by (Re, Im).
SpectrumResult locate_spectrum(const CharContext& ctx, const Rect& region, const LocateOptions& options = {});
/// Zeros in the strips n_min..n_max of a separated problem.
SpectrumResult locate_spectrum(const CharContext& ctx, int n_min, int n_max, const LocateOptions& options = {});

/// Newton refinement of a simple zero; central-difference derivative with
/// h = 1e-6 max(1, |lambda|), secant fallback.
std::optional<Complex> refine_simple(const CharContext& ctx, Complex start, int max_iter = 50);
/// Newton on the (m-1)-th Taylor coefficient for an m-fold zero (m <= 4).
std::optional<Complex> refine_multiple(const CharContext& ctx, Complex start, int multiplicity, int max_iter = 50);

struct AsymptoticsReport {
  std::vector<int> n;
  /// |n| |lambda_n - lambda_{n,0}| aligned with n.
  std::vector<double> e;
  double max_e = 0.0;
  double min_e = 0.0;
  /// Largest e over the upper half of the |n| range does not exceed 1.1 x
  /// the largest e over the lower half.
  bool non_increasing_trend = true;
  /// Roots (with multiplicity) per strip index, from the located points.
  std::map<int, int> strip_counts;
  std::vector<int> anomalous_strips;
};

AsymptoticsReport verify_asymptotics(const std::vector<SpectralPoint>& points, const SeparatedBC& sbc,
                                     const SystemSpec& spec, int n_min_abs, int n_max_abs);

/// Winding number of chi over each strip |n| in n_min..n_max (both signs).
std::map<int, int> strip_root_counts(const CharContext& ctx, int n_min_abs, int n_max_abs,
                                     std::optional<double> im_band = std::nullopt);

/// CSV columns n, re, im, multiplicity, residual, re0, im0.
void write_spectrum_csv(std::ostream& out, const std::vector<SpectralPoint>& points);

/// DIRAC_SPECTRA_THREADS if set, else the hardware concurrency (>= 1).
int thread_cap();

}  // namespace dirac
