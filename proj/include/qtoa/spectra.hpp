// Copyright 2026 The qtoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qtoa {

enum class SpectrumKind { Gaussian, Lorentzian, Tabulated };

std::string to_string(SpectrumKind kind);

/// One grid point of a tabulated spectrum: angular frequency and |phi_w|^2.
struct SpectralSample {
    double omega;
    double power;
};

/// Pulse spectrum phi_w and its time-domain amplitude g(t).
///
/// Conventions (hbar = c = 1):
///   g(t) = (2 pi)^(-1/2) * integral dw phi_w exp(-i w t)
/// so that |phi_w|^2 and |g(t)|^2 are both unit-normalized densities.
///
/// Kinds and the meaning of `width`:
///   Gaussian    width is the standard deviation of |phi_w|^2.
///   Lorentzian  phi_w is a Lorentzian of half-width `width`; |g(t)|^2 is
///               the two-sided exponential width * exp(-2 width |t|).
///   Tabulated   uniform grid of |phi_w|^2 with zero spectral phase; g(t)
///               is a direct discrete Fourier sum, periodic in t with period
///               2 pi / d_omega. `width` reports the spectral std.
///
/// Spectra are immutable values; tabulated data is shared between copies.
class Spectrum {
   public:
    static Spectrum gaussian(double center_frequency, double width);
    static Spectrum lorentzian(double center_frequency, double width);

    /// Builds a tabulated spectrum. The grid must be strictly increasing,
    /// uniformly spaced, hold at least 64 points and non-negative power.
    /// Power is renormalized so the Riemann sum of |phi_w|^2 d_omega is 1;
    /// `normalization_error`, if given, receives (sum - 1) before rescaling.
    /// Throws ResolutionError when the grid spacing cannot represent the
    /// default moment window (20 Delta tau) without aliasing.
    static Spectrum tabulated(std::vector<SpectralSample> samples, double *normalization_error = nullptr);

    SpectrumKind kind() const noexcept { return kind_; }
    double center_frequency() const noexcept { return center_; }
    double width() const noexcept { return width_; }

    /// |phi_w|^2. Tabulated spectra are piecewise-linear between samples.
    double power(double omega) const;

    std::complex<double> amplitude(double t) const;
    double density(double t) const;

    /// Largest |t| at which a tabulated g(t) is alias-free (pi / d_omega);
    /// infinity for closed forms.
    double alias_free_half_width() const noexcept;

    /// Empty for closed-form kinds.
    std::span<const SpectralSample> samples() const noexcept;
    double grid_spacing() const noexcept;

    /// Standard deviation of |phi_w|^2, evaluated by quadrature.
    double frequency_spread() const;

    friend bool operator==(const Spectrum &a, const Spectrum &b);

   private:
    struct Table {
        std::vector<SpectralSample> samples;
        std::vector<double> amplitude;  // sqrt(power)
        double spacing = 0.0;
        double spread = 0.0;
    };

    Spectrum(SpectrumKind kind, double center, double width, std::shared_ptr<const Table> table)
        : kind_(kind), center_(center), width_(width), table_(std::move(table)) {}

    SpectrumKind kind_;
    double center_;
    double width_;
    std::shared_ptr<const Table> table_;
};

/// g(t). Throws ResolutionError when a tabulated spectrum is evaluated
/// outside its alias-free window.
std::complex<double> amplitude_g(const Spectrum &spectrum, double t);

/// |g(t)|^2, the single-photon arrival-time density.
double arrival_density(const Spectrum &spectrum, double t);

struct TimeMoments {
    double tau_bar;
    double delta_tau;
    double delta_omega;
    /// Half-width of the window the time moments converged on.
    double window_half_width;
};

struct MomentOptions {
    /// Initial half-width in units of the time-bandwidth estimate 1 / (2 d_omega).
    double window_factor = 20.0;
    double relative_tolerance = 1e-6;
    int max_doublings = 10;
};

/// Mean and spread of |g(t)|^2 by adaptive quadrature on a window that
/// doubles until both the normalization and the spread change by less than
/// the tolerance. Throws DivergentMomentError when that never happens.
TimeMoments moments(const Spectrum &spectrum, const MomentOptions &options = {});

/// Monotone lookup from u in [0, 1] to arrival time.
///
/// Cell masses come from Gauss-Legendre quadrature of the density; the CDF
/// between nodes is a monotone cubic Hermite interpolant using the density
/// as its slope. Construction measures the interpolation error at every
/// cell midpoint and refuses tables whose error exceeds 1e-6.
class InverseCdfTable {
   public:
    static constexpr std::size_t kMinGridSize = 1024;
    static constexpr double kMaxCdfError = 1e-6;

    /// `density` need not be normalized. The node count is rounded up to odd
    /// so the window center is always a node.
    static InverseCdfTable build(const std::function<double(double)> &density, double lower, double upper,
                                 std::size_t grid_size);

    double quantile(double u) const;
    double cdf(double t) const;

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return lower_ + step_ * static_cast<double>(cdf_.size() - 1); }
    std::size_t size() const noexcept { return cdf_.size(); }
    double max_cdf_error() const noexcept { return max_error_; }

   private:
    double hermite(std::size_t cell, double s) const;
    double hermite_slope(std::size_t cell, double s) const;

    double lower_ = 0.0;
    double step_ = 0.0;
    std::vector<double> cdf_;
    std::vector<double> left_slope_;
    std::vector<double> right_slope_;
    double max_error_ = 0.0;
};

inline constexpr std::size_t kDefaultGridSize = 4097;

/// Table for |g(t)|^2 over the converged moment window.
InverseCdfTable inverse_cdf_table(const Spectrum &spectrum, std::size_t grid_size = kDefaultGridSize);
InverseCdfTable inverse_cdf_table(const Spectrum &spectrum, const TimeMoments &moments,
                                  std::size_t grid_size = kDefaultGridSize);

struct TabulatedLoad {
    Spectrum spectrum;
    std::vector<std::string> warnings;
};

/// Reads a two-column `omega,power` CSV with header.
TabulatedLoad load_tabulated_csv(const std::filesystem::path &path);

}  // namespace qtoa
