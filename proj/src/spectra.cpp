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

#include "qtoa/spectra.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "qtoa/errors.hpp"

namespace qtoa {
namespace {

using std::numbers::pi;

constexpr std::size_t kMinTabulatedPoints = 64;
constexpr double kNormalizationWarnThreshold = 1e-3;

using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

double integrate_adaptive(const std::function<double(double)> &f, double a, double b, double tolerance = 1e-13) {
    return GaussKronrod::integrate(f, a, b, 12, tolerance);
}

// Integral of f over [lo, hi] split into panels no wider than `panel`, with
// panel edges placed symmetrically about zero. Each panel is refined to an
// error of 1e-13 of its own mass or 1e-15 of the total, whichever is looser.
double integrate_panels(const std::function<double(double)> &f, double lo, double hi, double panel) {
    const auto count = static_cast<std::size_t>(std::clamp(std::ceil((hi - lo) / panel), 2.0, 8192.0));
    const std::size_t even = count + (count % 2);
    const double h = (hi - lo) / static_cast<double>(even);
    std::vector<double> coarse(even);
    std::vector<double> l1(even);
    double total_l1 = 0.0;
    auto edge = [&](std::size_t i) { return i == even ? hi : lo + h * static_cast<double>(i); };
    for (std::size_t i = 0; i < even; ++i) {
        double error = 0.0;
        coarse[i] = GaussKronrod::integrate(f, edge(i), edge(i + 1), 0, 0.0, &error, &l1[i]);
        total_l1 += l1[i];
    }
    double total = 0.0;
    for (std::size_t i = 0; i < even; ++i) {
        if (l1[i] <= 1e-16 * total_l1) {
            total += coarse[i];
            continue;
        }
        total += integrate_adaptive(f, edge(i), edge(i + 1), std::max(1e-13, 1e-15 * total_l1 / l1[i]));
    }
    return total;
}

void require_positive(double value, const char *what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidArgument(std::string(what) + " must be finite and > 0");
    }
}

}  // namespace

std::string to_string(SpectrumKind kind) {
    switch (kind) {
        case SpectrumKind::Gaussian:
            return "gaussian";
        case SpectrumKind::Lorentzian:
            return "lorentzian";
        case SpectrumKind::Tabulated:
            return "tabulated";
    }
    return "unknown";
}

Spectrum Spectrum::gaussian(double center_frequency, double width) {
    require_positive(width, "spectrum width");
    if (!std::isfinite(center_frequency)) {
        throw InvalidArgument("spectrum center frequency must be finite");
    }
    return Spectrum(SpectrumKind::Gaussian, center_frequency, width, nullptr);
}

Spectrum Spectrum::lorentzian(double center_frequency, double width) {
    require_positive(width, "spectrum width");
    if (!std::isfinite(center_frequency)) {
        throw InvalidArgument("spectrum center frequency must be finite");
    }
    return Spectrum(SpectrumKind::Lorentzian, center_frequency, width, nullptr);
}

Spectrum Spectrum::tabulated(std::vector<SpectralSample> samples, double *normalization_error) {
    if (samples.size() < kMinTabulatedPoints) {
        throw InvalidArgument("tabulated spectrum needs at least 64 points, got " + std::to_string(samples.size()));
    }
    const double spacing = (samples.back().omega - samples.front().omega) / static_cast<double>(samples.size() - 1);
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw InvalidArgument("tabulated spectrum grid must be strictly increasing");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i].power) || samples[i].power < 0.0) {
            throw InvalidArgument("tabulated spectrum power must be finite and non-negative (row " +
                                  std::to_string(i) + ")");
        }
        if (i > 0) {
            const double step = samples[i].omega - samples[i - 1].omega;
            if (!(step > 0.0)) {
                throw InvalidArgument("tabulated spectrum grid must be strictly increasing (row " +
                                      std::to_string(i) + ")");
            }
            if (std::abs(step - spacing) > 1e-6 * spacing) {
                throw InvalidArgument("tabulated spectrum grid must be uniformly spaced (row " + std::to_string(i) +
                                      ")");
            }
        }
    }

    double mass = 0.0;
    for (const auto &s : samples) {
        mass += s.power * spacing;
    }
    if (!(mass > 0.0)) {
        throw InvalidArgument("tabulated spectrum has zero total power");
    }
    if (normalization_error != nullptr) {
        *normalization_error = mass - 1.0;
    }

    auto table = std::make_shared<Table>();
    table->spacing = spacing;
    table->samples = std::move(samples);
    double mean = 0.0;
    for (auto &s : table->samples) {
        s.power /= mass;
        mean += s.omega * s.power * spacing;
    }
    double variance = 0.0;
    table->amplitude.reserve(table->samples.size());
    for (const auto &s : table->samples) {
        variance += (s.omega - mean) * (s.omega - mean) * s.power * spacing;
        table->amplitude.push_back(std::sqrt(s.power));
    }
    table->spread = std::sqrt(variance);

    MomentOptions defaults;
    const double initial_window = defaults.window_factor / (2.0 * table->spread);
    const double alias_free = pi / spacing;
    if (initial_window > alias_free) {
        std::ostringstream msg;
        msg << "tabulated grid spacing " << spacing << " is too coarse for spectral width " << table->spread
            << ": the time window " << initial_window << " exceeds the alias-free half-period " << alias_free;
        throw ResolutionError(msg.str());
    }
    const double spread = table->spread;
    return Spectrum(SpectrumKind::Tabulated, mean, spread, std::move(table));
}

double Spectrum::power(double omega) const {
    switch (kind_) {
        case SpectrumKind::Gaussian: {
            const double z = (omega - center_) / width_;
            return std::exp(-0.5 * z * z) / (width_ * std::sqrt(2.0 * pi));
        }
        case SpectrumKind::Lorentzian: {
            const double d = omega - center_;
            const double denom = d * d + width_ * width_;
            return 2.0 * width_ * width_ * width_ / (pi * denom * denom);
        }
        case SpectrumKind::Tabulated: {
            const auto &s = table_->samples;
            if (omega < s.front().omega || omega > s.back().omega) {
                return 0.0;
            }
            const double x = (omega - s.front().omega) / table_->spacing;
            const auto i = std::min(static_cast<std::size_t>(x), s.size() - 2);
            const double frac = x - static_cast<double>(i);
            return s[i].power * (1.0 - frac) + s[i + 1].power * frac;
        }
    }
    return 0.0;
}

std::complex<double> Spectrum::amplitude(double t) const {
    const std::complex<double> carrier = std::polar(1.0, -center_ * t);
    switch (kind_) {
        case SpectrumKind::Gaussian: {
            const double s2 = width_ * width_;
            return std::pow(2.0 * s2 / pi, 0.25) * std::exp(-s2 * t * t) * carrier;
        }
        case SpectrumKind::Lorentzian:
            return std::sqrt(width_) * std::exp(-width_ * std::abs(t)) * carrier;
        case SpectrumKind::Tabulated: {
            if (std::abs(t) > alias_free_half_width() * (1.0 + 1e-12)) {
                std::ostringstream msg;
                msg << "t = " << t << " lies outside the alias-free window +/-" << alias_free_half_width()
                    << " of the tabulated spectrum";
                throw ResolutionError(msg.str());
            }
            const auto &s = table_->samples;
            const auto &amp = table_->amplitude;
            // Frequencies are taken relative to the spectral mean, which only
            // changes the (unobservable) global phase handled by `carrier`.
            const std::complex<double> step = std::polar(1.0, -table_->spacing * t);
            std::complex<double> phase = std::polar(1.0, -(s.front().omega - center_) * t);
            std::complex<double> sum = 0.0;
            for (std::size_t k = 0; k < s.size(); ++k) {
                sum += amp[k] * phase;
                phase *= step;
                if ((k & 63U) == 63U) {
                    phase /= std::abs(phase);
                }
            }
            return sum * (table_->spacing / std::sqrt(2.0 * pi)) * carrier;
        }
    }
    return 0.0;
}

double Spectrum::density(double t) const {
    switch (kind_) {
        case SpectrumKind::Gaussian: {
            const double s2 = width_ * width_;
            return std::sqrt(2.0 * s2 / pi) * std::exp(-2.0 * s2 * t * t);
        }
        case SpectrumKind::Lorentzian:
            return width_ * std::exp(-2.0 * width_ * std::abs(t));
        case SpectrumKind::Tabulated:
            return std::norm(amplitude(t));
    }
    return 0.0;
}

double Spectrum::alias_free_half_width() const noexcept {
    if (kind_ != SpectrumKind::Tabulated) {
        return std::numeric_limits<double>::infinity();
    }
    return pi / table_->spacing;
}

std::span<const SpectralSample> Spectrum::samples() const noexcept {
    if (!table_) {
        return {};
    }
    return table_->samples;
}

double Spectrum::grid_spacing() const noexcept { return table_ ? table_->spacing : 0.0; }

double Spectrum::frequency_spread() const {
    switch (kind_) {
        case SpectrumKind::Gaussian:
        case SpectrumKind::Lorentzian: {
            const double inf = std::numeric_limits<double>::infinity();
            auto weight = [this](double d) { return power(center_ + d); };
            const double norm = integrate_adaptive(weight, -inf, inf);
            const double mean = integrate_adaptive([&](double d) { return d * weight(d); }, -inf, inf) / norm;
            const double second =
                integrate_adaptive([&](double d) { return (d - mean) * (d - mean) * weight(d); }, -inf, inf) / norm;
            return std::sqrt(second);
        }
        case SpectrumKind::Tabulated:
            return table_->spread;
    }
    return 0.0;
}

bool operator==(const Spectrum &a, const Spectrum &b) {
    if (a.kind_ != b.kind_ || a.center_ != b.center_ || a.width_ != b.width_) {
        return false;
    }
    if (a.kind_ != SpectrumKind::Tabulated || a.table_ == b.table_) {
        return true;
    }
    const auto sa = a.samples();
    const auto sb = b.samples();
    return std::equal(sa.begin(), sa.end(), sb.begin(), sb.end(), [](const SpectralSample &x, const SpectralSample &y) {
        return x.omega == y.omega && x.power == y.power;
    });
}

std::complex<double> amplitude_g(const Spectrum &spectrum, double t) { return spectrum.amplitude(t); }

double arrival_density(const Spectrum &spectrum, double t) { return spectrum.density(t); }

TimeMoments moments(const Spectrum &spectrum, const MomentOptions &options) {
    if (!(options.window_factor > 0.0) || !(options.relative_tolerance > 0.0)) {
        throw InvalidArgument("moment window factor and tolerance must be > 0");
    }
    const double delta_omega = spectrum.frequency_spread();
    const double estimate = 1.0 / (2.0 * delta_omega);
    const double limit = spectrum.alias_free_half_width();
    auto density = [&spectrum](double t) { return spectrum.density(t); };

    struct Window {
        double half_width, mass, mean, spread;
    };
    auto evaluate = [&](double w) {
        const double panel = estimate;
        const double mass = integrate_panels(density, -w, w, panel);
        const double first = integrate_panels([&](double t) { return t * density(t); }, -w, w, panel);
        const double mean = first / mass;
        const double second =
            integrate_panels([&](double t) { return (t - mean) * (t - mean) * density(t); }, -w, w, panel);
        return Window{w, mass, mean, std::sqrt(second / mass)};
    };

    double w = options.window_factor * estimate;
    if (w > limit) {
        throw ResolutionError("moment window exceeds the alias-free window of the tabulated spectrum");
    }
    Window previous = evaluate(w);
    for (int k = 0; k < options.max_doublings; ++k) {
        const bool capped = 2.0 * w >= limit;
        w = std::min(2.0 * w, limit);
        const Window current = evaluate(w);
        const bool converged = std::abs(current.spread - previous.spread) <= options.relative_tolerance * current.spread &&
                               std::abs(current.mass - previous.mass) <= options.relative_tolerance * current.mass;
        if (converged) {
            return TimeMoments{current.mean, current.spread, delta_omega, current.half_width};
        }
        if (capped) {
            break;
        }
        previous = current;
    }
    std::ostringstream msg;
    msg << "second moment of |g(t)|^2 did not converge up to window half-width " << w
        << " (heavy-tailed arrival density)";
    throw DivergentMomentError(msg.str());
}

InverseCdfTable InverseCdfTable::build(const std::function<double(double)> &density, double lower, double upper,
                                       std::size_t grid_size) {
    if (grid_size < kMinGridSize) {
        throw InvalidArgument("inverse-CDF grid size must be >= 1024, got " + std::to_string(grid_size));
    }
    if (!(upper > lower) || !std::isfinite(lower) || !std::isfinite(upper)) {
        throw InvalidArgument("inverse-CDF window must be a finite, non-empty interval");
    }
    const std::size_t nodes = grid_size | 1U;
    const std::size_t cells = nodes - 1;

    InverseCdfTable table;
    table.lower_ = lower;
    table.step_ = (upper - lower) / static_cast<double>(cells);
    const double h = table.step_;
    auto node = [&](std::size_t i) { return i == cells ? upper : lower + h * static_cast<double>(i); };

    using Legendre = boost::math::quadrature::gauss<double, 10>;
    std::vector<double> cumulative(nodes, 0.0);
    std::vector<double> slope(nodes, 0.0);
    std::vector<double> half_mass(cells, 0.0);
    for (std::size_t i = 0; i < nodes; ++i) {
        slope[i] = density(node(i));
    }
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = node(i);
        const double b = node(i + 1);
        const double m = 0.5 * (a + b);
        const double left = Legendre::integrate(density, a, m);
        const double right = Legendre::integrate(density, m, b);
        if (!std::isfinite(left) || !std::isfinite(right) || left < 0.0 || right < 0.0 || !std::isfinite(slope[i]) ||
            slope[i] < 0.0) {
            throw TableConstructionError("numeric CDF is not monotone near t = " + std::to_string(a));
        }
        half_mass[i] = left;
        cumulative[i + 1] = cumulative[i] + left + right;
    }
    const double total = cumulative.back();
    if (!(total > 0.0) || !std::isfinite(total) || !std::isfinite(slope.back()) || slope.back() < 0.0) {
        throw TableConstructionError("numeric CDF has no finite positive mass on the window");
    }

    table.cdf_.resize(nodes);
    table.left_slope_.resize(cells);
    table.right_slope_.resize(cells);
    for (std::size_t i = 0; i < nodes; ++i) {
        table.cdf_[i] = cumulative[i] / total;
    }
    table.cdf_.back() = 1.0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double delta = table.cdf_[i + 1] - table.cdf_[i];
        double d0 = slope[i] / total * h;
        double d1 = slope[i + 1] / total * h;
        if (delta <= 0.0) {
            d0 = d1 = 0.0;
        } else {
            // Fritsch-Carlson limiter keeps the interpolant monotone.
            const double alpha = d0 / delta;
            const double beta = d1 / delta;
            const double r2 = alpha * alpha + beta * beta;
            if (r2 > 9.0) {
                const double tau = 3.0 / std::sqrt(r2);
                d0 = tau * alpha * delta;
                d1 = tau * beta * delta;
            }
        }
        table.left_slope_[i] = d0;
        table.right_slope_[i] = d1;
    }

    double worst = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double exact = (cumulative[i] + half_mass[i]) / total;
        worst = std::max(worst, std::abs(table.hermite(i, 0.5) - exact));
    }
    table.max_error_ = worst;
    if (worst > kMaxCdfError) {
        std::ostringstream msg;
        msg << "inverse-CDF grid of " << nodes << " nodes interpolates the CDF with error " << worst
            << " > " << kMaxCdfError;
        throw TableConstructionError(msg.str());
    }
    return table;
}

double InverseCdfTable::hermite(std::size_t cell, double s) const {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return cdf_[cell] * (2.0 * s3 - 3.0 * s2 + 1.0) + left_slope_[cell] * (s3 - 2.0 * s2 + s) +
           cdf_[cell + 1] * (-2.0 * s3 + 3.0 * s2) + right_slope_[cell] * (s3 - s2);
}

double InverseCdfTable::hermite_slope(std::size_t cell, double s) const {
    const double s2 = s * s;
    return (cdf_[cell + 1] - cdf_[cell]) * (6.0 * s - 6.0 * s2) + left_slope_[cell] * (3.0 * s2 - 4.0 * s + 1.0) +
           right_slope_[cell] * (3.0 * s2 - 2.0 * s);
}

double InverseCdfTable::cdf(double t) const {
    if (t <= lower_) {
        return 0.0;
    }
    const double x = (t - lower_) / step_;
    const std::size_t cells = cdf_.size() - 1;
    if (x >= static_cast<double>(cells)) {
        return 1.0;
    }
    const auto i = static_cast<std::size_t>(x);
    return hermite(i, x - static_cast<double>(i));
}

double InverseCdfTable::quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    const std::size_t cells = cdf_.size() - 1;
    // First node strictly above u; the cell to its left brackets u.
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t i = it == cdf_.begin() ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
    if (i >= cells) {
        return upper();
    }
    const double f0 = cdf_[i];
    const double f1 = cdf_[i + 1];
    const double delta = f1 - f0;
    if (delta <= 0.0) {
        return lower_ + step_ * static_cast<double>(i);
    }
    double lo = 0.0;
    double hi = 1.0;
    double s = (u - f0) / delta;
    for (int iter = 0; iter < 40; ++iter) {
        const double residual = hermite(i, s) - u;
        if (std::abs(residual) <= 1e-15) {
            break;
        }
        if (residual > 0.0) {
            hi = s;
        } else {
            lo = s;
        }
        const double d = hermite_slope(i, s);
        double next = d > 0.0 ? s - residual / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (hi - lo < 1e-15) {
            break;
        }
        s = next;
    }
    return lower_ + step_ * (static_cast<double>(i) + s);
}

InverseCdfTable inverse_cdf_table(const Spectrum &spectrum, std::size_t grid_size) {
    return inverse_cdf_table(spectrum, moments(spectrum), grid_size);
}

InverseCdfTable inverse_cdf_table(const Spectrum &spectrum, const TimeMoments &m, std::size_t grid_size) {
    const double w = m.window_half_width;
    return InverseCdfTable::build([&spectrum](double t) { return spectrum.density(t); }, -w, w, grid_size);
}

TabulatedLoad load_tabulated_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open spectrum table '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw InvalidArgument("spectrum table '" + path.string() + "' is empty");
    }
    auto trim = [](std::string s) {
        const auto first = s.find_first_not_of(" \t\r");
        const auto last = s.find_last_not_of(" \t\r");
        return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
    };
    {
        const auto comma = line.find(',');
        if (comma == std::string::npos || trim(line.substr(0, comma)) != "omega" ||
            trim(line.substr(comma + 1)) != "power") {
            throw InvalidArgument("spectrum table '" + path.string() + "' must start with header 'omega,power'");
        }
    }
    std::vector<SpectralSample> samples;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw InvalidArgument(path.string() + ":" + std::to_string(row) + ": expected two columns");
        }
        try {
            std::size_t used = 0;
            const std::string a = trim(line.substr(0, comma));
            const std::string b = trim(line.substr(comma + 1));
            const double omega = std::stod(a, &used);
            if (used != a.size()) {
                throw std::invalid_argument(a);
            }
            const double power = std::stod(b, &used);
            if (used != b.size()) {
                throw std::invalid_argument(b);
            }
            samples.push_back({omega, power});
        } catch (const std::logic_error &) {
            throw InvalidArgument(path.string() + ":" + std::to_string(row) + ": malformed number");
        }
    }
    double error = 0.0;
    TabulatedLoad result{Spectrum::tabulated(std::move(samples), &error), {}};
    if (std::abs(error) > kNormalizationWarnThreshold) {
        std::ostringstream msg;
        msg << "spectrum table '" << path.string() << "' integrates to " << 1.0 + error
            << " (|error| > 1e-3); renormalized";
        result.warnings.push_back(msg.str());
    }
    return result;
}

}  // namespace qtoa
