#include "aqi/dipole.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <mutex>
#include <system_error>
#include <thread>

#include "aqi/detail/hash.hpp"
#include "aqi/detail/parallel.hpp"
#include "aqi/error.hpp"

namespace aqi {

namespace {

constexpr double pi = std::numbers::pi;

double window_value(SpectralWindow window, double t, const TimeGrid& grid) {
    if (window == SpectralWindow::none) return 1.0;
    const double s = std::sin(pi * (t - grid.t_start) / grid.duration());
    return s * s;
}

}  // namespace

SpectralWindow default_window(const DriverConfig& config) {
    return config.envelope == Envelope::flat ? SpectralWindow::none : SpectralWindow::hann;
}

std::size_t DipoleRecord::index_of(double q) const {
    const double idx = 2.0 * q;
    const double r = std::round(idx);
    if (std::abs(idx - r) > 1e-9 || r < 0.0 || static_cast<std::size_t>(r) >= q_values.size()) {
        std::ostringstream os;
        os << "harmonic order " << q << " is not on the half-integer grid [0, "
           << (q_values.empty() ? 0.0 : q_values.back()) << "]";
        fail(ErrorCode::argument, os.str(), "q");
    }
    return static_cast<std::size_t>(r);
}

cplx DipoleRecord::at(double q) const { return spectrum[index_of(q)]; }

double dipole_matrix_element(double p, double Ip) {
    const double c = std::pow(2.0, 3.5) * std::pow(2.0 * Ip, 1.25) / pi;
    const double den = p * p + 2.0 * Ip;
    return c * p / (den * den * den);
}

double cutoff_estimate_raw(const DriverConfig& c) {
    const double up = c.E_omega * c.E_omega / (4.0 * c.omega * c.omega);
    return (c.Ip + 3.17 * up) / c.omega;
}

int cutoff_estimate(const DriverConfig& config) {
    const double raw = cutoff_estimate_raw(config);
    // nearest odd integer: 2 round((x - 1)/2) + 1
    return 2 * static_cast<int>(std::lround((raw - 1.0) / 2.0)) + 1;
}

std::vector<double> half_integer_orders(double q_max) {
    std::vector<double> q;
    const auto n = static_cast<std::size_t>(std::floor(2.0 * q_max + 1e-9));
    q.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) q.push_back(0.5 * static_cast<double>(i));
    return q;
}

cplx fourier_component(std::span<const double> d_t, const TimeGrid& grid, double omega, double q,
                       SpectralWindow window) {
    const double dt = grid.dt();
    const double w = q * omega;
    cplx acc{0.0, 0.0};
    const std::size_t n = d_t.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (d_t[i] == 0.0) continue;
        const double t = grid.at(i);
        double f = d_t[i] * window_value(window, t, grid);
        if (i == 0 || i + 1 == n) f *= 0.5;
        acc += f * cplx(std::cos(w * t), std::sin(w * t));
    }
    return acc * dt;
}

std::vector<cplx> harmonic_spectrum(std::span<const double> d_t, const TimeGrid& grid, double omega,
                                    SpectralWindow window, std::span<const double> q_values) {
    if (d_t.size() != grid.size())
        fail(ErrorCode::argument, "dipole series length does not match the time grid", "d_t");
    std::vector<cplx> out(q_values.size());
    // Rotate the phasor incrementally for each q; the recurrence is renormalized
    // from exact trig every 256 steps to bound drift.
    const double dt = grid.dt();
    std::vector<double> weighted(d_t.size());
    for (std::size_t i = 0; i < d_t.size(); ++i) {
        double f = d_t[i] * window_value(window, grid.at(i), grid);
        if (i == 0 || i + 1 == d_t.size()) f *= 0.5;
        weighted[i] = f;
    }
    for (std::size_t k = 0; k < q_values.size(); ++k) {
        const double w = q_values[k] * omega;
        const cplx step(std::cos(w * dt), std::sin(w * dt));
        cplx acc{0.0, 0.0};
        cplx phasor;
        for (std::size_t i = 0; i < weighted.size(); ++i) {
            if ((i & 255u) == 0) {
                const double t = grid.at(i);
                phasor = cplx(std::cos(w * t), std::sin(w * t));
            }
            acc += weighted[i] * phasor;
            phasor *= step;
        }
        out[k] = acc * dt;
    }
    return out;
}

std::vector<cplx> harmonic_spectrum(const DipoleRecord& record, const TimeGrid& grid, double omega,
                                    SpectralWindow window) {
    return harmonic_spectrum(record.d_t, grid, omega, window, record.q_values);
}

DipoleRecord sfa_dipole(const DriverConfig& config, const PhaseSpaceSample& sample, const SfaOptions& opts) {
    const auto& grid = config.time_grid;
    const std::size_t n = grid.size();
    const double dt = grid.dt();
    const double Ip = config.Ip;
    const FieldRealization field(config, sample);

    // Field history is tabulated from t_start - tau_max so ionization times may
    // precede the grid (zero for pulsed envelopes, the running wave for flat).
    const double tau_max = opts.excursion_cycles * config.period();
    const auto m = static_cast<std::size_t>(std::floor(tau_max / dt));
    const std::size_t ne = n + m;
    auto t_of = [&](std::size_t k) { return grid.t_start + dt * (static_cast<double>(k) - static_cast<double>(m)); };
    std::vector<double> e(ne), a(ne), ia(ne, 0.0), ia2(ne, 0.0);
    for (std::size_t k = 0; k < ne; ++k) {
        e[k] = field.field(t_of(k));
        a[k] = field.vector_potential(t_of(k));
    }
    // Cumulative Simpson on each step with the exact midpoint value.
    for (std::size_t k = 1; k < ne; ++k) {
        const double am = field.vector_potential(t_of(k - 1) + 0.5 * dt);
        ia[k] = ia[k - 1] + dt / 6.0 * (a[k - 1] + 4.0 * am + a[k]);
        ia2[k] = ia2[k - 1] + dt / 6.0 * (a[k - 1] * a[k - 1] + 4.0 * am * am + a[k] * a[k]);
    }

    // Excursion-time weights: regularized spreading factor, cos^2 taper and
    // trapezoid end weight.
    const double taper_len = opts.taper_fraction * tau_max;
    std::vector<cplx> kernel(m + 1, 0.0);
    for (std::size_t j = 1; j <= m; ++j) {
        const double tau = dt * static_cast<double>(j);
        cplx k = std::pow(pi / cplx(opts.eps_reg, 0.5 * tau), 1.5);
        const double to_end = tau_max - tau;
        if (taper_len > 0.0 && to_end < taper_len) {
            const double c = std::cos(0.5 * pi * (1.0 - to_end / taper_len));
            k *= c * c;
        }
        if (j == m) k *= 0.5;
        kernel[j] = k * dt;
    }

    const double me = std::pow(2.0, 3.5) * std::pow(2.0 * Ip, 1.25) / pi;
    const double me2 = me * me;
    const double two_ip = 2.0 * Ip;

    DipoleRecord rec;
    rec.sample_id = sample.id;
    rec.d_t.assign(n, 0.0);
    for (std::size_t out = 0; out < n; ++out) {
        const std::size_t i = out + m;
        double re = 0.0, im = 0.0;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t k = i - j;
            if (e[k] == 0.0) continue;
            const double tau = dt * static_cast<double>(j);
            const double dia = ia[i] - ia[k];
            const double p = -dia / tau;
            const double k1 = p + a[i];
            const double k2 = p + a[k];
            const double d1 = k1 * k1 + two_ip;
            const double d2 = k2 * k2 + two_ip;
            const double amp = e[k] * k1 * k2 / (d1 * d1 * d1 * d2 * d2 * d2);
            const double s = Ip * tau - 0.5 * dia * dia / tau + 0.5 * (ia2[i] - ia2[k]);
            // kernel * amp * e^{-iS}
            const double cs = std::cos(s), sn = std::sin(s);
            const double kr = kernel[j].real() * amp, ki = kernel[j].imag() * amp;
            re += kr * cs + ki * sn;
            im += ki * cs - kr * sn;
        }
        const double d = 2.0 * me2 * im;
        if (!std::isfinite(d)) {
            std::ostringstream os;
            os << "non-finite dipole at t = " << grid.at(out) << " (sample " << sample.id << ")";
            fail(ErrorCode::numerical, os.str(), "t");
        }
        rec.d_t[out] = d;
        (void)re;
    }

    double q_max = opts.q_max;
    if (q_max <= 0.0) q_max = std::max(40.0, 2.0 * cutoff_estimate(config) + 8.0);
    rec.window = opts.window.value_or(default_window(config));
    rec.q_values = half_integer_orders(q_max);
    rec.spectrum = harmonic_spectrum(rec.d_t, grid, config.omega, rec.window, rec.q_values);
    return rec;
}

int measured_cutoff(const DipoleRecord& record, double decades) {
    // Log-intensity at odd orders, smoothed over neighbouring odd orders.
    std::vector<int> orders;
    std::vector<double> logi;
    for (int q = 3; static_cast<double>(q) <= record.q_values.back(); q += 2) {
        orders.push_back(q);
        logi.push_back(std::log10(std::norm(record.at(q)) + 1e-300));
    }
    const std::size_t n = logi.size();
    if (n < 3) return 0;
    std::vector<double> smooth(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1, hi = std::min(n - 1, i + 1);
        double s = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) s += logi[k];
        smooth[i] = s / static_cast<double>(hi - lo + 1);
    }
    // Plateau level: median of the smoothed log-intensity over orders >= 7 up
    // to the strongest drop.
    std::vector<double> plateau;
    for (std::size_t i = 0; i < n; ++i)
        if (orders[i] >= 7) plateau.push_back(smooth[i]);
    // Reference: the upper half of the distribution, robust to the tail.
    std::sort(plateau.begin(), plateau.end());
    const double level = plateau[plateau.size() * 3 / 4];
    int last = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (orders[i] >= 7 && smooth[i] >= level - decades) last = orders[i];
    return last;
}

// ---------------------------------------------------------------------------
// cache

namespace {

constexpr char cache_magic[8] = {'A', 'Q', 'I', 'D', 'I', 'P', 'v', '1'};
constexpr std::uint32_t cache_schema = 1;

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get(std::istream& is, T& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
}

}  // namespace

DipoleCache::DipoleCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) fail(ErrorCode::cache, "cannot create cache directory " + dir_.string() + ": " + ec.message(), "cache_dir");
}

std::string DipoleCache::key(const DriverConfig& c, const SfaOptions& o, const PhaseSpaceSample& s) {
    detail::Fnv1a h;
    h.update(std::string_view("aqi-dipole"));
    h.update(static_cast<std::uint64_t>(cache_schema));
    for (double v : {c.omega, c.E_omega, c.epsilon_ratio, c.phi, c.Ip, c.n_cycles, c.time_grid.t_start,
                     c.time_grid.t_end})
        h.update(v);
    h.update(static_cast<std::uint64_t>(c.time_grid.n_steps));
    h.update(static_cast<std::uint64_t>(c.envelope));
    for (double v : {o.excursion_cycles, o.eps_reg, o.taper_fraction, o.q_max}) h.update(v);
    h.update(static_cast<std::uint64_t>(o.window.value_or(default_window(c))));
    h.update(s.gamma_x);
    h.update(s.gamma_y);
    return h.hex();
}

std::optional<DipoleRecord> DipoleCache::load(const std::string& key) const {
    const auto path = dir_ / (key + ".dip");
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    std::uint32_t schema = 0;
    std::uint64_t n_t = 0, n_q = 0, stored_hash = 0, window = 0;
    if (!is.read(magic, 8) || std::memcmp(magic, cache_magic, 8) != 0 || !get(is, schema) ||
        schema != cache_schema)
        fail(ErrorCode::cache, "bad header in " + path.string());
    char keybuf[16];
    if (!is.read(keybuf, 16) || std::string(keybuf, 16) != key)
        fail(ErrorCode::cache, "key mismatch in " + path.string());
    if (!get(is, window) || !get(is, n_t) || !get(is, n_q) || n_t > (1u << 28) || n_q > (1u << 20))
        fail(ErrorCode::cache, "bad sizes in " + path.string());
    DipoleRecord r;
    r.window = static_cast<SpectralWindow>(window);
    r.d_t.resize(n_t);
    r.q_values.resize(n_q);
    r.spectrum.resize(n_q);
    is.read(reinterpret_cast<char*>(r.d_t.data()), static_cast<std::streamsize>(n_t * sizeof(double)));
    is.read(reinterpret_cast<char*>(r.q_values.data()), static_cast<std::streamsize>(n_q * sizeof(double)));
    is.read(reinterpret_cast<char*>(r.spectrum.data()), static_cast<std::streamsize>(n_q * sizeof(cplx)));
    if (!is || !get(is, stored_hash)) fail(ErrorCode::cache, "truncated record " + path.string());
    detail::Fnv1a h;
    h.update(r.d_t.data(), n_t * sizeof(double));
    h.update(r.q_values.data(), n_q * sizeof(double));
    h.update(r.spectrum.data(), n_q * sizeof(cplx));
    if (h.digest() != stored_hash) fail(ErrorCode::cache, "checksum mismatch in " + path.string());
    return r;
}

void DipoleCache::store(const std::string& key, const DipoleRecord& r) const {
    const auto final_path = dir_ / (key + ".dip");
    std::ostringstream tag;
    tag << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
    const auto tmp_path = dir_ / (key + tag.str());
    {
        std::ofstream os(tmp_path, std::ios::binary | std::ios::trunc);
        if (!os) fail(ErrorCode::cache, "cannot write " + tmp_path.string());
        os.write(cache_magic, 8);
        put(os, cache_schema);
        os.write(key.data(), 16);
        put(os, static_cast<std::uint64_t>(r.window));
        put(os, static_cast<std::uint64_t>(r.d_t.size()));
        put(os, static_cast<std::uint64_t>(r.q_values.size()));
        os.write(reinterpret_cast<const char*>(r.d_t.data()), static_cast<std::streamsize>(r.d_t.size() * sizeof(double)));
        os.write(reinterpret_cast<const char*>(r.q_values.data()),
                 static_cast<std::streamsize>(r.q_values.size() * sizeof(double)));
        os.write(reinterpret_cast<const char*>(r.spectrum.data()),
                 static_cast<std::streamsize>(r.spectrum.size() * sizeof(cplx)));
        detail::Fnv1a h;
        h.update(r.d_t.data(), r.d_t.size() * sizeof(double));
        h.update(r.q_values.data(), r.q_values.size() * sizeof(double));
        h.update(r.spectrum.data(), r.spectrum.size() * sizeof(cplx));
        put(os, h.digest());
        if (!os) fail(ErrorCode::cache, "write failed for " + tmp_path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp_path, final_path, ec);
    if (ec) {
        std::filesystem::remove(tmp_path, ec);
        fail(ErrorCode::cache, "cannot publish " + final_path.string());
    }
}

std::vector<DipoleRecord> ensemble_dipoles(const DriverConfig& config, std::span<const PhaseSpaceSample> samples,
                                           const EnsembleOptions& opts) {
    if (samples.empty()) fail(ErrorCode::argument, "empty sample set", "samples");
    std::vector<DipoleRecord> out(samples.size());
    std::mutex warn_mutex;
    auto warn = [&](const std::string& msg) {
        if (!opts.warn) return;
        std::lock_guard lock(warn_mutex);
        opts.warn(msg);
    };
    detail::parallel_for(samples.size(), opts.jobs, [&](std::size_t i) {
        const auto& s = samples[i];
        std::string key;
        if (opts.cache) {
            key = DipoleCache::key(config, opts.sfa, s);
            try {
                if (auto hit = opts.cache->load(key)) {
                    hit->sample_id = s.id;
                    out[i] = std::move(*hit);
                    return;
                }
            } catch (const Error& e) {
                warn(std::string("dipole cache: ") + e.what() + "; recomputing");
            }
        }
        out[i] = sfa_dipole(config, s, opts.sfa);
        if (opts.cache) opts.cache->store(key, out[i]);
    });
    return out;
}

}  // namespace aqi
