#include "aqi/aqi.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <new>
#include <optional>
#include <string>

#include "aqi/analysis.hpp"
#include "aqi/config_io.hpp"
#include "aqi/observables.hpp"
#include "aqi/tomography.hpp"
#include "aqi/wigner.hpp"

struct aqi_config {
    aqi::DriverConfig value;
};

struct aqi_ensemble {
    aqi::Ensemble value;
};

struct aqi_mixture {
    aqi::HarmonicMixture value;
};

struct aqi_trace {
    aqi::AQTTrace value;
};

namespace {

thread_local std::string last_message;
thread_local std::string last_field;

std::mutex warn_mutex;
aqi_warning_fn warn_fn = nullptr;
void* warn_user = nullptr;

void emit_warning(const std::string& msg) {
    std::lock_guard lock(warn_mutex);
    if (warn_fn) warn_fn(msg.c_str(), warn_user);
}

aqi::WarningSink warning_sink() { return [](const std::string& m) { emit_warning(m); }; }

aqi_status status_of(aqi::ErrorCode c) {
    switch (c) {
        case aqi::ErrorCode::argument: return AQI_E_ARGUMENT;
        case aqi::ErrorCode::validation: return AQI_E_VALIDATION;
        case aqi::ErrorCode::numerical: return AQI_E_NUMERICAL;
        case aqi::ErrorCode::cache: return AQI_E_CACHE;
        case aqi::ErrorCode::domain: return AQI_E_DOMAIN;
        case aqi::ErrorCode::truncation: return AQI_E_TRUNCATION;
        case aqi::ErrorCode::undefined_correlation: return AQI_E_UNDEFINED_CORRELATION;
        case aqi::ErrorCode::inversion_domain: return AQI_E_INVERSION_DOMAIN;
        case aqi::ErrorCode::insufficient_projections: return AQI_E_INSUFFICIENT_PROJECTIONS;
        case aqi::ErrorCode::io: return AQI_E_IO;
    }
    return AQI_E_INTERNAL;
}

template <class Fn>
aqi_status guard(Fn&& fn) {
    try {
        fn();
        last_message.clear();
        last_field.clear();
        return AQI_OK;
    } catch (const aqi::Error& e) {
        last_message = e.what();
        last_field = e.field();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_message = "out of memory";
        last_field.clear();
        return AQI_E_INTERNAL;
    } catch (const std::exception& e) {
        last_message = e.what();
        last_field.clear();
        return AQI_E_INTERNAL;
    }
}

void need(const void* p, const char* name) {
    if (!p) aqi::fail(aqi::ErrorCode::argument, std::string(name) + " is null", name);
}

std::vector<double> copy(const double* p, std::size_t n, const char* name) {
    if (n > 0) need(p, name);
    return std::vector<double>(p, p + n);
}

aqi::EnsembleOptions ensemble_options(const aqi_run_options* opts, std::optional<aqi::DipoleCache>& cache) {
    aqi::EnsembleOptions eo;
    eo.warn = warning_sink();
    if (opts) {
        eo.jobs = opts->jobs;
        if (opts->cache_dir && *opts->cache_dir) {
            cache.emplace(opts->cache_dir);
            eo.cache = &*cache;
        }
    }
    return eo;
}

double* config_slot(aqi::DriverConfig& c, const std::string& key) {
    if (key == "omega") return &c.omega;
    if (key == "E_omega") return &c.E_omega;
    if (key == "epsilon_ratio") return &c.epsilon_ratio;
    if (key == "phi") return &c.phi;
    if (key == "Ip") return &c.Ip;
    if (key == "n_cycles") return &c.n_cycles;
    if (key == "rho_coupling") return &c.rho_coupling;
    if (key == "squeezing.I_squ") return &c.squeezing.I_squ;
    if (key == "time_grid.t_start") return &c.time_grid.t_start;
    if (key == "time_grid.t_end") return &c.time_grid.t_end;
    return nullptr;
}

std::size_t to_count(double v, const std::string& key) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15)
        aqi::fail(aqi::ErrorCode::validation, key + ": expected a non-negative integer", key);
    return static_cast<std::size_t>(v);
}

aqi_status write_string(const std::string& s, char* buf, std::size_t cap, std::size_t* needed) {
    if (needed) *needed = s.size();
    if (buf && cap > 0) {
        const std::size_t n = std::min(cap - 1, s.size());
        std::memcpy(buf, s.data(), n);
        buf[n] = '\0';
    }
    return AQI_OK;
}

aqi::PdfMethod pdf_method(aqi_pdf_method m) {
    return m == AQI_PDF_FOCK ? aqi::PdfMethod::fock : aqi::PdfMethod::analytic;
}

}  // namespace

extern "C" {

const char* aqi_last_error(void) { return last_message.c_str(); }
const char* aqi_last_error_field(void) { return last_field.c_str(); }

const char* aqi_status_name(aqi_status s) {
    switch (s) {
        case AQI_OK: return "ok";
        case AQI_E_ARGUMENT: return "argument";
        case AQI_E_VALIDATION: return "validation";
        case AQI_E_NUMERICAL: return "numerical";
        case AQI_E_CACHE: return "cache";
        case AQI_E_DOMAIN: return "domain";
        case AQI_E_TRUNCATION: return "truncation";
        case AQI_E_UNDEFINED_CORRELATION: return "undefined_correlation";
        case AQI_E_INVERSION_DOMAIN: return "inversion_domain";
        case AQI_E_INSUFFICIENT_PROJECTIONS: return "insufficient_projections";
        case AQI_E_IO: return "io";
        case AQI_E_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* aqi_version(void) { return AQI_VERSION; }

void aqi_set_warning_handler(aqi_warning_fn fn, void* user) {
    std::lock_guard lock(warn_mutex);
    warn_fn = fn;
    warn_user = user;
}

aqi_status aqi_config_default(aqi_config** out) {
    return guard([&] {
        need(out, "out");
        *out = new aqi_config{aqi::default_config()};
    });
}

aqi_status aqi_config_from_json(const char* text, aqi_config** out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new aqi_config{aqi::config_from_json(text)};
    });
}

aqi_status aqi_config_load(const char* path, aqi_config** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new aqi_config{aqi::load_config(path)};
    });
}

aqi_status aqi_config_clone(const aqi_config* config, aqi_config** out) {
    return guard([&] {
        need(config, "config");
        need(out, "out");
        *out = new aqi_config{config->value};
    });
}

void aqi_config_free(aqi_config* config) { delete config; }

aqi_status aqi_config_set(aqi_config* config, const char* key, double value) {
    return guard([&] {
        need(config, "config");
        need(key, "key");
        auto& c = config->value;
        const std::string k = key;
        if (double* slot = config_slot(c, k)) {
            *slot = value;
        } else if (k == "n_samples") {
            c.n_samples = to_count(value, k);
        } else if (k == "time_grid.n_steps") {
            c.time_grid.n_steps = to_count(value, k);
        } else {
            aqi::fail(aqi::ErrorCode::validation, k + ": unknown numeric key", k);
        }
    });
}

aqi_status aqi_config_get(const aqi_config* config, const char* key, double* value) {
    return guard([&] {
        need(config, "config");
        need(key, "key");
        need(value, "value");
        auto c = config->value;
        const std::string k = key;
        if (double* slot = config_slot(c, k))
            *value = *slot;
        else if (k == "n_samples")
            *value = static_cast<double>(c.n_samples);
        else if (k == "time_grid.n_steps")
            *value = static_cast<double>(c.time_grid.n_steps);
        else
            aqi::fail(aqi::ErrorCode::validation, k + ": unknown numeric key", k);
    });
}

aqi_status aqi_config_set_option(aqi_config* config, const char* key, const char* value) {
    return guard([&] {
        need(config, "config");
        need(key, "key");
        need(value, "value");
        auto& c = config->value;
        const std::string k = key, v = value;
        auto bad = [&] { aqi::fail(aqi::ErrorCode::validation, k + ": unsupported value '" + v + "'", k); };
        if (k == "envelope") {
            if (v == "flat") c.envelope = aqi::Envelope::flat;
            else if (v == "sin2") c.envelope = aqi::Envelope::sin2;
            else bad();
        } else if (k == "squeezing.kind") {
            if (v == "coherent") c.squeezing.kind = aqi::SqueezingKind::coherent;
            else if (v == "squeezed") c.squeezing.kind = aqi::SqueezingKind::squeezed;
            else if (v == "thermal") c.squeezing.kind = aqi::SqueezingKind::thermal;
            else bad();
        } else if (k == "squeezing.axis") {
            if (v == "amplitude") c.squeezing.axis = aqi::FluctuationAxis::amplitude;
            else if (v == "phase") c.squeezing.axis = aqi::FluctuationAxis::phase;
            else bad();
        } else {
            aqi::fail(aqi::ErrorCode::validation, k + ": unknown option key", k);
        }
    });
}

aqi_status aqi_config_validate(const aqi_config* config, size_t* n_warnings) {
    return guard([&] {
        need(config, "config");
        const auto warnings = aqi::validate(config->value);
        for (const auto& w : warnings) emit_warning(w);
        if (n_warnings) *n_warnings = warnings.size();
    });
}

aqi_status aqi_config_to_json(const aqi_config* config, char* buf, size_t cap, size_t* needed) {
    std::string s;
    const auto st = guard([&] {
        need(config, "config");
        s = aqi::config_to_json(config->value);
    });
    return st == AQI_OK ? write_string(s, buf, cap, needed) : st;
}

aqi_status aqi_config_hash(const aqi_config* config, char out[17]) {
    return guard([&] {
        need(config, "config");
        need(out, "out");
        const auto h = aqi::config_hash(config->value);
        std::memcpy(out, h.c_str(), 17);
    });
}

int aqi_cutoff_estimate(const aqi_config* config) { return config ? aqi::cutoff_estimate(config->value) : 0; }

aqi_status aqi_ensemble_compute(const aqi_config* config, const aqi_run_options* opts, aqi_ensemble** out) {
    return guard([&] {
        need(config, "config");
        need(out, "out");
        std::optional<aqi::DipoleCache> cache;
        const auto eo = ensemble_options(opts, cache);
        aqi::validate(config->value);
        *out = new aqi_ensemble{aqi::compute_ensemble(config->value, eo)};
    });
}

void aqi_ensemble_free(aqi_ensemble* ensemble) { delete ensemble; }

size_t aqi_ensemble_size(const aqi_ensemble* e) { return e ? e->value.samples.size() : 0; }

aqi_status aqi_ensemble_sample(const aqi_ensemble* e, size_t k, double* gx, double* gy, double* w) {
    return guard([&] {
        need(e, "ensemble");
        if (k >= e->value.samples.size()) aqi::fail(aqi::ErrorCode::argument, "sample index out of range", "k");
        const auto& s = e->value.samples[k];
        if (gx) *gx = s.gamma_x;
        if (gy) *gy = s.gamma_y;
        if (w) *w = s.weight;
    });
}

size_t aqi_ensemble_time_points(const aqi_ensemble* e) { return e ? e->value.config.time_grid.size() : 0; }

aqi_status aqi_ensemble_times(const aqi_ensemble* e, double* t) {
    return guard([&] {
        need(e, "ensemble");
        need(t, "t");
        const auto& g = e->value.config.time_grid;
        for (std::size_t i = 0; i < g.size(); ++i) t[i] = g.at(i);
    });
}

aqi_status aqi_ensemble_field(const aqi_ensemble* e, size_t k, double* out) {
    return guard([&] {
        need(e, "ensemble");
        need(out, "e");
        if (k >= e->value.samples.size()) aqi::fail(aqi::ErrorCode::argument, "sample index out of range", "k");
        const auto& g = e->value.config.time_grid;
        for (std::size_t i = 0; i < g.size(); ++i)
            out[i] = aqi::realize_field(e->value.samples[k], e->value.config, g.at(i));
    });
}

aqi_status aqi_ensemble_dipole(const aqi_ensemble* e, size_t k, double* d) {
    return guard([&] {
        need(e, "ensemble");
        need(d, "d");
        if (k >= e->value.records.size()) aqi::fail(aqi::ErrorCode::argument, "sample index out of range", "k");
        const auto& r = e->value.records[k].d_t;
        std::copy(r.begin(), r.end(), d);
    });
}

aqi_status aqi_ensemble_mean_dipole(const aqi_ensemble* e, double* d) {
    return guard([&] {
        need(e, "ensemble");
        need(d, "d");
        const auto m = aqi::ensemble_dipole(e->value.samples, e->value.records);
        std::copy(m.begin(), m.end(), d);
    });
}

size_t aqi_ensemble_orders(const aqi_ensemble* e) {
    return e && !e->value.records.empty() ? e->value.records[0].q_values.size() : 0;
}

aqi_status aqi_ensemble_spectrum(const aqi_ensemble* e, size_t k, double* q, double* re, double* im) {
    return guard([&] {
        need(e, "ensemble");
        if (k >= e->value.records.size()) aqi::fail(aqi::ErrorCode::argument, "sample index out of range", "k");
        const auto& r = e->value.records[k];
        for (std::size_t i = 0; i < r.q_values.size(); ++i) {
            if (q) q[i] = r.q_values[i];
            if (re) re[i] = r.spectrum[i].real();
            if (im) im[i] = r.spectrum[i].imag();
        }
    });
}

int aqi_ensemble_window(const aqi_ensemble* e) {
    return e && !e->value.records.empty() && e->value.records[0].window == aqi::SpectralWindow::hann ? 1 : 0;
}

int aqi_ensemble_measured_cutoff(const aqi_ensemble* e, size_t k) {
    if (!e || k >= e->value.records.size()) return 0;
    return aqi::measured_cutoff(e->value.records[k]);
}

aqi_status aqi_ensemble_calibrate_rho(const aqi_ensemble* e, double* rho) {
    return guard([&] {
        need(e, "ensemble");
        need(rho, "rho");
        *rho = aqi::calibrate_rho(e->value.records, e->value.samples);
    });
}

aqi_status aqi_resolve_rho(const aqi_config* config, const aqi_run_options* opts, double* rho) {
    return guard([&] {
        need(config, "config");
        need(rho, "rho");
        std::optional<aqi::DipoleCache> cache;
        *rho = aqi::resolve_rho(config->value, ensemble_options(opts, cache));
    });
}

aqi_status aqi_mixture_from_ensemble(const aqi_ensemble* e, double q, double rho, aqi_mixture** out) {
    return guard([&] {
        need(e, "ensemble");
        need(out, "out");
        if (!(rho > 0.0)) aqi::fail(aqi::ErrorCode::argument, "rho must be positive", "rho");
        *out = new aqi_mixture{aqi::build_mixture(q, e->value, rho)};
    });
}

aqi_status aqi_mixture_from_components(size_t n, const double* w, const double* re, const double* im, double q,
                                       aqi_mixture** out) {
    return guard([&] {
        need(out, "out");
        const auto weights = copy(w, n, "weights");
        const auto r = copy(re, n, "re"), i = copy(im, n, "im");
        std::vector<aqi::cplx> betas(n);
        for (std::size_t k = 0; k < n; ++k) betas[k] = {r[k], i[k]};
        *out = new aqi_mixture{aqi::make_mixture(weights, betas, q)};
    });
}

void aqi_mixture_free(aqi_mixture* m) { delete m; }

size_t aqi_mixture_size(const aqi_mixture* m) { return m ? m->value.size() : 0; }

aqi_status aqi_mixture_component(const aqi_mixture* m, size_t k, size_t* id, double* w, double* re, double* im) {
    return guard([&] {
        need(m, "mixture");
        if (k >= m->value.size()) aqi::fail(aqi::ErrorCode::argument, "component index out of range", "k");
        const auto& c = m->value.components[k];
        if (id) *id = c.sample_id;
        if (w) *w = c.weight;
        if (re) *re = c.beta.real();
        if (im) *im = c.beta.imag();
    });
}

aqi_status aqi_mean_photon(const aqi_mixture* m, double* v) {
    return guard([&] {
        need(m, "mixture");
        need(v, "value");
        *v = aqi::mean_photon(m->value);
    });
}

aqi_status aqi_quadrature_variance(const aqi_mixture* m, double theta, double* v) {
    return guard([&] {
        need(m, "mixture");
        need(v, "value");
        *v = aqi::quadrature_variance(m->value, theta);
    });
}

aqi_status aqi_variance_extrema_of(const aqi_mixture* m, aqi_variance_extrema* out) {
    return guard([&] {
        need(m, "mixture");
        need(out, "out");
        const auto st = aqi::variance_extrema(m->value);
        *out = {st.var_min, st.var_max, st.theta_min, st.theta_max};
    });
}

aqi_status aqi_g2(const aqi_mixture* m1, const aqi_mixture* m2, double* v) {
    return guard([&] {
        need(m1, "m1");
        need(m2, "m2");
        need(v, "value");
        *v = aqi::g2_pair(m1->value, m2->value);
    });
}

aqi_status aqi_linear_entropy(const aqi_mixture* m, double* v) {
    return guard([&] {
        need(m, "mixture");
        need(v, "value");
        *v = aqi::linear_entropy(m->value);
    });
}

aqi_status aqi_csi_matrix(const aqi_mixture* const* mixtures, size_t n, unsigned jobs, double* g2, double* csi) {
    return guard([&] {
        need(mixtures, "mixtures");
        std::vector<aqi::HarmonicMixture> ms;
        for (std::size_t i = 0; i < n; ++i) {
            need(mixtures[i], "mixtures[i]");
            ms.push_back(mixtures[i]->value);
        }
        const auto cm = aqi::csi_matrix(ms, jobs);
        if (g2) std::copy(cm.g2.begin(), cm.g2.end(), g2);
        if (csi) std::copy(cm.delta_csi.begin(), cm.delta_csi.end(), csi);
    });
}

aqi_status aqi_wigner_axis(const aqi_mixture* m, size_t n_points, double* axis) {
    return guard([&] {
        need(m, "mixture");
        need(axis, "axis");
        const auto a = aqi::default_wigner_axis(m->value, n_points);
        std::copy(a.begin(), a.end(), axis);
    });
}

aqi_status aqi_wigner_grid(const aqi_mixture* m, const double* x, size_t nx, const double* p, size_t np,
                           unsigned jobs, double* values) {
    return guard([&] {
        need(m, "mixture");
        need(values, "values");
        const auto g = aqi::wigner_grid(m->value, copy(x, nx, "x"), copy(p, np, "p"), jobs);
        std::copy(g.values.begin(), g.values.end(), values);
    });
}

aqi_status aqi_wigner_max_angle(const double* x, size_t nx, const double* p, size_t np, const double* values,
                                double* angle) {
    return guard([&] {
        need(angle, "angle");
        aqi::PhaseSpaceGrid g{copy(x, nx, "x"), copy(p, np, "p"), copy(values, nx * np, "values")};
        *angle = aqi::wigner_maximum_angle(g);
    });
}

aqi_status aqi_fock_density(const aqi_mixture* m, size_t n_cutoff, double* re, double* im, double* deficit) {
    return guard([&] {
        need(m, "mixture");
        const auto fd = aqi::fock_density(m->value, n_cutoff, warning_sink());
        const auto n = static_cast<Eigen::Index>(n_cutoff);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto idx = static_cast<std::size_t>(i * n + j);
                if (re) re[idx] = fd.matrix(i, j).real();
                if (im) im[idx] = fd.matrix(i, j).imag();
            }
        if (deficit) *deficit = fd.trace_deficit;
    });
}

aqi_status aqi_quadrature_pdf(const aqi_mixture* m, double theta, aqi_pdf_method method, size_t n_cutoff,
                              const double* x, size_t nx, double* pdf) {
    return guard([&] {
        need(m, "mixture");
        need(pdf, "pdf");
        const auto v = aqi::quadrature_pdf(m->value, theta, copy(x, nx, "x"), pdf_method(method),
                                           n_cutoff ? n_cutoff : aqi::default_fock_cutoff, warning_sink());
        std::copy(v.begin(), v.end(), pdf);
    });
}

aqi_status aqi_sample_outcomes(const double* x, const double* pdf, size_t n, size_t n_shots, uint64_t seed,
                               double* outcomes) {
    return guard([&] {
        need(outcomes, "outcomes");
        const auto v = aqi::sample_outcomes(copy(x, n, "x"), copy(pdf, n, "pdf"), n_shots, seed);
        std::copy(v.begin(), v.end(), outcomes);
    });
}

namespace {

aqi_trace_options resolved(const aqi_trace_options* o) {
    aqi_trace_options r{aqi::default_phase_settings, aqi::default_shots, 0, AQI_PDF_FOCK, aqi::default_fock_cutoff};
    if (o) {
        r = *o;
        if (!r.n_phases) r.n_phases = aqi::default_phase_settings;
        if (!r.n_shots) r.n_shots = aqi::default_shots;
        if (!r.n_cutoff) r.n_cutoff = aqi::default_fock_cutoff;
    }
    return r;
}

}  // namespace

aqi_status aqi_trace_collect(const aqi_config* config, const aqi_run_options* opts, double q, double theta,
                             const aqi_trace_options* trace_opts, aqi_trace** out) {
    return guard([&] {
        need(config, "config");
        need(out, "out");
        const auto o = resolved(trace_opts);
        std::optional<aqi::DipoleCache> cache;
        aqi::TraceOptions to;
        to.ensemble = ensemble_options(opts, cache);
        to.method = pdf_method(o.method);
        to.n_cutoff = o.n_cutoff;
        aqi::validate(config->value);
        *out = new aqi_trace{aqi::collect_aqt_trace(config->value, q, theta, o.n_phases, o.n_shots, o.seed, to)};
    });
}

aqi_status aqi_trace_rotated(const aqi_mixture* m, const aqi_trace_options* trace_opts, aqi_trace** out) {
    return guard([&] {
        need(m, "mixture");
        need(out, "out");
        const auto o = resolved(trace_opts);
        *out = new aqi_trace{aqi::rotated_state_trace(m->value, o.n_phases, o.n_shots, o.seed, pdf_method(o.method))};
    });
}

void aqi_trace_free(aqi_trace* t) { delete t; }

size_t aqi_trace_phases(const aqi_trace* t) { return t ? t->value.phi_values.size() : 0; }
size_t aqi_trace_shots(const aqi_trace* t) { return t ? t->value.n_shots : 0; }

aqi_status aqi_trace_phi(const aqi_trace* t, double* phi) {
    return guard([&] {
        need(t, "trace");
        need(phi, "phi");
        std::copy(t->value.phi_values.begin(), t->value.phi_values.end(), phi);
    });
}

aqi_status aqi_trace_outcomes(const aqi_trace* t, size_t j, double* outcomes) {
    return guard([&] {
        need(t, "trace");
        need(outcomes, "outcomes");
        if (j >= t->value.outcomes.size()) aqi::fail(aqi::ErrorCode::argument, "phase index out of range", "j");
        std::copy(t->value.outcomes[j].begin(), t->value.outcomes[j].end(), outcomes);
    });
}

aqi_status aqi_trace_variance(const aqi_trace* t, size_t n_boot, uint64_t seed, double* variance, double* error) {
    return guard([&] {
        need(t, "trace");
        const auto est = aqi::trace_variance(t->value, n_boot, seed);
        if (variance) *variance = est.variance;
        if (error) *error = est.error;
    });
}

aqi_status aqi_inverse_radon(const aqi_trace* t, const double* x, size_t nx, const double* p, size_t np, double k_c,
                             int subtract_mean, unsigned jobs, double* values) {
    return guard([&] {
        need(t, "trace");
        need(values, "values");
        const auto g = aqi::inverse_radon(t->value, copy(x, nx, "x"), copy(p, np, "p"), k_c, subtract_mean != 0, jobs);
        std::copy(g.grid.values.begin(), g.grid.values.end(), values);
    });
}

double aqi_radon_kernel(double u, double k_c) { return aqi::radon_kernel(u, k_c); }

aqi_status aqi_ensemble_gabor(const aqi_ensemble* e, double delta, const double* tau, size_t n_tau,
                              const double* omega, size_t n_omega, unsigned jobs, double* magnitude) {
    return guard([&] {
        need(e, "ensemble");
        need(magnitude, "magnitude");
        const auto g = aqi::ensemble_gabor(e->value.config, e->value.samples, e->value.records, delta,
                                           copy(tau, n_tau, "tau"), copy(omega, n_omega, "omega"), jobs);
        std::copy(g.magnitude.begin(), g.magnitude.end(), magnitude);
    });
}

aqi_status aqi_sigma_inversion(double I_odd, double I_even, double I_0, double* sx, double* sy) {
    return guard([&] {
        const auto s = aqi::sigma_inversion(I_odd, I_even, I_0);
        if (sx) *sx = s.sigma_x;
        if (sy) *sy = s.sigma_y;
    });
}

aqi_status aqi_intensity_model(double sx, double sy, double I_0, int odd, double* intensity) {
    return guard([&] {
        need(intensity, "intensity");
        *intensity = aqi::intensity_model({sx, sy}, I_0, odd ? aqi::Parity::odd : aqi::Parity::even);
    });
}

aqi_status aqi_homodyne_probe(const aqi_ensemble* e, const aqi_mixture* m, const double* theta, size_t n,
                              double* values, double* amplitude, double* phase) {
    return guard([&] {
        need(e, "ensemble");
        need(m, "mixture");
        const auto p = aqi::homodyne_sigma_probe(m->value, e->value.records, e->value.samples, copy(theta, n, "theta"));
        if (values) std::copy(p.value.begin(), p.value.end(), values);
        if (amplitude) *amplitude = p.amplitude;
        if (phase) *phase = p.phase;
    });
}

}  // extern "C"
