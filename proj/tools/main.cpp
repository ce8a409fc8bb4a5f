#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aqi/aqi.h"
#include "output.hpp"

namespace {

using aqi_cli::Csv;
using aqi_cli::ordered_json;
using aqi_cli::RunOutputs;

constexpr double pi = std::numbers::pi;

struct Failure {
    aqi_status status;
    std::string message;
    std::string field;
};

void check(aqi_status s) {
    if (s != AQI_OK) throw Failure{s, aqi_last_error(), aqi_last_error_field()};
}

int exit_code(aqi_status s) {
    switch (s) {
        case AQI_OK: return 0;
        case AQI_E_ARGUMENT:
        case AQI_E_VALIDATION:
        case AQI_E_IO:
        case AQI_E_DOMAIN:
        case AQI_E_INVERSION_DOMAIN:
        case AQI_E_INSUFFICIENT_PROJECTIONS: return 2;
        case AQI_E_NUMERICAL:
        case AQI_E_TRUNCATION:
        case AQI_E_UNDEFINED_CORRELATION: return 3;
        case AQI_E_CACHE: return 4;
        case AQI_E_INTERNAL: return 1;
    }
    return 1;
}

struct ConfigDel { void operator()(aqi_config* p) const { aqi_config_free(p); } };
struct EnsembleDel { void operator()(aqi_ensemble* p) const { aqi_ensemble_free(p); } };
struct MixtureDel { void operator()(aqi_mixture* p) const { aqi_mixture_free(p); } };
struct TraceDel { void operator()(aqi_trace* p) const { aqi_trace_free(p); } };
using Config = std::unique_ptr<aqi_config, ConfigDel>;
using Ensemble = std::unique_ptr<aqi_ensemble, EnsembleDel>;
using Mixture = std::unique_ptr<aqi_mixture, MixtureDel>;
using Trace = std::unique_ptr<aqi_trace, TraceDel>;

struct Globals {
    std::string config_path;
    std::string cache_dir;
    unsigned jobs = 0;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
};

class Session {
public:
    explicit Session(const Globals& g) : g_(g) {
        aqi_config* c = nullptr;
        check(g.config_path.empty() ? aqi_config_default(&c) : aqi_config_load(g.config_path.c_str(), &c));
        config_.reset(c);
        opts_.cache_dir = g_.cache_dir.empty() ? nullptr : g_.cache_dir.c_str();
        opts_.jobs = g_.jobs;
    }

    aqi_config* config() { return config_.get(); }
    const aqi_run_options* options() const { return &opts_; }
    const Globals& globals() const { return g_; }

    double get(const char* key) const {
        double v = 0.0;
        check(aqi_config_get(config_.get(), key, &v));
        return v;
    }
    void set(const char* key, double v) { check(aqi_config_set(config_.get(), key, v)); }

    void validate() { check(aqi_config_validate(config_.get(), nullptr)); }

    std::string json() const {
        std::size_t n = 0;
        check(aqi_config_to_json(config_.get(), nullptr, 0, &n));
        std::string s(n + 1, '\0');
        check(aqi_config_to_json(config_.get(), s.data(), s.size(), &n));
        s.resize(n);
        return s;
    }

    std::string hash() const {
        char h[17];
        check(aqi_config_hash(config_.get(), h));
        return h;
    }

    Ensemble ensemble_at(double phi) {
        set("phi", phi);
        aqi_ensemble* e = nullptr;
        check(aqi_ensemble_compute(config_.get(), &opts_, &e));
        return Ensemble(e);
    }

    // Coupling shared by every phase of a run.
    double rho() {
        if (rho_) return *rho_;
        const double given = get("rho_coupling");
        if (given > 0.0) {
            rho_ = given;
        } else {
            double r = 0.0;
            check(aqi_resolve_rho(config_.get(), &opts_, &r));
            rho_ = r;
        }
        return *rho_;
    }

    RunOutputs outputs(const std::string& sub) { return RunOutputs(g_.out_dir, sub, hash(), json()); }

private:
    Globals g_;
    Config config_;
    aqi_run_options opts_{};
    std::optional<double> rho_;
};

Mixture mixture_of(const aqi_ensemble* e, double q, double rho) {
    aqi_mixture* m = nullptr;
    check(aqi_mixture_from_ensemble(e, q, rho, &m));
    return Mixture(m);
}

std::vector<double> default_orders(Session& s) {
    std::vector<double> q;
    const int top = aqi_cutoff_estimate(s.config()) + 6;
    for (int k = 2; k <= top; ++k) q.push_back(k);
    return q;
}

std::vector<double> phase_grid(std::size_t n) {
    std::vector<double> phi(n);
    for (std::size_t j = 0; j < n; ++j) phi[j] = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
    return phi;
}

void need_positive(std::size_t v, const char* flag) {
    if (v == 0) throw Failure{AQI_E_VALIDATION, std::string(flag) + " must be positive", flag};
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
    bool dump_field = false;
};

void run_spectrum(Session& s, const SpectrumArgs& a) {
    auto out = s.outputs("spectrum");
    const double phi = s.get("phi");
    auto e = out.timed("dipoles", [&] { return s.ensemble_at(phi); });
    const std::size_t n = aqi_ensemble_size(e.get()), nq = aqi_ensemble_orders(e.get());
    Csv csv({"sample", "q", "intensity", "phase"});
    std::vector<double> q(nq), re(nq), im(nq), mean_re(nq, 0.0), mean_im(nq, 0.0), mean_int(nq, 0.0);
    std::size_t central = 0;
    double best_w = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        double w = 0.0;
        check(aqi_ensemble_sample(e.get(), k, nullptr, nullptr, &w));
        if (w > best_w) best_w = w, central = k;
        check(aqi_ensemble_spectrum(e.get(), k, q.data(), re.data(), im.data()));
        for (std::size_t i = 0; i < nq; ++i) {
            csv.row(std::to_string(k), q[i], re[i] * re[i] + im[i] * im[i], std::atan2(im[i], re[i]));
            mean_re[i] += w * re[i];
            mean_im[i] += w * im[i];
            mean_int[i] += w * (re[i] * re[i] + im[i] * im[i]);
        }
    }
    for (std::size_t i = 0; i < nq; ++i) csv.row("mean", q[i], mean_int[i], std::atan2(mean_im[i], mean_re[i]));
    out.add_csv("spectrum.csv", csv);
    if (a.dump_field) {
        Csv field({"sample", "t", "E"});
        const std::size_t nt = aqi_ensemble_time_points(e.get());
        std::vector<double> t(nt), ef(nt);
        check(aqi_ensemble_times(e.get(), t.data()));
        for (std::size_t k = 0; k < n; ++k) {
            check(aqi_ensemble_field(e.get(), k, ef.data()));
            for (std::size_t i = 0; i < nt; ++i) field.row(k, t[i], ef[i]);
        }
        out.add_csv("field.csv", field);
    }
    out.add_sidecar("spectrum.json",
                    {{"phi", phi},
                     {"window", aqi_ensemble_window(e.get()) ? "hann" : "none"},
                     {"samples", n},
                     {"columns", {"sample (index or mean)", "q", "|d(q w)|^2", "arg d(q w)"}},
                     {"ensemble_mean", "intensity is sum_k w_k |d_k|^2, phase is arg sum_k w_k d_k"},
                     {"cutoff_estimate", aqi_cutoff_estimate(s.config())},
                     {"measured_cutoff_central_sample", aqi_ensemble_measured_cutoff(e.get(), central)}});
    out.publish(aqi_version());
}

struct OrdersArgs {
    std::vector<double> q;
};

void run_states(Session& s, const OrdersArgs& a) {
    auto out = s.outputs("states");
    const double phi = s.get("phi");
    auto e = out.timed("dipoles", [&] { return s.ensemble_at(phi); });
    const double rho = s.rho();
    const auto orders = a.q.empty() ? default_orders(s) : a.q;
    Csv csv({"q", "sample_id", "weight", "re_beta", "im_beta"});
    for (double q : orders) {
        auto m = mixture_of(e.get(), q, rho);
        for (std::size_t k = 0; k < aqi_mixture_size(m.get()); ++k) {
            std::size_t id = 0;
            double w = 0, re = 0, im = 0;
            check(aqi_mixture_component(m.get(), k, &id, &w, &re, &im));
            csv.row(q, id, w, re, im);
        }
    }
    out.add_csv("states.csv", csv);
    out.add_sidecar("states.json", {{"phi", phi}, {"rho_coupling", rho}, {"q", orders}});
    out.publish(aqi_version());
}

struct WignerArgs {
    double q = 12;
    std::size_t points = 201;
};

void run_wigner(Session& s, const WignerArgs& a) {
    need_positive(a.points, "--points");
    auto out = s.outputs("wigner");
    const double phi = s.get("phi");
    auto e = out.timed("dipoles", [&] { return s.ensemble_at(phi); });
    auto m = mixture_of(e.get(), a.q, s.rho());
    std::vector<double> axis(a.points), w(a.points * a.points);
    check(aqi_wigner_axis(m.get(), a.points, axis.data()));
    out.timed("wigner", [&] {
        check(aqi_wigner_grid(m.get(), axis.data(), a.points, axis.data(), a.points, s.globals().jobs, w.data()));
    });
    double angle = 0.0;
    check(aqi_wigner_max_angle(axis.data(), a.points, axis.data(), a.points, w.data(), &angle));
    Csv csv({"x", "p", "W"});
    for (std::size_t i = 0; i < a.points; ++i)
        for (std::size_t j = 0; j < a.points; ++j) csv.row(axis[i], axis[j], w[i * a.points + j]);
    out.add_csv("wigner.csv", csv);
    out.add_sidecar("wigner.json", {{"q", a.q},
                                    {"phi", phi},
                                    {"rho_coupling", s.rho()},
                                    {"x_axis", {{"min", axis.front()}, {"max", axis.back()}, {"n", a.points}}},
                                    {"p_axis", {{"min", axis.front()}, {"max", axis.back()}, {"n", a.points}}},
                                    {"maximum_angle", angle}});
    out.publish(aqi_version());
}

void matrix_csv(Csv& csv, const std::vector<double>& q, const std::vector<double>& v) {
    const std::size_t n = q.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::string line = aqi_cli::num(q[i]);
        for (std::size_t j = 0; j < n; ++j) line += "," + aqi_cli::num(v[i * n + j]);
        csv.row(line);
    }
}

void run_correlations(Session& s, const OrdersArgs& a) {
    auto out = s.outputs("correlations");
    const double phi = s.get("phi");
    auto e = out.timed("dipoles", [&] { return s.ensemble_at(phi); });
    const double rho = s.rho();
    const auto orders = a.q.empty() ? default_orders(s) : a.q;
    std::vector<Mixture> ms;
    std::vector<const aqi_mixture*> raw;
    for (double q : orders) {
        ms.push_back(mixture_of(e.get(), q, rho));
        raw.push_back(ms.back().get());
    }
    const std::size_t n = orders.size();
    std::vector<double> g2(n * n), csi(n * n);
    out.timed("correlations", [&] { check(aqi_csi_matrix(raw.data(), n, s.globals().jobs, g2.data(), csi.data())); });
    std::vector<std::string> header{"q"};
    for (double q : orders) header.push_back(aqi_cli::num(q));
    Csv g2csv(header), csicsv(header);
    matrix_csv(g2csv, orders, g2);
    matrix_csv(csicsv, orders, csi);
    out.add_csv("g2.csv", g2csv);
    out.add_csv("csi.csv", csicsv);
    out.add_sidecar("correlations.json", {{"phi", phi},
                                          {"rho_coupling", rho},
                                          {"q", orders},
                                          {"layout", "rows and columns indexed by q; nan marks undefined entries"}});
    out.publish(aqi_version());
}

struct SweepArgs {
    std::vector<double> q;
    std::size_t phases = 20;
};

void run_entropy(Session& s, const SweepArgs& a) {
    need_positive(a.phases, "--phases");
    auto out = s.outputs("entropy");
    const auto orders = a.q.empty() ? default_orders(s) : a.q;
    const double rho = s.rho();
    Csv csv({"phi", "q", "S_lin"});
    for (double phi : phase_grid(a.phases)) {
        auto e = out.timed("dipoles phi=" + aqi_cli::num(phi), [&] { return s.ensemble_at(phi); });
        for (double q : orders) {
            auto m = mixture_of(e.get(), q, rho);
            double v = 0.0;
            check(aqi_linear_entropy(m.get(), &v));
            csv.row(phi, q, v);
        }
    }
    out.add_csv("entropy.csv", csv);
    out.add_sidecar("entropy.json", {{"phases", a.phases}, {"rho_coupling", rho}, {"q", orders}});
    out.publish(aqi_version());
}

void run_sweep(Session& s, const SweepArgs& a) {
    need_positive(a.phases, "--phases");
    auto out = s.outputs("sweep-phi");
    const auto orders = a.q.empty() ? std::vector<double>{12, 16} : a.q;
    const double rho = s.rho();
    std::vector<std::string> header{"phi"};
    for (double q : orders)
        for (const char* col : {"var_min", "var_max", "theta_max", "g2", "S_lin", "mean_photon", "wigner_angle"})
            header.push_back(std::string(col) + "_q" + aqi_cli::num(q));
    Csv csv(header);
    for (double phi : phase_grid(a.phases)) {
        auto e = out.timed("dipoles phi=" + aqi_cli::num(phi), [&] { return s.ensemble_at(phi); });
        std::string line = aqi_cli::num(phi);
        for (double q : orders) {
            auto m = mixture_of(e.get(), q, rho);
            aqi_variance_extrema ve{};
            double g2 = 0, sl = 0, n = 0, angle = 0;
            check(aqi_variance_extrema_of(m.get(), &ve));
            check(aqi_g2(m.get(), m.get(), &g2));
            check(aqi_linear_entropy(m.get(), &sl));
            check(aqi_mean_photon(m.get(), &n));
            constexpr std::size_t np = 201;
            std::vector<double> axis(np), w(np * np);
            check(aqi_wigner_axis(m.get(), np, axis.data()));
            check(aqi_wigner_grid(m.get(), axis.data(), np, axis.data(), np, s.globals().jobs, w.data()));
            check(aqi_wigner_max_angle(axis.data(), np, axis.data(), np, w.data(), &angle));
            for (double v : {ve.var_min, ve.var_max, ve.theta_max, g2, sl, n, angle}) line += "," + aqi_cli::num(v);
        }
        csv.row(line);
    }
    out.add_csv("sweep_phi.csv", csv);
    out.add_sidecar("sweep_phi.json",
                    {{"phases", a.phases},
                     {"rho_coupling", rho},
                     {"q", orders},
                     {"columns", "per q: min/max quadrature variance, angle of the maximum, g2_qq, linear entropy, "
                                 "mean photon number, Wigner maximum angle"}});
    out.publish(aqi_version());
}

struct TomographyArgs {
    double q = 12;
    double theta = 0;
    std::size_t phases = 20;
    std::size_t shots = 500;
    double k_c = 3.0;
    std::string method = "fock";
    bool subtract_mean = false;
    std::size_t grid_points = 101;
    std::vector<double> variance_thetas;
};

void run_tomography(Session& s, const TomographyArgs& a) {
    need_positive(a.grid_points, "--grid-points");
    auto out = s.outputs("tomography");
    const auto seed = s.globals().seed;
    out.seed("trace", seed);
    out.seed("bootstrap", seed);
    aqi_trace_options to{a.phases, a.shots, seed, a.method == "analytic" ? AQI_PDF_ANALYTIC : AQI_PDF_FOCK, 0};
    aqi_trace* raw = nullptr;
    out.timed("trace", [&] { check(aqi_trace_collect(s.config(), s.options(), a.q, a.theta, &to, &raw)); });
    Trace tr(raw);
    const std::size_t np = aqi_trace_phases(tr.get()), ns = aqi_trace_shots(tr.get());
    std::vector<double> phi(np), shots(ns);
    check(aqi_trace_phi(tr.get(), phi.data()));
    Csv trace_csv({"phi", "shot_index", "outcome"});
    double reach = 0.0;
    for (std::size_t j = 0; j < np; ++j) {
        check(aqi_trace_outcomes(tr.get(), j, shots.data()));
        for (std::size_t k = 0; k < ns; ++k) {
            trace_csv.row(phi[j], k, shots[k]);
            reach = std::max(reach, std::abs(shots[k]));
        }
    }
    out.add_csv("trace.csv", trace_csv);

    std::vector<double> axis(a.grid_points), w(a.grid_points * a.grid_points);
    const double half = reach + 1.0;
    for (std::size_t i = 0; i < a.grid_points; ++i)
        axis[i] = a.grid_points == 1 ? 0.0
                                     : -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(a.grid_points - 1);
    out.timed("inverse_radon", [&] {
        check(aqi_inverse_radon(tr.get(), axis.data(), a.grid_points, axis.data(), a.grid_points, a.k_c,
                                a.subtract_mean, s.globals().jobs, w.data()));
    });
    Csv grid_csv({"x", "p", "W"});
    for (std::size_t i = 0; i < a.grid_points; ++i)
        for (std::size_t j = 0; j < a.grid_points; ++j) grid_csv.row(axis[i], axis[j], w[i * a.grid_points + j]);
    out.add_csv("aqt_grid.csv", grid_csv);

    double var = 0, err = 0;
    check(aqi_trace_variance(tr.get(), 200, seed, &var, &err));
    ordered_json meta{{"q", a.q},
                      {"theta", a.theta},
                      {"n_phases", np},
                      {"n_shots", ns},
                      {"k_c", a.k_c},
                      {"pdf_method", a.method},
                      {"subtract_mean", a.subtract_mean},
                      {"seed", seed},
                      {"grid", {{"min", axis.front()}, {"max", axis.back()}, {"n", a.grid_points}}},
                      {"variance", var},
                      {"variance_bootstrap_error", err}};
    if (!a.variance_thetas.empty()) {
        Csv vcsv({"theta", "variance", "bootstrap_error"});
        for (std::size_t i = 0; i < a.variance_thetas.size(); ++i) {
            aqi_trace_options vo = to;
            vo.seed = seed + 1 + i;
            aqi_trace* vr = nullptr;
            check(aqi_trace_collect(s.config(), s.options(), a.q, a.variance_thetas[i], &vo, &vr));
            Trace vt(vr);
            double v = 0, e = 0;
            check(aqi_trace_variance(vt.get(), 200, vo.seed, &v, &e));
            vcsv.row(a.variance_thetas[i], v, e);
            out.seed("variance_theta_" + std::to_string(i), vo.seed);
        }
        out.add_csv("variance.csv", vcsv);
    }
    out.add_sidecar("tomography.json", meta);
    out.publish(aqi_version());
}

struct GaborArgs {
    double delta = 6.0;
    std::optional<double> phi;
    bool coherent = false;
    std::size_t tau_points = 200;
    double q_min = 6, q_max = 30, dq = 0.25;
};

void run_gabor(Session& s, const GaborArgs& a) {
    need_positive(a.tau_points, "--tau-points");
    if (a.coherent) {
        check(aqi_config_set_option(s.config(), "squeezing.kind", "coherent"));
        s.set("squeezing.I_squ", 0.0);
    }
    s.validate();
    auto out = s.outputs("gabor");
    const double phi = a.phi.value_or(s.get("phi"));
    auto e = out.timed("dipoles", [&] { return s.ensemble_at(phi); });
    const double omega = s.get("omega");
    const double t0 = s.get("time_grid.t_start"), t1 = s.get("time_grid.t_end");
    std::vector<double> tau(a.tau_points), om, qs;
    for (std::size_t i = 0; i < a.tau_points; ++i)
        tau[i] = a.tau_points == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(a.tau_points - 1);
    if (!(a.dq > 0.0) || a.q_max < a.q_min) throw Failure{AQI_E_VALIDATION, "bad harmonic range", "--dq"};
    for (double q = a.q_min; q <= a.q_max + 1e-9; q += a.dq) {
        qs.push_back(q);
        om.push_back(q * omega);
    }
    std::vector<double> mag(tau.size() * om.size());
    out.timed("gabor", [&] {
        check(aqi_ensemble_gabor(e.get(), a.delta, tau.data(), tau.size(), om.data(), om.size(), s.globals().jobs,
                                 mag.data()));
    });
    Csv csv({"tau", "q", "magnitude"});
    for (std::size_t i = 0; i < tau.size(); ++i)
        for (std::size_t j = 0; j < om.size(); ++j) csv.row(tau[i], qs[j], mag[i * om.size() + j]);
    out.add_csv("gabor.csv", csv);
    out.add_sidecar("gabor.json", {{"phi", phi},
                                   {"delta", a.delta},
                                   {"squeezing", a.coherent ? "coherent" : "config"},
                                   {"columns", {"tau (a.u.)", "omega/omega_0", "|G|"}}});
    out.publish(aqi_version());
}

struct SigmaArgs {
    int q_min = 9, q_max = 21;
    std::size_t thetas = 16;
};

void run_sigma(Session& s, const SigmaArgs& a) {
    need_positive(a.thetas, "--probe-thetas");
    if (a.q_min < 1 || a.q_max <= a.q_min) throw Failure{AQI_E_VALIDATION, "need 1 <= q-min < q-max", "--q-min"};
    auto out = s.outputs("sigma");
    const double phi = s.get("phi");
    auto e = out.timed("dipoles", [&] { return s.ensemble_at(phi); });
    // Reference run without the 2w field fixes I_0.
    aqi_config* ref_raw = nullptr;
    check(aqi_config_clone(s.config(), &ref_raw));
    Config ref(ref_raw);
    check(aqi_config_set(ref.get(), "epsilon_ratio", 0.0));
    check(aqi_config_set_option(ref.get(), "squeezing.kind", "coherent"));
    check(aqi_config_set(ref.get(), "squeezing.I_squ", 0.0));
    aqi_ensemble* ref_e = nullptr;
    out.timed("reference", [&] { check(aqi_ensemble_compute(ref.get(), s.options(), &ref_e)); });
    Ensemble ref_ens(ref_e);

    auto intensity = [](const aqi_ensemble* en, double q) {
        const std::size_t nq = aqi_ensemble_orders(en);
        std::vector<double> qs(nq), re(nq), im(nq);
        double acc = 0.0;
        for (std::size_t k = 0; k < aqi_ensemble_size(en); ++k) {
            double w = 0.0;
            check(aqi_ensemble_sample(en, k, nullptr, nullptr, &w));
            check(aqi_ensemble_spectrum(en, k, qs.data(), re.data(), im.data()));
            const auto i = static_cast<std::size_t>(std::lround(2.0 * q));
            if (i >= nq) throw Failure{AQI_E_ARGUMENT, "harmonic beyond the computed spectrum", "--q-max"};
            acc += w * (re[i] * re[i] + im[i] * im[i]);
        }
        return acc;
    };

    Csv csv({"q_odd", "q_even", "I_odd", "I_even", "I_0", "sigma_x", "sigma_y", "status"});
    const int first = a.q_min % 2 ? a.q_min : a.q_min + 1;
    for (int q = first; q + 1 <= a.q_max; q += 2) {
        const double io = intensity(e.get(), q), ie = intensity(e.get(), q + 1), i0 = intensity(ref_ens.get(), q);
        double sx = 0, sy = 0;
        const auto st = aqi_sigma_inversion(io, ie, i0, &sx, &sy);
        if (st == AQI_OK)
            csv.row(q, q + 1, io, ie, i0, sx, sy, "ok");
        else if (st == AQI_E_INVERSION_DOMAIN)
            csv.row(q, q + 1, io, ie, i0, std::nan(""), std::nan(""), aqi_status_name(st));
        else
            check(st);
    }
    out.add_csv("sigma.csv", csv);

    const double rho = s.rho();
    std::vector<double> th(a.thetas), vals(a.thetas);
    for (std::size_t i = 0; i < a.thetas; ++i) th[i] = 2.0 * pi * static_cast<double>(i) / static_cast<double>(a.thetas);
    Csv probe({"q", "theta", "value"});
    ordered_json fits = ordered_json::array();
    for (int q = first + 1; q <= a.q_max; q += 2) {
        auto m = mixture_of(e.get(), q, rho);
        double amp = 0, ph = 0;
        check(aqi_homodyne_probe(e.get(), m.get(), th.data(), th.size(), vals.data(), &amp, &ph));
        for (std::size_t i = 0; i < th.size(); ++i) probe.row(q, th[i], vals[i]);
        fits.push_back({{"q", q}, {"amplitude", amp}, {"phase", ph}});
    }
    out.add_csv("homodyne_probe.csv", probe);
    out.add_sidecar("sigma.json", {{"phi", phi},
                                   {"I_0", "odd-harmonic intensity of the same config with epsilon_ratio = 0"},
                                   {"probe", fits},
                                   {"probe_note", "phase is relative to the unknown dipole phase arg(x)"}});
    out.publish(aqi_version());
}

void report(const Failure& f) {
    ordered_json doc{{"status", aqi_status_name(f.status)}, {"field", f.field}, {"message", f.message}};
    std::cerr << doc.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Attosecond quantum interferometry simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "Driver config (JSON)")->check(CLI::ExistingFile);
    app.add_option("--cache-dir", g.cache_dir, "Dipole cache directory");
    app.add_option("--jobs", g.jobs, "Worker threads (0: all cores)");
    app.add_option("--seed", g.seed, "Base RNG seed");
    app.add_option("--out-dir", g.out_dir, "Output directory");

    SpectrumArgs spectrum;
    auto* sp = app.add_subcommand("spectrum", "Harmonic spectra per sample and ensemble mean");
    sp->add_flag("--dump-field", spectrum.dump_field, "Also write E(t) for every sample");

    OrdersArgs states, corr;
    auto* st = app.add_subcommand("states", "Coherent-mixture components per harmonic");
    st->add_option("--q", states.q, "Harmonic orders")->delimiter(',');
    auto* co = app.add_subcommand("correlations", "g2 and CSI-difference matrices");
    co->add_option("--q", corr.q, "Harmonic orders")->delimiter(',');

    WignerArgs wig;
    auto* wi = app.add_subcommand("wigner", "Wigner function of one harmonic");
    wi->add_option("--q", wig.q, "Harmonic order");
    wi->add_option("--points", wig.points, "Grid points per axis");

    SweepArgs ent, sweep;
    auto* en = app.add_subcommand("entropy", "Linear entropy against phi");
    en->add_option("--q", ent.q, "Harmonic orders")->delimiter(',');
    en->add_option("--phases", ent.phases, "Phase settings over [0, 2pi)");
    auto* sw = app.add_subcommand("sweep-phi", "Per-phase observable table");
    sw->add_option("--q", sweep.q, "Harmonic orders")->delimiter(',');
    sw->add_option("--phases", sweep.phases, "Phase settings over [0, 2pi)");

    TomographyArgs tomo;
    auto* to = app.add_subcommand("tomography", "AQT trace and inverse-Radon reconstruction");
    to->add_option("--q", tomo.q, "Harmonic order");
    to->add_option("--theta", tomo.theta, "Quadrature angle");
    to->add_option("--phases", tomo.phases, "Phase settings");
    to->add_option("--shots", tomo.shots, "Shots per phase");
    to->add_option("--k-c", tomo.k_c, "Radon frequency cutoff");
    to->add_option("--method", tomo.method, "Quadrature pdf: fock or analytic")
        ->check(CLI::IsMember({"fock", "analytic"}));
    to->add_flag("--subtract-mean", tomo.subtract_mean, "Remove the per-phase mean before reconstruction");
    to->add_option("--grid-points", tomo.grid_points, "Reconstruction grid points per axis");
    to->add_option("--variance-thetas", tomo.variance_thetas, "Angles for the variance table")->delimiter(',');

    GaborArgs gab;
    auto* ga = app.add_subcommand("gabor", "Gabor transform of the ensemble dipole");
    ga->add_option("--delta", gab.delta, "Window width (a.u.)");
    ga->add_option("--phi", gab.phi, "Two-color phase (overrides the config)");
    ga->add_flag("--coherent", gab.coherent, "Drop the squeezing of the 2w field");
    ga->add_option("--tau-points", gab.tau_points, "Window centres");
    ga->add_option("--q-min", gab.q_min, "Lowest harmonic order");
    ga->add_option("--q-max", gab.q_max, "Highest harmonic order");
    ga->add_option("--dq", gab.dq, "Order step");

    SigmaArgs sig;
    auto* si = app.add_subcommand("sigma", "Action-correction estimates and homodyne probe");
    si->add_option("--q-min", sig.q_min, "Lowest order");
    si->add_option("--q-max", sig.q_max, "Highest order");
    si->add_option("--probe-thetas", sig.thetas, "Local-oscillator phases over [0, 2pi)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    aqi_set_warning_handler([](const char* msg, void*) { std::cerr << "warning: " << msg << "\n"; }, nullptr);
    try {
        Session s(g);
        s.validate();
        if (*sp) run_spectrum(s, spectrum);
        else if (*st) run_states(s, states);
        else if (*co) run_correlations(s, corr);
        else if (*wi) run_wigner(s, wig);
        else if (*en) run_entropy(s, ent);
        else if (*sw) run_sweep(s, sweep);
        else if (*to) run_tomography(s, tomo);
        else if (*ga) run_gabor(s, gab);
        else if (*si) run_sigma(s, sig);
    } catch (const Failure& f) {
        report(f);
        return exit_code(f.status);
    } catch (const std::exception& e) {
        report({AQI_E_IO, e.what(), ""});
        return 2;
    }
    return 0;
}
