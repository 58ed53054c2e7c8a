// Copyright 2026 The spinboltz Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief Run configuration: a sectioned key = value text file.
 *
 * Lines starting with ';' or '#' are comments. Matrices are written row-major
 * as four real numbers, or eight numbers for complex entries (re im pairs).
 * Every key is optional; write_config emits all of them, so
 * parse -> write -> parse is a fixed point.
 */

#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinboltz/collision.hpp"
#include "spinboltz/conservation.hpp"
#include "spinboltz/equilibrium.hpp"
#include "spinboltz/error.hpp"
#include "spinboltz/initial.hpp"
#include "spinboltz/integrator.hpp"
#include "spinboltz/model.hpp"

namespace spinboltz {

enum class ModelPreset { beta_decay, zero_frame_eq44, zero_frame_rotated_eq48, custom };

[[nodiscard]] inline std::string to_string(ModelPreset p) {
    switch (p) {
        case ModelPreset::beta_decay: return "beta-decay";
        case ModelPreset::zero_frame_eq44: return "zero-frame-eq44";
        case ModelPreset::zero_frame_rotated_eq48: return "zero-frame-rotated-eq48";
        case ModelPreset::custom: return "custom";
    }
    return "?";
}

struct ModelConfig {
    ModelPreset preset = ModelPreset::beta_decay;
    Masses masses;
    double c_v = 1.0;
    double c_a = -1.255;
    InteractionSet custom;          ///< used with the custom preset
    std::optional<PairBlock> vop;   ///< operator given directly; only `classify` accepts it
    Normalization norm = Normalization::momentum_space;
};

enum class InitialKind { analytic, fermi_dirac, uniform, file };

struct InitialConfig {
    InitialKind kind = InitialKind::analytic;
    double level = 0.5;
    std::string path;
    EquilibriumParams params;  ///< fermi-dirac, identity spin basis
};

struct ClassifyConfig {
    double tolerance = 1e-12;
    std::optional<GaugeRotation> gauge;
};

struct RunConfig {
    ModelConfig model;
    int n = 56;
    double h = 0.25;
    StepConfig step;
    bool paired_diss = false;
    QuadratureRule rule = QuadratureRule::rectangle;
    InitialConfig initial;
    ClassifyConfig classify;
    int fit_refinement = 4;  ///< fit-equilibrium works on grid.refined(k)
    FitOptions fit;
    std::string out_dir = "out";
    int snapshot_stride = 0;  ///< steps between snapshot files; 0 writes only the first and last
    int threads = 1;

    [[nodiscard]] EnergyGrid grid() const { return {n, h}; }
};

namespace detail {

using boost::property_tree::ptree;

inline std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

inline std::vector<double> numbers(const std::string& key, const std::string& text) {
    std::istringstream is(text);
    std::vector<double> v;
    std::string tok;
    while (is >> tok) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || !std::isfinite(x)) throw ValidationError(key + ": '" + tok + "' is not a finite number");
        v.push_back(x);
    }
    return v;
}

inline SpinBlock parse_block(const std::string& key, const std::string& text) {
    const auto v = numbers(key, text);
    SpinBlock b;
    if (v.size() == 4) {
        for (std::size_t i = 0; i < 4; ++i) b.e[i] = v[i];
    } else if (v.size() == 8) {
        for (std::size_t i = 0; i < 4; ++i) b.e[i] = cplx(v[2 * i], v[2 * i + 1]);
    } else {
        throw ValidationError(key + ": expected 4 real or 8 (re im) numbers");
    }
    return b;
}

inline std::string format_block(const SpinBlock& b) {
    bool complex = false;
    for (const auto& x : b.e) complex = complex || x.imag() != 0.0;
    std::string s;
    for (const auto& x : b.e) {
        if (!s.empty()) s += ' ';
        s += fmt(x.real());
        if (complex) s += ' ' + fmt(x.imag());
    }
    return s;
}

inline PairBlock parse_pair(const std::string& key, const std::string& text) {
    const auto v = numbers(key, text);
    PairBlock p;
    if (v.size() == 16) {
        for (std::size_t i = 0; i < 16; ++i) p.e[i] = v[i];
    } else if (v.size() == 32) {
        for (std::size_t i = 0; i < 16; ++i) p.e[i] = cplx(v[2 * i], v[2 * i + 1]);
    } else {
        throw ValidationError(key + ": expected 16 real or 32 (re im) numbers");
    }
    return p;
}

inline std::string format_pair(const PairBlock& p) {
    bool complex = false;
    for (const auto& x : p.e) complex = complex || x.imag() != 0.0;
    std::string s;
    for (const auto& x : p.e) {
        if (!s.empty()) s += ' ';
        s += fmt(x.real());
        if (complex) s += ' ' + fmt(x.imag());
    }
    return s;
}

template <class T>
T get(const ptree& pt, const std::string& key, T fallback) {
    const auto node = pt.get_optional<std::string>(key);
    if (!node) return fallback;
    if constexpr (std::is_same_v<T, std::string>) {
        return *node;
    } else if constexpr (std::is_same_v<T, bool>) {
        if (*node == "true" || *node == "1" || *node == "yes") return true;
        if (*node == "false" || *node == "0" || *node == "no") return false;
        throw ValidationError(key + ": expected true or false");
    } else if constexpr (std::is_same_v<T, int>) {
        const auto v = numbers(key, *node);
        if (v.size() != 1 || v[0] != std::floor(v[0]) || std::abs(v[0]) > 1e9) throw ValidationError(key + ": expected an integer");
        return static_cast<int>(v[0]);
    } else {
        const auto v = numbers(key, *node);
        if (v.size() != 1) throw ValidationError(key + ": expected one number");
        return v[0];
    }
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

inline GaugeRotation parse_gauge(const ptree& pt, const std::string& base) {
    GaugeRotation g;
    if (get<std::string>(pt, base + "preset", "") == "rotated-frame") g = rotated_frame_gauge();
    for (Species s : kAllSpecies) {
        const std::string key = base + "u_" + tag(s);
        if (const auto v = pt.get_optional<std::string>(key)) g[s] = parse_block(key, *v);
    }
    g.validate();
    return g;
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path q(p);
    return q.is_absolute() || base.empty() ? q : base / q;
}

}  // namespace detail

[[nodiscard]] inline ModelPreset model_preset_from_string(const std::string& s) {
    for (auto p : {ModelPreset::beta_decay, ModelPreset::zero_frame_eq44, ModelPreset::zero_frame_rotated_eq48,
                   ModelPreset::custom})
        if (to_string(p) == s) return p;
    throw ValidationError("unknown model preset '" + s + "'");
}

/**
 * Parses a configuration. Relative paths (initial state file, gauge file) are
 * resolved against `base_dir`.
 */
[[nodiscard]] inline RunConfig parse_config(std::istream& is, const std::filesystem::path& base_dir = {}) {
    using detail::get;
    using detail::require;
    detail::ptree pt;
    try {
        boost::property_tree::ini_parser::read_ini(is, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    static const std::vector<std::string> known{"model", "grid", "integrator", "initial", "classify", "gauge", "fit", "output", "run"};
    for (const auto& [section, body] : pt) {
        if (std::find(known.begin(), known.end(), section) == known.end())
            throw ValidationError("config: unknown section [" + section + "]");
        if (body.empty() && !body.data().empty()) throw ValidationError("config: key '" + section + "' outside any section");
    }

    RunConfig c;
    auto& m = c.model;
    m.preset = model_preset_from_string(get<std::string>(pt, "model.preset", to_string(m.preset)));
    if (const auto v = pt.get_optional<std::string>("model.masses")) {
        const auto x = detail::numbers("model.masses", *v);
        require(x.size() == 4, "model.masses: expected four masses");
        for (std::size_t i = 0; i < 4; ++i) m.masses.m[i] = x[i];
    }
    m.masses.validate();
    m.c_v = get(pt, "model.c_v", m.c_v);
    m.c_a = get(pt, "model.c_a", m.c_a);
    const std::string norm = get<std::string>(pt, "model.normalization", "momentum-space");
    require(norm == "momentum-space" || norm == "energy-form", "model.normalization: expected momentum-space or energy-form");
    m.norm = norm == "energy-form" ? Normalization::energy_form : Normalization::momentum_space;
    for (auto [key, blk] : {std::pair{"model.v_ab", &m.custom.ab}, std::pair{"model.v_cd", &m.custom.cd},
                            std::pair{"model.v_ad", &m.custom.ad}, std::pair{"model.v_cb", &m.custom.cb}}) {
        if (const auto v = pt.get_optional<std::string>(key)) {
            require(m.preset == ModelPreset::custom, std::string(key) + " requires preset = custom");
            *blk = detail::parse_block(key, *v);
        }
    }
    if (m.preset == ModelPreset::custom) m.custom.validate();
    if (const auto v = pt.get_optional<std::string>("model.vop")) m.vop = detail::parse_pair("model.vop", *v);

    c.n = get(pt, "grid.n", c.n);
    c.h = get(pt, "grid.h", c.h);
    require(c.n >= 8 && c.n <= 4096, "grid.n must lie in [8, 4096]");
    require(c.h > 0.0 && c.h <= 10.0, "grid.h must lie in (0, 10]");

    c.step.dt = get(pt, "integrator.dt", c.step.dt);
    c.step.t_end = get(pt, "integrator.t_end", c.step.t_end);
    c.step.stride = get(pt, "integrator.stride", c.step.stride);
    c.step.include_cons = get(pt, "integrator.include_cons", c.step.include_cons);
    c.step.validate();
    c.paired_diss = get(pt, "integrator.paired_diss", c.paired_diss);
    const std::string rule = get<std::string>(pt, "integrator.quadrature", "rectangle");
    require(rule == "rectangle" || rule == "trapezoid", "integrator.quadrature: expected rectangle or trapezoid");
    c.rule = rule == "trapezoid" ? QuadratureRule::trapezoid : QuadratureRule::rectangle;

    const std::string kind = get<std::string>(pt, "initial.state", "analytic");
    auto& in = c.initial;
    if (kind == "analytic") {
        in.kind = InitialKind::analytic;
    } else if (kind == "fermi-dirac") {
        in.kind = InitialKind::fermi_dirac;
        in.params.variant = structure_class_from_string(get<std::string>(pt, "initial.class", "General"));
        in.params.beta = get(pt, "initial.beta", 1.0);
        require(in.params.beta > 0.0, "initial.beta must be positive");
        in.params.nu = {get(pt, "initial.nu_a", 0.0), get(pt, "initial.nu_b", 0.0), get(pt, "initial.nu_c", 0.0)};
        in.params.c_ac = get(pt, "initial.c_ac", 0.0);
        in.params.c_bd = get(pt, "initial.c_bd", 0.0);
    } else if (kind == "uniform") {
        in.kind = InitialKind::uniform;
        in.level = get(pt, "initial.level", in.level);
        require(in.level >= 0.0 && in.level <= 1.0, "initial.level must lie in [0, 1]");
    } else if (kind == "file") {
        in.kind = InitialKind::file;
        in.path = detail::resolve(base_dir, get<std::string>(pt, "initial.path", "")).string();
        require(std::filesystem::is_regular_file(in.path), "initial.path: file '" + in.path + "' not found");
    } else {
        throw ValidationError("initial.state: expected analytic, fermi-dirac, uniform or file");
    }

    c.classify.tolerance = get(pt, "classify.tolerance", c.classify.tolerance);
    require(c.classify.tolerance >= 1e-14 && c.classify.tolerance <= 1e-6, "classify.tolerance must lie in [1e-14, 1e-6]");
    if (const auto gf = pt.get_optional<std::string>("classify.gauge_file")) {
        const auto path = detail::resolve(base_dir, *gf);
        std::ifstream f(path);
        if (!f) throw ValidationError("classify.gauge_file: cannot open '" + path.string() + "'");
        detail::ptree g;
        try {
            boost::property_tree::ini_parser::read_ini(f, g);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ValidationError(std::string("gauge file: ") + e.what());
        }
        c.classify.gauge = detail::parse_gauge(g, "gauge.");
    } else if (pt.get_child_optional("gauge")) {
        c.classify.gauge = detail::parse_gauge(pt, "gauge.");
    }

    c.fit_refinement = get(pt, "fit.refinement", c.fit_refinement);
    require(c.fit_refinement >= 1 && c.fit_refinement <= 16, "fit.refinement must lie in [1, 16]");
    c.fit.tolerance = get(pt, "fit.tolerance", c.fit.tolerance);
    c.fit.max_iterations = get(pt, "fit.max_iterations", c.fit.max_iterations);
    c.fit.restarts = get(pt, "fit.restarts", c.fit.restarts);
    c.fit.seed = static_cast<unsigned>(get(pt, "fit.seed", static_cast<int>(c.fit.seed)));
    require(c.fit.tolerance > 0.0 && c.fit.max_iterations >= 1 && c.fit.restarts >= 0, "fit: invalid tolerance or limits");

    c.out_dir = get<std::string>(pt, "output.dir", c.out_dir);
    c.snapshot_stride = get(pt, "output.snapshot_stride", c.snapshot_stride);
    require(c.snapshot_stride >= 0, "output.snapshot_stride must be non-negative");
    c.threads = get(pt, "run.threads", c.threads);
    require(c.threads >= 1 && c.threads <= 1024, "run.threads must lie in [1, 1024]");
    return c;
}

[[nodiscard]] inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open config '" + path.string() + "'");
    return parse_config(f, path.parent_path());
}

/// Writes every key, 17 significant digits.
inline void write_config(std::ostream& os, const RunConfig& c) {
    using detail::fmt;
    const auto& m = c.model;
    os << "[model]\npreset = " << to_string(m.preset) << "\nmasses =";
    for (double x : m.masses.m) os << ' ' << fmt(x);
    os << "\nc_v = " << fmt(m.c_v) << "\nc_a = " << fmt(m.c_a) << "\nnormalization = "
       << (m.norm == Normalization::energy_form ? "energy-form" : "momentum-space") << '\n';
    if (m.preset == ModelPreset::custom)
        os << "v_ab = " << detail::format_block(m.custom.ab) << "\nv_cd = " << detail::format_block(m.custom.cd)
           << "\nv_ad = " << detail::format_block(m.custom.ad) << "\nv_cb = " << detail::format_block(m.custom.cb) << '\n';
    if (m.vop) os << "vop = " << detail::format_pair(*m.vop) << '\n';

    os << "\n[grid]\nn = " << c.n << "\nh = " << fmt(c.h) << '\n';
    os << "\n[integrator]\ndt = " << fmt(c.step.dt) << "\nt_end = " << fmt(c.step.t_end) << "\nstride = " << c.step.stride
       << "\ninclude_cons = " << (c.step.include_cons ? "true" : "false") << "\npaired_diss = "
       << (c.paired_diss ? "true" : "false") << "\nquadrature = "
       << (c.rule == QuadratureRule::trapezoid ? "trapezoid" : "rectangle") << '\n';

    const auto& in = c.initial;
    os << "\n[initial]\n";
    switch (in.kind) {
        case InitialKind::analytic: os << "state = analytic\n"; break;
        case InitialKind::uniform: os << "state = uniform\nlevel = " << fmt(in.level) << '\n'; break;
        case InitialKind::file: os << "state = file\npath = " << in.path << '\n'; break;
        case InitialKind::fermi_dirac:
            os << "state = fermi-dirac\nclass = " << to_string(in.params.variant) << "\nbeta = " << fmt(in.params.beta)
               << "\nnu_a = " << fmt(in.params.nu[0]) << "\nnu_b = " << fmt(in.params.nu[1]) << "\nnu_c = "
               << fmt(in.params.nu[2]) << "\nc_ac = " << fmt(in.params.c_ac) << "\nc_bd = " << fmt(in.params.c_bd) << '\n';
            break;
    }

    os << "\n[classify]\ntolerance = " << fmt(c.classify.tolerance) << '\n';
    if (c.classify.gauge) {
        os << "\n[gauge]\n";
        for (Species s : kAllSpecies) os << "u_" << tag(s) << " = " << detail::format_block((*c.classify.gauge)[s]) << '\n';
    }
    os << "\n[fit]\nrefinement = " << c.fit_refinement << "\ntolerance = " << fmt(c.fit.tolerance)
       << "\nmax_iterations = " << c.fit.max_iterations << "\nrestarts = " << c.fit.restarts << "\nseed = " << c.fit.seed
       << '\n';
    os << "\n[output]\ndir = " << c.out_dir << "\nsnapshot_stride = " << c.snapshot_stride << '\n';
    os << "\n[run]\nthreads = " << c.threads << '\n';
}

[[nodiscard]] inline std::string to_text(const RunConfig& c) {
    std::ostringstream os;
    write_config(os, c);
    return os.str();
}

/// Interaction matrices of the configured model.
[[nodiscard]] inline InteractionSet interactions(const ModelConfig& m) {
    switch (m.preset) {
        case ModelPreset::beta_decay: return beta_decay_interactions(m.c_v, m.c_a);
        case ModelPreset::zero_frame_eq44: return zero_frame_interactions();
        case ModelPreset::zero_frame_rotated_eq48: return apply_gauge(rotated_frame_gauge(), zero_frame_interactions());
        case ModelPreset::custom: return m.custom;
    }
    return {};
}

[[nodiscard]] inline Model build_model(const ModelConfig& m) {
    if (m.vop) throw ValidationError("model.vop is accepted by classify only; dynamics need the four interaction matrices");
    return {m.masses, interactions(m)};
}

/// The operator to classify: model.vop if given, otherwise the one built from the matrices.
[[nodiscard]] inline VOp config_vop(const ModelConfig& m) { return m.vop ? VOp{*m.vop} : build_vop(interactions(m)); }

[[nodiscard]] inline StateSpec state_spec(const InitialConfig& in) {
    switch (in.kind) {
        case InitialKind::analytic: return AppendixBState{};
        case InitialKind::fermi_dirac: return FermiDiracState{in.params};
        case InitialKind::uniform: return UniformFill{in.level};
        case InitialKind::file: return CustomState{in.path};
    }
    return AppendixBState{};
}

}  // namespace spinboltz
