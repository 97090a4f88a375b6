#pragma once

// YAML scenario, plant and bundle files, plus report emission. Unknown keys
// are rejected; every error carries the offending line number.

#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "zdsim/design_toolbox.hpp"
#include "zdsim/presets.hpp"
#include "zdsim/sim_engine.hpp"

namespace zdsim::io {

namespace detail {

inline std::string where(const YAML::Node& n) {
    const auto m = n.Mark();
    return m.is_null() ? std::string("") : "line " + std::to_string(m.line + 1) + ": ";
}

[[noreturn]] inline void fail(const YAML::Node& n, const std::string& msg) { throw ConfigError(where(n) + msg); }

inline void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& context) {
    if (!map.IsMap()) fail(map, context + " must be a mapping");
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            fail(kv.first, "unknown key '" + key + "' in " + context + " (allowed: " + list + ")");
        }
    }
}

inline double num(const YAML::Node& n, const std::string& what) {
    if (!n.IsScalar()) fail(n, what + " must be a number");
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        fail(n, what + " must be a number, got '" + n.Scalar() + "'");
    }
}

inline bool flag(const YAML::Node& n, const std::string& what) {
    try {
        return n.as<bool>();
    } catch (const YAML::Exception&) {
        fail(n, what + " must be true or false");
    }
}

inline std::string str(const YAML::Node& n, const std::string& what) {
    if (!n.IsScalar()) fail(n, what + " must be a string");
    return n.Scalar();
}

inline Vector vec(const YAML::Node& n, const std::string& what) {
    if (n.IsScalar()) return Vector::Constant(1, num(n, what));
    if (!n.IsSequence()) fail(n, what + " must be a list of numbers");
    Vector v(static_cast<Eigen::Index>(n.size()));
    for (std::size_t i = 0; i < n.size(); ++i) v(static_cast<Eigen::Index>(i)) = num(n[i], what);
    return v;
}

/// [[a, b], [c, d]]; a bare number is a 1x1 matrix and a flat list a row.
inline Matrix mat(const YAML::Node& n, const std::string& what) {
    if (n.IsScalar()) return Matrix::Constant(1, 1, num(n, what));
    if (!n.IsSequence() || n.size() == 0) fail(n, what + " must be a non-empty list of rows");
    if (!n[0].IsSequence()) {
        const Vector row = vec(n, what);
        return row.transpose();
    }
    const std::size_t cols = n[0].size();
    Matrix m(static_cast<Eigen::Index>(n.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < n.size(); ++r) {
        if (!n[r].IsSequence() || n[r].size() != cols)
            fail(n[r], what + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = num(n[r][c], what);
    }
    return m;
}

inline LtiSystem system(const YAML::Node& n, const std::string& what) {
    check_keys(n, {"A", "B", "C"}, what);
    for (const char* k : {"A", "B", "C"})
        if (!n[k]) fail(n, what + " needs key '" + k + "'");
    LtiSystem s{mat(n["A"], what + ".A"), mat(n["B"], what + ".B"), mat(n["C"], what + ".C")};
    try {
        s.validate(what);
    } catch (const ConfigError& e) {
        fail(n, e.what());
    }
    return s;
}

inline void read_constants(const YAML::Node& n, EventConstants& k) {
    check_keys(n, {"sigma", "c1", "c2", "eps", "delta", "eps2"}, "constants");
    if (n["sigma"]) k.sigma = num(n["sigma"], "sigma");
    if (n["c1"]) k.c1 = num(n["c1"], "c1");
    if (n["c2"]) k.c2 = num(n["c2"], "c2");
    if (n["eps"]) k.eps = num(n["eps"], "eps");
    if (n["delta"]) k.delta = num(n["delta"], "delta");
    if (n["eps2"]) k.eps2 = num(n["eps2"], "eps2");
    try {
        k.validate();
    } catch (const ConfigError& e) {
        fail(n, e.what());
    }
}

inline YAML::Node parse(const std::string& text, const std::string& source) {
    try {
        YAML::Node root = YAML::Load(text);
        if (!root.IsMap()) throw ConfigError(source + ": top level must be a mapping");
        return root;
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source + ": line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Scenario files

struct Scenario {
    SimConfig config;
    bool from_preset = false;
    bool calibrate_gamma_x = false;
    std::vector<std::string> ignored_overrides;  // preset runs without force
};

inline void read_attack(const YAML::Node& n, const SimConfig& base, AttackScenario& scn) {
    using namespace detail;
    check_keys(n, {"input", "output", "aux", "covert_uses_plant_b"}, "attack");
    if (const auto in = n["input"]) {
        check_keys(in, {"type", "start_time", "value", "zero", "a0_norm"}, "attack.input");
        const std::string type = in["type"] ? str(in["type"], "attack.input.type") : "none";
        const double start = in["start_time"] ? num(in["start_time"], "attack.input.start_time") : 10.0;
        if (type == "zd") {
            const auto zeros = unstable_zeros(base.plant);
            std::optional<Complex> s0;
            if (in["zero"]) s0 = Complex(num(in["zero"], "attack.input.zero"), 0.0);
            else if (!zeros.empty()) s0 = zeros.front();
            else fail(in, "attack.input.type zd needs a plant with an unstable zero or an explicit 'zero'");
            AttackScaling sc;
            if (in["a0_norm"]) sc.a0_norm = num(in["a0_norm"], "attack.input.a0_norm");
            try {
                scn.zd = ZdInputAttack{attack_direction(base.plant, *s0, sc), start};
            } catch (const NotAZeroError& e) {
                fail(in, e.what());
            }
        } else if (type == "bias") {
            if (!in["value"]) fail(in, "attack.input.type bias needs 'value'");
            scn.input_bias = BiasAttack{vec(in["value"], "attack.input.value"), start};
        } else if (type != "none") {
            fail(in["type"], "attack.input.type must be none, zd or bias");
        }
    }
    if (const auto out = n["output"]) {
        check_keys(out, {"type", "start_time", "value"}, "attack.output");
        const std::string type = out["type"] ? str(out["type"], "attack.output.type") : "none";
        if (type == "bias") {
            if (!out["value"]) fail(out, "attack.output.type bias needs 'value'");
            scn.output_bias = BiasAttack{vec(out["value"], "attack.output.value"),
                                         out["start_time"] ? num(out["start_time"], "attack.output.start_time") : 10.0};
        } else if (type != "none") {
            fail(out["type"], "attack.output.type must be none or bias");
        }
    }
    if (const auto aux = n["aux"]) {
        const std::string kind = str(aux, "attack.aux");
        if (kind == "none") scn.aux = AuxAttackKind::none;
        else if (kind == "naive" || kind == "naive_negation") scn.aux = AuxAttackKind::naive_negation;
        else if (kind == "covert") scn.aux = AuxAttackKind::covert;
        else fail(aux, "attack.aux must be none, naive or covert");
    }
    if (n["covert_uses_plant_b"]) scn.covert_uses_plant_b = flag(n["covert_uses_plant_b"], "covert_uses_plant_b");
}

inline Scenario parse_scenario(const std::string& text, const std::string& source = "scenario", bool force = false) {
    using namespace detail;
    const YAML::Node root = parse(text, source);
    check_keys(root, {"preset", "plant", "design", "sim", "constants", "thresholds", "noise", "initial", "attack"},
               "scenario");
    Scenario out;
    SimConfig& c = out.config;
    if (root["preset"]) {
        const std::string name = str(root["preset"], "preset");
        try {
            c = presets::by_name(name);
        } catch (const ConfigError& e) {
            fail(root["preset"], e.what());
        }
        out.from_preset = true;
        if (!force) {
            for (const auto& kv : root) {
                const auto key = kv.first.as<std::string>();
                if (key != "preset") out.ignored_overrides.push_back(where(kv.first) + key);
            }
            return out;
        }
    }

    if (root["plant"]) c.plant = system(root["plant"], "plant");
    else if (!out.from_preset) fail(root, "scenario needs 'plant' or 'preset'");

    if (root["design"] || !out.from_preset) {
        const YAML::Node d = root["design"] ? root["design"] : YAML::Node(YAML::NodeType::Map);
        check_keys(d, {"lambda0", "K", "L", "L2", "observer_mu", "search_budget", "seed"}, "design");
        DesignOptions opts;
        if (d["K"]) opts.K = mat(d["K"], "design.K");
        if (d["L"]) opts.L = mat(d["L"], "design.L");
        if (d["L2"]) opts.L2 = mat(d["L2"], "design.L2");
        if (d["observer_mu"]) opts.observer_mu = num(d["observer_mu"], "design.observer_mu");
        if (d["search_budget"]) opts.search_budget = static_cast<std::size_t>(num(d["search_budget"], "search_budget"));
        if (d["seed"]) opts.seed = static_cast<std::uint64_t>(num(d["seed"], "design.seed"));
        const double lambda0 = d["lambda0"] ? num(d["lambda0"], "design.lambda0") : -1.0;
        try {
            c.bundle = design_gains(c.plant, lambda0, opts);
        } catch (const std::runtime_error& e) {
            fail(root["design"] ? root["design"] : root, e.what());
        }
    }

    if (const auto s = root["sim"]) {
        check_keys(s, {"dt", "horizon", "seed", "record_stride", "divergence_cap", "g0", "settle_time",
                       "zd_state_offset"},
                   "sim");
        if (s["dt"]) c.dt = num(s["dt"], "sim.dt");
        if (s["horizon"]) c.horizon = num(s["horizon"], "sim.horizon");
        if (s["seed"]) c.seed = static_cast<std::uint64_t>(num(s["seed"], "sim.seed"));
        if (s["record_stride"]) c.record_stride = static_cast<std::int64_t>(num(s["record_stride"], "record_stride"));
        if (s["divergence_cap"]) c.divergence_cap = num(s["divergence_cap"], "sim.divergence_cap");
        if (s["g0"]) c.g0 = num(s["g0"], "sim.g0");
        if (s["settle_time"]) c.settle_time = num(s["settle_time"], "sim.settle_time");
        if (s["zd_state_offset"]) c.zd_state_offset = flag(s["zd_state_offset"], "sim.zd_state_offset");
    }
    if (root["constants"]) read_constants(root["constants"], c.constants);
    if (const auto t = root["thresholds"]) {
        check_keys(t, {"gamma_z", "gamma_x", "latency"}, "thresholds");
        if (t["gamma_z"]) c.thresholds.gamma_z = num(t["gamma_z"], "thresholds.gamma_z");
        if (t["gamma_x"]) {
            if (t["gamma_x"].IsScalar() && t["gamma_x"].Scalar() == "calibrate") out.calibrate_gamma_x = true;
            else c.thresholds.gamma_x = num(t["gamma_x"], "thresholds.gamma_x");
        }
        if (t["latency"]) c.thresholds.latency = num(t["latency"], "thresholds.latency");
    }
    if (const auto nn = root["noise"]) {
        check_keys(nn, {"enabled", "stddev", "period", "on_aux"}, "noise");
        if (nn["enabled"]) c.noise.enabled = flag(nn["enabled"], "noise.enabled");
        if (nn["stddev"]) c.noise.stddev = num(nn["stddev"], "noise.stddev");
        if (nn["period"]) c.noise.period = num(nn["period"], "noise.period");
        if (nn["on_aux"]) c.noise.on_aux = flag(nn["on_aux"], "noise.on_aux");
    }
    if (const auto i = root["initial"]) {
        check_keys(i, {"x0", "z0", "z_hat0", "x_hat0"}, "initial");
        if (i["x0"]) c.x0 = vec(i["x0"], "initial.x0");
        if (i["z0"]) c.z0 = vec(i["z0"], "initial.z0");
        if (i["z_hat0"]) c.z_hat0 = vec(i["z_hat0"], "initial.z_hat0");
        if (i["x_hat0"]) c.x_hat0 = vec(i["x_hat0"], "initial.x_hat0");
    }
    if (root["attack"]) {
        AttackScenario scn;
        read_attack(root["attack"], c, scn);
        c.scenario = std::move(scn);
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return out;
}

inline Scenario load_scenario(const std::string& path, bool force = false) {
    return parse_scenario(read_file(path), path, force);
}

// ---------------------------------------------------------------------------
// Plant and bundle files

struct PlantFile {
    LtiSystem plant;
    DesignOptions options;
    double lambda0 = -1.0;
};

inline PlantFile parse_plant_file(const std::string& text, const std::string& source = "plant") {
    using namespace detail;
    const YAML::Node root = parse(text, source);
    check_keys(root, {"plant", "design"}, "plant file");
    if (!root["plant"]) fail(root, "plant file needs 'plant'");
    PlantFile out;
    out.plant = system(root["plant"], "plant");
    if (const auto d = root["design"]) {
        check_keys(d, {"lambda0", "K", "L", "L2", "observer_mu", "search_budget", "seed"}, "design");
        if (d["lambda0"]) out.lambda0 = num(d["lambda0"], "design.lambda0");
        if (d["K"]) out.options.K = mat(d["K"], "design.K");
        if (d["L"]) out.options.L = mat(d["L"], "design.L");
        if (d["L2"]) out.options.L2 = mat(d["L2"], "design.L2");
        if (d["observer_mu"]) out.options.observer_mu = num(d["observer_mu"], "design.observer_mu");
        if (d["search_budget"])
            out.options.search_budget = static_cast<std::size_t>(num(d["search_budget"], "search_budget"));
        if (d["seed"]) out.options.seed = static_cast<std::uint64_t>(num(d["seed"], "design.seed"));
    }
    return out;
}

struct BundleFile {
    LtiSystem plant;
    DesignBundle bundle;
    EventConstants constants;
};

/// Either `preset: case1|case2` or explicit plant, aux, K, L, L2.
inline BundleFile parse_bundle_file(const std::string& text, const std::string& source = "bundle") {
    using namespace detail;
    const YAML::Node root = parse(text, source);
    check_keys(root, {"preset", "plant", "aux", "K", "L", "L2", "lambda0", "constants"}, "bundle file");
    BundleFile out;
    out.constants = presets::constants();
    if (root["preset"]) {
        const std::string name = str(root["preset"], "preset");
        if (name == "case1") {
            out.plant = presets::quadruple_tank();
            out.bundle = presets::tank_bundle();
        } else if (name == "case2") {
            out.plant = presets::aircraft_throttle();
            out.bundle = presets::aircraft_bundle();
        } else {
            fail(root["preset"], "bundle preset must be case1 or case2");
        }
    } else {
        for (const char* k : {"plant", "aux", "K", "L", "L2"})
            if (!root[k]) fail(root, std::string("bundle file needs '") + k + "'");
        out.plant = system(root["plant"], "plant");
        out.bundle.aux = system(root["aux"], "aux");
        out.bundle.K = mat(root["K"], "K");
        out.bundle.L = mat(root["L"], "L");
        out.bundle.L2 = mat(root["L2"], "L2");
        out.bundle.lambda0 = root["lambda0"] ? num(root["lambda0"], "lambda0") : out.bundle.aux.A(0, 0);
        try {
            auto aug = build_augmented(out.plant, out.bundle.aux, out.bundle.K, out.bundle.L);
            out.bundle.A_eta = aug.A_eta;
            out.bundle.B_eta = aug.B_eta;
            out.bundle.B_a = aug.B_a;
        } catch (const ConfigError& e) {
            fail(root, e.what());
        }
    }
    if (root["constants"]) read_constants(root["constants"], out.constants);
    return out;
}

// ---------------------------------------------------------------------------
// Emission

inline void emit_matrix(YAML::Emitter& e, const Matrix& m) {
    e << YAML::Flow << YAML::BeginSeq;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        e << YAML::Flow << YAML::BeginSeq;
        for (Eigen::Index c = 0; c < m.cols(); ++c) e << m(r, c);
        e << YAML::EndSeq;
    }
    e << YAML::EndSeq;
}

inline void emit_system(YAML::Emitter& e, const LtiSystem& s) {
    e << YAML::BeginMap;
    e << YAML::Key << "A" << YAML::Value;
    emit_matrix(e, s.A);
    e << YAML::Key << "B" << YAML::Value;
    emit_matrix(e, s.B);
    e << YAML::Key << "C" << YAML::Value;
    emit_matrix(e, s.C);
    e << YAML::EndMap;
}

inline std::string emit_bundle(const LtiSystem& plant, const DesignBundle& b, const EventConstants& k) {
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::BeginMap;
    e << YAML::Key << "plant" << YAML::Value;
    emit_system(e, plant);
    e << YAML::Key << "aux" << YAML::Value;
    emit_system(e, b.aux);
    e << YAML::Key << "K" << YAML::Value;
    emit_matrix(e, b.K);
    e << YAML::Key << "L" << YAML::Value;
    emit_matrix(e, b.L);
    e << YAML::Key << "L2" << YAML::Value;
    emit_matrix(e, b.L2);
    e << YAML::Key << "lambda0" << YAML::Value << b.lambda0;
    e << YAML::Key << "constants" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "sigma" << YAML::Value << k.sigma << YAML::Key << "c1" << YAML::Value << k.c1;
    e << YAML::Key << "c2" << YAML::Value << k.c2 << YAML::Key << "eps" << YAML::Value << k.eps;
    e << YAML::Key << "delta" << YAML::Value << k.delta << YAML::Key << "eps2" << YAML::Value << k.eps2;
    e << YAML::EndMap << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

inline void emit_lmi(YAML::Emitter& e, const LmiReport& r) {
    e << YAML::BeginMap;
    e << YAML::Key << "hurwitz" << YAML::Value << r.hurwitz;
    e << YAML::Key << "diagnosis" << YAML::Value << r.diagnosis;
    e << YAML::Key << "feasible_as_printed" << YAML::Value << r.feasible;
    e << YAML::Key << "best_max_eig_as_printed" << YAML::Value << r.best_max_eig;
    e << YAML::Key << "feasible_1_plus_c2" << YAML::Value << r.feasible_alt;
    e << YAML::Key << "best_max_eig_1_plus_c2" << YAML::Value << r.best_max_eig_alt;
    e << YAML::Key << "candidates_scanned" << YAML::Value << r.candidates.size();
    if (r.certified()) {
        e << YAML::Key << "certificate_P" << YAML::Value;
        emit_matrix(e, r.certificate());
        e << YAML::Key << "decay_margin" << YAML::Value << r.decay_margin;
        e << YAML::Key << "beta" << YAML::Value << r.beta;
        e << YAML::Key << "eps3" << YAML::Value << r.eps3;
    }
    e << YAML::EndMap;
}

struct VerificationResult {
    bool aux_observer_hurwitz = false;
    bool plant_observer_hurwitz = false;
    bool closed_loop_hurwitz = false;
    LmiReport theorem1;
    LmiReport lemma3;
    bool ok() const {
        return aux_observer_hurwitz && plant_observer_hurwitz && closed_loop_hurwitz && theorem1.certified() &&
               lemma3.certified();
    }
};

inline VerificationResult verify_bundle(const BundleFile& bf) {
    VerificationResult v;
    const auto& b = bf.bundle;
    v.closed_loop_hurwitz = is_hurwitz(bf.plant.A + bf.plant.B * b.K * bf.plant.C);
    v.aux_observer_hurwitz = is_hurwitz(b.aux.A + b.L * b.aux.C);
    v.plant_observer_hurwitz = is_hurwitz(bf.plant.A + b.L2 * bf.plant.C);
    v.theorem1 = verify_theorem1_lmi(bf.plant, b, bf.constants);
    v.lemma3 = verify_lemma3_lmi(bf.plant, b.L2, bf.constants);
    return v;
}

inline std::string emit_verification(const BundleFile& bf, const VerificationResult& v) {
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::BeginMap;
    e << YAML::Key << "hurwitz" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "A_plus_BKC" << YAML::Value << v.closed_loop_hurwitz;
    e << YAML::Key << "Az_plus_LCz" << YAML::Value << v.aux_observer_hurwitz;
    e << YAML::Key << "A_plus_L2C" << YAML::Value << v.plant_observer_hurwitz;
    e << YAML::Key << "A_eta_spectral_abscissa" << YAML::Value << spectral_abscissa(bf.bundle.A_eta);
    e << YAML::EndMap;
    e << YAML::Key << "theorem1_lmi" << YAML::Value;
    emit_lmi(e, v.theorem1);
    e << YAML::Key << "lemma3_lmi" << YAML::Value;
    emit_lmi(e, v.lemma3);
    e << YAML::Key << "zeno_bound" << YAML::Value << YAML::BeginSeq;
    for (double m : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
        e << YAML::Flow << YAML::BeginMap << YAML::Key << "M" << YAML::Value << m << YAML::Key << "seconds"
          << YAML::Value << zeno_bound(bf.bundle, m, bf.constants) << YAML::EndMap;
    }
    e << YAML::EndSeq;
    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

/// One CSV row per scanned Q: exponents, max eigenvalue as printed and with
/// (1 + c2).
inline void write_lmi_candidates(std::ostream& os, const LmiReport& r) {
    os << "q_exponents,solved,max_eig_as_printed,max_eig_1_plus_c2\n";
    for (const auto& c : r.candidates) {
        for (std::size_t i = 0; i < c.log10_weights.size(); ++i) os << (i ? ";" : "") << c.log10_weights[i];
        os << ',' << (c.solved ? 1 : 0) << ',' << c.max_eig << ',' << c.max_eig_alt << '\n';
    }
}

inline std::string emit_summary(const SimConfig& cfg, const SimTrace& tr) {
    const auto& s = tr.summary;
    const auto& m = tr.monitors;
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::BeginMap;
    e << YAML::Key << "preset" << YAML::Value << cfg.preset;
    e << YAML::Key << "status" << YAML::Value << to_string(tr.status);
    if (!tr.message.empty()) e << YAML::Key << "message" << YAML::Value << tr.message;
    e << YAML::Key << "verdict" << YAML::Value << to_string(s.verdict());
    e << YAML::Key << "steps" << YAML::Value << s.steps;
    e << YAML::Key << "final_time" << YAML::Value << s.final_time;
    e << YAML::Key << "output_events" << YAML::Value << s.output_events;
    e << YAML::Key << "aux_events" << YAML::Value << s.aux_events;
    e << YAML::Key << "max_res_z" << YAML::Value << s.max_res_z;
    e << YAML::Key << "max_res_x" << YAML::Value << s.max_res_x;
    e << YAML::Key << "max_abs_dis_t" << YAML::Value << s.max_abs_dis_t;
    const auto opt = [&](const char* key, double v) {
        e << YAML::Key << key << YAML::Value;
        if (std::isnan(v)) e << YAML::Null;
        else e << v;
    };
    opt("first_res_z_alarm", s.first_res_z_alarm);
    opt("first_dis_t_alarm", s.first_dis_t_alarm);
    opt("first_res_x_alarm", s.first_res_x_alarm);
    e << YAML::Key << "thresholds" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "gamma_z"
      << YAML::Value << cfg.thresholds.gamma_z << YAML::Key << "gamma_x" << YAML::Value << cfg.thresholds.gamma_x
      << YAML::Key << "latency" << YAML::Value << cfg.thresholds.latency << YAML::EndMap;
    e << YAML::Key << "monitors" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "valid" << YAML::Value << m.valid();
    e << YAML::Key << "lemma1_violations" << YAML::Value << m.lemma1_violations;
    e << YAML::Key << "event_condition_violations" << YAML::Value << m.event_condition_violations;
    e << YAML::Key << "lemma2_violations" << YAML::Value << m.lemma2_violations;
    e << YAML::Key << "budget_violations" << YAML::Value << m.budget_violations;
    e << YAML::Key << "min_g" << YAML::Value << m.min_g;
    e << YAML::Key << "g_floor" << YAML::Value << m.g_floor;
    e << YAML::Key << "min_aux_gap" << YAML::Value << m.min_aux_gap;
    e << YAML::Key << "min_aux_tick_gap" << YAML::Value << m.min_aux_tick_gap;
    e << YAML::Key << "zeno_bound_at_max_m" << YAML::Value << m.zeno_bound;
    e << YAML::Key << "max_m" << YAML::Value << m.max_m;
    e << YAML::Key << "per_event_zeno_shortfalls" << YAML::Value << m.per_event_zeno_violations;
    e << YAML::Key << "min_output_gap" << YAML::Value << m.min_output_gap;
    e << YAML::EndMap;
    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

}  // namespace zdsim::io
