#include "landau/scenario.hpp"

#include <cmath>

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

namespace landau {

namespace fs = std::filesystem;

namespace {

std::string join(const std::string& prefix, const std::string& key) { return prefix.empty() ? key : prefix + "." + key; }

// Typed reader over one JSON object that tracks which keys were consumed.
class Section {
public:
    Section(const json& j, std::string path, std::vector<std::string>& unknown)
        : j_(j), path_(std::move(path)), unknown_(unknown) {
        if (!j_.is_object()) throw ValidationError("`" + (path_.empty() ? std::string("<root>") : path_) + "` must be an object");
    }
    ~Section() = default;

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string key(const std::string& k) const { return join(path_, k); }

    const json* raw(const std::string& k) {
        seen_.insert(k);
        auto it = j_.find(k);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& k, double& out) {
        if (const json* v = raw(k)) {
            if (!v->is_number()) throw ValidationError("`" + key(k) + "` must be a number");
            out = v->get<double>();
        }
    }
    void number(const std::string& k, std::optional<double>& out) {
        if (const json* v = raw(k)) {
            if (v->is_null()) return;
            if (!v->is_number()) throw ValidationError("`" + key(k) + "` must be a number");
            out = v->get<double>();
        }
    }
    template <class I>
    void integer(const std::string& k, I& out) {
        if (const json* v = raw(k)) {
            if (!v->is_number_integer()) throw ValidationError("`" + key(k) + "` must be an integer");
            if constexpr (std::is_unsigned_v<I>) {
                if (v->get<long long>() < 0) throw ValidationError("`" + key(k) + "` must be nonnegative");
                out = I(v->get<unsigned long long>());
            } else {
                out = I(v->get<long long>());
            }
        }
    }
    void boolean(const std::string& k, bool& out) {
        if (const json* v = raw(k)) {
            if (!v->is_boolean()) throw ValidationError("`" + key(k) + "` must be true or false");
            out = v->get<bool>();
        }
    }
    void string(const std::string& k, std::string& out) {
        if (const json* v = raw(k)) {
            if (!v->is_string()) throw ValidationError("`" + key(k) + "` must be a string");
            out = v->get<std::string>();
        }
    }
    void strings(const std::string& k, std::vector<std::string>& out) {
        if (const json* v = raw(k)) {
            if (v->is_string()) {
                out = {v->get<std::string>()};
                return;
            }
            if (!v->is_array()) throw ValidationError("`" + key(k) + "` must be a string or a list of strings");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_string()) throw ValidationError("`" + key(k) + "` must contain strings");
                out.push_back(e.get<std::string>());
            }
        }
    }
    void ints(const std::string& k, std::vector<int>& out) {
        if (const json* v = raw(k)) {
            if (!v->is_array()) throw ValidationError("`" + key(k) + "` must be a list of integers");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number_integer()) throw ValidationError("`" + key(k) + "` must contain integers");
                out.push_back(e.get<int>());
            }
        }
    }
    void doubles(const std::string& k, std::vector<double>& out) {
        if (const json* v = raw(k)) {
            if (!v->is_array()) throw ValidationError("`" + key(k) + "` must be a list of numbers");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) throw ValidationError("`" + key(k) + "` must contain numbers");
                out.push_back(e.get<double>());
            }
        }
    }
    void modes(const std::string& k, std::vector<std::vector<int>>& out) {
        if (const json* v = raw(k)) {
            if (!v->is_array()) throw ValidationError("`" + key(k) + "` must be a list of integer vectors");
            out.clear();
            for (const auto& e : *v) {
                std::vector<int> m;
                if (e.is_number_integer()) {
                    m.push_back(e.get<int>());
                } else if (e.is_array()) {
                    for (const auto& c : e) {
                        if (!c.is_number_integer()) throw ValidationError("`" + key(k) + "` must contain integer vectors");
                        m.push_back(c.get<int>());
                    }
                } else {
                    throw ValidationError("`" + key(k) + "` must contain integer vectors");
                }
                out.push_back(std::move(m));
            }
        }
    }
    void finish() {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) unknown_.push_back(key(k));
    }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& unknown_;
    std::set<std::string> seen_;
};

const json& child(const json& doc, const char* key) {
    static const json empty = json::object();
    auto it = doc.find(key);
    return it == doc.end() ? empty : *it;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

std::string resolve_path(const std::string& base, const std::string& p) {
    if (p.empty()) return p;
    const fs::path path(p);
    return path.is_absolute() ? p : (fs::path(base) / path).lexically_normal().string();
}

TimeDirection parse_direction(const std::string& s, const std::string& key) {
    if (s == "forward") return TimeDirection::forward;
    if (s == "backward") return TimeDirection::backward;
    throw ValidationError("`" + key + "` must be \"forward\" or \"backward\"");
}

InterpRule parse_rule(const std::string& s, const std::string& key) {
    try {
        return parse_interp_rule(s);
    } catch (const ArgumentError&) {
        throw ValidationError("`" + key + "` must be \"cubic\" or \"bandlimited\"");
    }
}

json mode_list_json(const std::vector<std::vector<int>>& ks) {
    json a = json::array();
    for (const auto& k : ks) a.push_back(k);
    return a;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"equilibrium", {"kind", "dim", "sigma", "lambda0", "theta", "files", "table"}},
        {"grid", {"K", "xi_max", "N_xi", "N_x", "N_v", "V"}},
        {"weights", {"lambda0", "lambda1_fraction", "direction"}},
        {"initial", {"family", "epsilon", "k0", "sigma", "node", "value", "path"}},
        {"solver",
         {"dt", "T", "nonlinear", "direction", "density_interp", "shift_interp", "boundary_threshold",
          "override_horizon", "oracle", "oracle_boundary_threshold"}},
        {"diagnostics",
         {"every", "p", "beta", "exponent", "gevrey_lambda", "snapshots", "series", "fit_t_lo", "fit_t_hi"}},
        {"green", {"s_max", "ds", "k", "tail_tol"}},
        {"penrose", {"k_max", "samples"}},
        {"density", {"route", "store_every", "k"}},
        {"scattering", {"horizons", "lambda_in", "lambda_out", "probe_distance"}},
        {"verify", {"weight_samples", "dispersion_samples"}},
        {"output", {}},
        {"seed", {}},
        {"threads", {}},
    };
    return s;
}

// All keys outside the schema, reported together before any value checks.
void reject_unknown_keys(const json& doc) {
    std::vector<std::string> unknown;
    for (const auto& [k, v] : doc.items()) {
        auto it = schema().find(k);
        if (it == schema().end()) {
            unknown.push_back(k);
        } else if (!it->second.empty() && v.is_object()) {
            for (const auto& [c, cv] : v.items())
                if (!it->second.count(c)) unknown.push_back(k + "." + c);
        }
    }
    if (unknown.empty()) return;
    std::sort(unknown.begin(), unknown.end());
    std::string list;
    for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
    throw ValidationError("unknown scenario keys: " + list);
}

}  // namespace

json resolve_includes(const json& doc, const std::string& base_dir, std::vector<std::string>* visited,
                      std::vector<std::string>* loaded) {
    if (!doc.is_object()) throw ValidationError("scenario document must be a JSON object");
    std::vector<std::string> local;
    std::vector<std::string>& seen = visited ? *visited : local;
    json merged = json::object();
    if (auto it = doc.find("include"); it != doc.end()) {
        std::vector<std::string> paths;
        if (it->is_string()) {
            paths.push_back(it->get<std::string>());
        } else if (it->is_array()) {
            for (const auto& e : *it) {
                if (!e.is_string()) throw ValidationError("`include` must contain paths");
                paths.push_back(e.get<std::string>());
            }
        } else {
            throw ValidationError("`include` must be a path or a list of paths");
        }
        for (const auto& p : paths) {
            const std::string full = resolve_path(base_dir, p);
            if (std::find(seen.begin(), seen.end(), full) != seen.end())
                throw ValidationError("`include` cycle through " + full);
            if (!fs::exists(full)) throw ValidationError("`include` file not found: " + full);
            json frag;
            try {
                frag = json::parse(read_text_file(full));
            } catch (const json::parse_error& e) {
                throw ValidationError("`include` file " + full + " is not valid JSON: " + e.what());
            }
            seen.push_back(full);
            if (loaded) loaded->push_back(full);
            merged.merge_patch(resolve_includes(frag, fs::path(full).parent_path().string(), &seen, loaded));
            seen.pop_back();
        }
    }
    json body = doc;
    body.erase("include");
    merged.merge_patch(body);
    return merged;
}

EquilibriumSpec Scenario::make_equilibrium() const {
    const auto& c = equilibrium_config;
    if (c.kind == "vacuum") return EquilibriumSpec::vacuum(c.dim, c.lambda0, c.theta);
    if (c.kind == "maxwellian") return EquilibriumSpec::maxwellian(c.dim, c.sigma, c.lambda0, c.theta);
    if (c.kind == "poisson") return EquilibriumSpec::poisson(c.dim, c.lambda0, c.theta);
    if (c.kind == "tabulated") {
        if (!c.table.empty()) return load_tabulated_array(c.table, c.lambda0, c.theta);
        return load_tabulated_csv(c.files, c.lambda0, c.theta);
    }
    throw ValidationError("`equilibrium.kind` must be vacuum, maxwellian, poisson or tabulated");
}

Scenario scenario_from_json(const json& input, const std::string& base_dir, const ScenarioOverrides& ov) {
    std::vector<std::string> fragments;
    const json doc = resolve_includes(input, base_dir, nullptr, &fragments);
    reject_unknown_keys(doc);
    Scenario sc;
    sc.inputs = fragments;
    sc.source = "<json>";
    std::vector<std::string> unknown;

    {
        Section s(child(doc, "equilibrium"), "equilibrium", unknown);
        auto& c = sc.equilibrium_config;
        s.string("kind", c.kind);
        s.integer("dim", c.dim);
        s.number("sigma", c.sigma);
        s.number("lambda0", c.lambda0);
        s.number("theta", c.theta);
        s.strings("files", c.files);
        s.string("table", c.table);
        s.finish();
        for (auto& f : c.files) f = resolve_path(base_dir, f);
        c.table = resolve_path(base_dir, c.table);
        require(c.dim >= 1 && c.dim <= 3, "`equilibrium.dim` must be 1, 2 or 3");
        require(c.sigma > 0.0, "`equilibrium.sigma` must be > 0");
        require(c.lambda0 > 0.0, "`equilibrium.lambda0` must be > 0");
        require(c.theta > 0.0, "`equilibrium.theta` must be > 0");
        if (c.kind == "tabulated") {
            require(!c.files.empty() || !c.table.empty(), "`equilibrium.files` or `equilibrium.table` is required for tabulated equilibria");
            for (const auto& f : c.files) {
                require(fs::exists(f), "`equilibrium.files` entry not found: " + f);
                sc.inputs.push_back(f);
            }
            if (!c.table.empty()) {
                require(fs::exists(c.table), "`equilibrium.table` not found: " + c.table);
                sc.inputs.push_back(c.table);
            }
        } else {
            require(c.kind == "vacuum" || c.kind == "maxwellian" || c.kind == "poisson",
                    "`equilibrium.kind` must be vacuum, maxwellian, poisson or tabulated");
        }
    }
    {
        Section s(child(doc, "grid"), "grid", unknown);
        s.integer("K", sc.grid.K);
        s.number("xi_max", sc.grid.xi_max);
        s.integer("N_xi", sc.grid.n_xi);
        s.integer("N_x", sc.phase.n_x);
        s.integer("N_v", sc.phase.n_v);
        s.number("V", sc.phase.v_max);
        s.finish();
        sc.grid.d = sc.phase.d = sc.equilibrium_config.dim;
        require(sc.grid.K >= 1, "`grid.K` must be >= 1");
        require(sc.grid.xi_max > 0.0, "`grid.xi_max` must be > 0");
        require(sc.grid.n_xi >= 4 && sc.grid.n_xi % 2 == 0, "`grid.N_xi` must be even and >= 4");
        require(sc.phase.n_x >= 2, "`grid.N_x` must be >= 2");
        require(sc.phase.n_v >= 4 && sc.phase.n_v % 2 == 0, "`grid.N_v` must be even and >= 4");
        require(sc.phase.v_max > 0.0, "`grid.V` must be > 0");
    }
    {
        Section s(child(doc, "weights"), "weights", unknown);
        double lambda0 = sc.equilibrium_config.lambda0;
        double frac = 0.8;
        std::string dir = "decreasing";
        s.number("lambda0", lambda0);
        s.number("lambda1_fraction", frac);
        s.string("direction", dir);
        s.finish();
        require(lambda0 > 0.0, "`weights.lambda0` must be > 0");
        require(frac >= 0.5 && frac <= 0.9, "`weights.lambda1_fraction` must lie in [0.5, 0.9]");
        require(dir == "decreasing" || dir == "increasing", "`weights.direction` must be \"decreasing\" or \"increasing\"");
        sc.weights = WeightParams::make(lambda0, frac,
                                        dir == "decreasing" ? WeightDirection::decreasing : WeightDirection::increasing);
    }
    {
        const json& ij = child(doc, "initial");
        Section s(ij, "initial", unknown);
        auto& c = sc.initial;
        s.string("family", c.family);
        s.number("epsilon", c.epsilon);
        s.ints("k0", c.k0);
        s.number("sigma", c.sigma);
        s.ints("node", c.node);
        std::vector<double> value{c.value.real(), c.value.imag()};
        s.doubles("value", value);
        s.string("path", c.path);
        s.finish();
        require(value.size() == 2, "`initial.value` must be [re, im]");
        c.value = {value[0], value[1]};
        c.path = resolve_path(base_dir, c.path);
        const int d = sc.grid.d;
        if (c.family == "cosine-mode") {
            require(c.epsilon > 0.0, "`initial.epsilon` must be > 0");
            require(c.sigma > 0.0, "`initial.sigma` must be > 0");
            if (!ij.contains("k0") && d > 1) c.k0.resize(std::size_t(d), 0);
            require(int(c.k0.size()) == d, "`initial.k0` must have " + std::to_string(d) + " components");
            require(sc.grid.has_mode(c.k0), "`initial.k0` is outside the retained modes");
            require(std::any_of(c.k0.begin(), c.k0.end(), [](int x) { return x != 0; }), "`initial.k0` must be nonzero");
        } else if (c.family == "impulse") {
            if (!ij.contains("k0") && d > 1) c.k0.resize(std::size_t(d), 0);
            require(int(c.k0.size()) == d && sc.grid.has_mode(c.k0), "`initial.k0` is outside the retained modes");
            if (c.node.empty()) c.node.assign(std::size_t(d), sc.grid.n_xi / 2);
            require(int(c.node.size()) == d, "`initial.node` must have " + std::to_string(d) + " components");
            for (int x : c.node) require(x >= 0 && x < sc.grid.n_xi, "`initial.node` is outside the ξ-grid");
        } else if (c.family == "from-snapshot") {
            require(!c.path.empty(), "`initial.path` is required for from-snapshot data");
            require(fs::exists(c.path), "`initial.path` not found: " + c.path);
            sc.inputs.push_back(c.path);
        } else {
            require(c.family == "zero", "`initial.family` must be zero, cosine-mode, impulse or from-snapshot");
        }
    }
    {
        Section s(child(doc, "solver"), "solver", unknown);
        auto& c = sc.solver;
        std::string dir = "forward", dr = "cubic", sr = "cubic";
        s.number("dt", c.dt);
        s.number("T", c.T);
        s.boolean("nonlinear", c.nonlinear);
        s.string("direction", dir);
        s.string("density_interp", dr);
        s.string("shift_interp", sr);
        s.number("boundary_threshold", c.boundary_threshold);
        s.boolean("override_horizon", c.override_horizon);
        s.boolean("oracle", c.oracle);
        s.number("oracle_boundary_threshold", c.oracle_boundary_threshold);
        s.finish();
        c.direction = parse_direction(dir, "solver.direction");
        c.density_interp = parse_rule(dr, "solver.density_interp");
        c.shift_interp = parse_rule(sr, "solver.shift_interp");
        c.override_horizon = c.override_horizon || ov.override_horizon;
        require(c.dt > 0.0 && std::isfinite(c.dt), "`solver.dt` must be > 0");
        require(!c.T || (*c.T > 0.0 && std::isfinite(*c.T)), "`solver.T` must be > 0");
        require(c.boundary_threshold > 0.0, "`solver.boundary_threshold` must be > 0");
        require(c.oracle_boundary_threshold > 0.0, "`solver.oracle_boundary_threshold` must be > 0");
        const double tmax = sc.t_max();
        if (c.T && *c.T > tmax * (1.0 + 1e-12) && !c.override_horizon)
            throw ValidationError("`solver.T` = " + format_double(*c.T) + " exceeds the horizon T_max = xi_max/K = " +
                                  format_double(tmax) +
                                  " (density interpolation needs |t·K| <= xi_max); set solver.override_horizon or pass --override-horizon");
    }
    {
        Section s(child(doc, "diagnostics"), "diagnostics", unknown);
        auto& c = sc.diagnostics;
        s.integer("every", c.every);
        s.doubles("p", c.p_values);
        s.number("beta", c.beta);
        s.number("exponent", c.exponent);
        s.number("gevrey_lambda", c.gevrey_lambda);
        s.strings("snapshots", c.snapshots);
        s.string("series", c.series);
        s.number("fit_t_lo", c.fit_t_lo);
        s.number("fit_t_hi", c.fit_t_hi);
        s.finish();
        for (double p : c.p_values) require(p >= 0.0 && p <= 2.0, "`diagnostics.p` entries must lie in [0, 2]");
        require(c.beta >= 0.0, "`diagnostics.beta` must be >= 0");
        require(c.gevrey_lambda >= 0.0, "`diagnostics.gevrey_lambda` must be >= 0");
        for (auto& p : c.snapshots) p = resolve_path(base_dir, p);
        c.series = resolve_path(base_dir, c.series);
        if (!c.series.empty()) {
            require(fs::exists(c.series), "`diagnostics.series` not found: " + c.series);
            sc.inputs.push_back(c.series);
        }
    }
    {
        Section s(child(doc, "green"), "green", unknown);
        auto& c = sc.green;
        s.number("s_max", c.s_max);
        s.number("ds", c.ds);
        s.modes("k", c.k);
        s.number("tail_tol", c.tail_tol);
        s.finish();
        require(c.s_max > 0.0, "`green.s_max` must be > 0");
        require(c.ds > 0.0, "`green.ds` must be > 0");
        require(c.tail_tol > 0.0, "`green.tail_tol` must be > 0");
        if (c.k.empty())
            for (int k = 1; k <= sc.grid.K; ++k) {
                std::vector<int> m(std::size_t(sc.grid.d), 0);
                m[0] = k;
                c.k.push_back(m);
            }
        for (const auto& k : c.k) {
            require(int(k.size()) == sc.grid.d, "`green.k` vectors must have " + std::to_string(sc.grid.d) + " components");
            require(std::any_of(k.begin(), k.end(), [](int x) { return x != 0; }), "`green.k` entries must be nonzero");
        }
    }
    {
        Section s(child(doc, "penrose"), "penrose", unknown);
        int kmax = sc.grid.K;
        s.integer("k_max", kmax);
        s.integer("samples", sc.penrose.samples);
        s.finish();
        require(kmax >= 1, "`penrose.k_max` must be >= 1");
        require(sc.penrose.samples >= 3, "`penrose.samples` must be >= 3");
        sc.penrose.k_max = kmax;
    }
    {
        Section s(child(doc, "density"), "density", unknown);
        auto& c = sc.density;
        s.string("route", c.route);
        s.integer("store_every", c.store_every);
        s.modes("k", c.k);
        s.finish();
        require(c.route == "volterra" || c.route == "green" || c.route == "both",
                "`density.route` must be volterra, green or both");
        require(c.store_every >= 1, "`density.store_every` must be >= 1");
        if (c.k.empty()) {
            const int reach = std::min(sc.grid.K, 2);
            for (std::size_t m = 0; m < sc.grid.num_modes(); ++m) {
                const auto k = sc.grid.mode(m);
                const bool zero = std::all_of(k.begin(), k.end(), [](int x) { return x == 0; });
                const bool near = std::all_of(k.begin(), k.end(), [&](int x) { return std::abs(x) <= reach; });
                if (!zero && near) c.k.push_back(k);
            }
        }
        for (const auto& k : c.k)
            require(int(k.size()) == sc.grid.d && sc.grid.has_mode(k), "`density.k` entries must be retained modes");
    }
    {
        Section s(child(doc, "scattering"), "scattering", unknown);
        auto& c = sc.scattering;
        s.doubles("horizons", c.horizons);
        s.number("lambda_in", c.lambda_in);
        s.number("lambda_out", c.lambda_out);
        s.number("probe_distance", c.probe_distance);
        s.finish();
        const double tmax = sc.t_max();
        if (c.horizons.empty()) c.horizons = {tmax / 4.0, tmax / 2.0, tmax};
        for (std::size_t i = 0; i < c.horizons.size(); ++i) {
            require(c.horizons[i] > 0.0, "`scattering.horizons` must be positive");
            require(i == 0 || c.horizons[i] > c.horizons[i - 1], "`scattering.horizons` must increase");
        }
        if (c.horizons.back() > tmax * (1.0 + 1e-12) && !sc.solver.override_horizon)
            throw ValidationError("`scattering.horizons` reach " + format_double(c.horizons.back()) +
                                  " beyond the horizon T_max = xi_max/K = " + format_double(tmax) +
                                  "; set solver.override_horizon or pass --override-horizon");
        require(c.lambda_in >= 0.0 && c.lambda_out >= 0.0, "`scattering.lambda_in/lambda_out` must be >= 0");
        require(c.probe_distance >= 0.0, "`scattering.probe_distance` must be >= 0");
    }
    {
        Section s(child(doc, "verify"), "verify", unknown);
        s.integer("weight_samples", sc.verify.weight_samples);
        s.integer("dispersion_samples", sc.verify.dispersion_samples);
        s.finish();
        require(sc.verify.weight_samples >= 1, "`verify.weight_samples` must be >= 1");
        require(sc.verify.dispersion_samples >= 1, "`verify.dispersion_samples` must be >= 1");
    }
    if (doc.contains("output")) {
        require(doc["output"].is_string(), "`output` must be a string");
        sc.output = resolve_path(base_dir, doc["output"].get<std::string>());
    }
    if (doc.contains("seed")) {
        require(doc["seed"].is_number_unsigned() || (doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0),
                "`seed` must be a nonnegative integer");
        sc.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("threads")) {
        require(doc["threads"].is_number_integer() && doc["threads"].get<long long>() >= 0,
                "`threads` must be a nonnegative integer");
        sc.threads = doc["threads"].get<unsigned>();
    }

    if (!unknown.empty()) {
        std::sort(unknown.begin(), unknown.end());
        std::string list;
        for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
        throw ValidationError("unknown scenario keys: " + list);
    }
    if (ov.seed) sc.seed = *ov.seed;
    if (ov.threads) sc.threads = *ov.threads;
    if (ov.output) sc.output = *ov.output;

    try {
        const auto eq = sc.make_equilibrium();
        if (eq.dim() != sc.grid.d) throw ValidationError("tabulated equilibrium dimension does not match `equilibrium.dim`");
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(std::string("`equilibrium`: ") + e.what());
    }

    // Resolved document with defaults, recorded in manifests.
    json r;
    const auto& e = sc.equilibrium_config;
    r["equilibrium"] = {{"kind", e.kind}, {"dim", e.dim}, {"sigma", e.sigma}, {"lambda0", e.lambda0}, {"theta", e.theta}};
    if (!e.files.empty()) r["equilibrium"]["files"] = e.files;
    if (!e.table.empty()) r["equilibrium"]["table"] = e.table;
    r["grid"] = {{"K", sc.grid.K},     {"xi_max", sc.grid.xi_max}, {"N_xi", sc.grid.n_xi},
                 {"N_x", sc.phase.n_x}, {"N_v", sc.phase.n_v},      {"V", sc.phase.v_max}};
    r["weights"] = {{"lambda0", sc.weights.lambda0},
                    {"lambda1", sc.weights.lambda1},
                    {"delta", sc.weights.delta},
                    {"direction", sc.weights.direction == WeightDirection::decreasing ? "decreasing" : "increasing"}};
    const auto& in = sc.initial;
    r["initial"] = {{"family", in.family}, {"epsilon", in.epsilon}, {"k0", in.k0}, {"sigma", in.sigma},
                    {"node", in.node},     {"value", {in.value.real(), in.value.imag()}}, {"path", in.path}};
    const auto& so = sc.solver;
    r["solver"] = {{"dt", so.dt},
                   {"T", sc.end_time()},
                   {"T_max", sc.t_max()},
                   {"nonlinear", so.nonlinear},
                   {"direction", so.direction == TimeDirection::forward ? "forward" : "backward"},
                   {"density_interp", to_string(so.density_interp)},
                   {"shift_interp", to_string(so.shift_interp)},
                   {"boundary_threshold", so.boundary_threshold},
                   {"override_horizon", so.override_horizon},
                   {"oracle", so.oracle},
                   {"oracle_boundary_threshold", so.oracle_boundary_threshold}};
    const auto& di = sc.diagnostics;
    r["diagnostics"] = {{"every", di.every}, {"p", di.p_values}, {"beta", di.beta},
                        {"exponent", di.exponent.value_or(6.0 * sc.grid.d)}, {"gevrey_lambda", di.gevrey_lambda},
                        {"snapshots", di.snapshots}, {"series", di.series}};
    r["green"] = {{"s_max", sc.green.s_max}, {"ds", sc.green.ds}, {"k", mode_list_json(sc.green.k)},
                  {"tail_tol", sc.green.tail_tol}};
    r["penrose"] = {{"k_max", *sc.penrose.k_max}, {"samples", sc.penrose.samples}};
    r["density"] = {{"route", sc.density.route}, {"store_every", sc.density.store_every},
                    {"k", mode_list_json(sc.density.k)}};
    r["scattering"] = {{"horizons", sc.scattering.horizons}, {"lambda_in", sc.scattering.lambda_in},
                       {"lambda_out", sc.scattering.lambda_out}, {"probe_distance", sc.scattering.probe_distance}};
    r["verify"] = {{"weight_samples", sc.verify.weight_samples}, {"dispersion_samples", sc.verify.dispersion_samples}};
    r["output"] = sc.output;
    r["seed"] = sc.seed;
    r["threads"] = sc.threads;
    sc.document = std::move(r);
    return sc;
}

Scenario load_scenario(const std::string& path, const ScenarioOverrides& ov) {
    if (!fs::exists(path)) throw IoError("scenario file not found: " + path);
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ValidationError("scenario " + path + " is not valid JSON: " + e.what());
    }
    const std::string base = fs::path(path).parent_path().string();
    Scenario sc = scenario_from_json(doc, base.empty() ? "." : base, ov);
    sc.source = path;
    sc.inputs.insert(sc.inputs.begin(), path);
    return sc;
}

Scenario default_scenario(const ScenarioOverrides& ov) {
    Scenario sc = scenario_from_json(json::object(), ".", ov);
    sc.source = "<defaults>";
    return sc;
}

GlideState build_initial_state(const Scenario& sc) {
    const auto& c = sc.initial;
    if (c.family == "zero") return GlideState(sc.grid, 0.0);
    if (c.family == "cosine-mode") return cosine_mode_glide(sc.grid, c.epsilon, c.k0, c.sigma);
    if (c.family == "impulse") return impulse_glide(sc.grid, c.k0, c.node, c.value);
    auto s = load_glide_state(c.path);
    if (!(s.grid == sc.grid)) throw ValidationError("`initial.path` snapshot grid does not match `grid`");
    return s;
}

}  // namespace landau
