#include "liq/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace liq {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::array<double, kMaxDim> to_lin(const std::vector<double>& v, const std::string& key) {
    if (v.empty() || v.size() > kMaxDim)
        throw ConfigError(key + ": expected 1.." + std::to_string(kMaxDim) + " numbers");
    std::array<double, kMaxDim> a{};
    for (std::size_t i = 0; i < v.size(); ++i) a[i] = v[i];
    return a;
}

ScalarField load_field(const ConfigFile& cfg, const std::string& section) {
    const std::string form = cfg.text_or(section + ".form", "constant");
    if (form == "constant") {
        return ScalarField::constant(cfg.number(section + ".value"));
    }
    if (form == "affine_clipped") {
        const double a0 = cfg.number_or(section + ".a0", 0.0);
        const auto lin = to_lin(cfg.numbers(section + ".lin"), section + ".lin");
        const double floor = cfg.number(section + ".floor");
        const double cap = cfg.number(section + ".cap");
        const double width = cfg.number_or(section + ".width", 1e-3 * (cap - floor));
        return ScalarField::affine(a0, lin).clipped(floor, cap, width);
    }
    if (form == "logistic") {
        const double base = cfg.number(section + ".base");
        const double scale = cfg.number(section + ".scale");
        const auto w = to_lin(cfg.numbers(section + ".w"), section + ".w");
        const double bias = cfg.number_or(section + ".bias", 0.0);
        return ScalarField::logistic_linear(base, scale, w, bias);
    }
    if (form == "tabulated") {
        const int axis = static_cast<int>(cfg.integer_or(section + ".axis", 0));
        return ScalarField::tabulated(axis, cfg.numbers(section + ".knots"),
                                      cfg.numbers(section + ".values"));
    }
    throw ConfigError(section + ".form: unknown coefficient form '" + form + "'");
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& content, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    cfg.hash_ = fnv1a(content);

    std::istringstream in(content);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value' or '[section]'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        cfg.entries_[full] = Entry{value, line_no};
    }
    return cfg;
}

const ConfigFile::Entry& ConfigFile::lookup(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(origin_ + ": missing required key '" + key + "'");
    return it->second;
}

bool ConfigFile::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string ConfigFile::text(const std::string& key) const { return lookup(key).value; }

std::string ConfigFile::text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
}

double ConfigFile::number(const std::string& key) const {
    const Entry& e = lookup(key);
    try {
        std::size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (used != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                          "' is not a number: '" + e.value + "'");
    }
}

double ConfigFile::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

long ConfigFile::integer(const std::string& key) const {
    const double v = number(key);
    const long r = static_cast<long>(v);
    if (static_cast<double>(r) != v) {
        const Entry& e = lookup(key);
        throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                          "' must be an integer");
    }
    return r;
}

long ConfigFile::integer_or(const std::string& key, long fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::vector<double> ConfigFile::numbers(const std::string& key) const {
    const Entry& e = lookup(key);
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                              "' has a non-numeric list item: '" + item + "'");
        }
    }
    if (out.empty())
        throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" + key +
                          "' has an empty list");
    return out;
}

std::vector<std::string> ConfigFile::words(const std::string& key) const {
    const Entry& e = lookup(key);
    std::vector<std::string> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void ConfigFile::override_value(const std::string& key, const std::string& value) {
    entries_[key] = Entry{value, 0};
}

ExperimentConfig load_experiment_config(const ConfigFile& cfg) {
    ExperimentConfig out;
    ProblemInputs& in = out.inputs;

    in.horizon = cfg.number("problem.horizon");
    in.t0 = cfg.number_or("problem.t0", 0.0);
    in.x0 = cfg.number_or("problem.x0", 1.0);

    const int dim = static_cast<int>(cfg.integer_or("problem.factor.dim", 1));
    const int noise = static_cast<int>(cfg.integer_or("problem.factor.noise_dim", dim));
    in.factor.dim = dim;
    in.factor.noise_dim = noise;
    in.factor.lipschitz_const = cfg.number_or("problem.factor.lipschitz", 10.0);
    in.factor.ellipticity_min = cfg.number("problem.factor.ellipticity");
    in.factor.drift_sup = cfg.number_or("problem.factor.drift_sup", 1e6);
    in.factor.sigma_sup = cfg.number_or("problem.factor.sigma_sup", 1e6);

    for (int a = 0; a < dim; ++a) {
        std::string section = "problem.factor.drift." + std::to_string(a);
        if (!cfg.has(section + ".form") && !cfg.has(section + ".value") && a == 0)
            section = "problem.factor.drift";
        in.factor.drift.push_back(load_field(cfg, section));
    }

    const std::string sigma_form = cfg.text_or("problem.factor.sigma.form", "constant");
    if (sigma_form == "constant") {
        std::vector<double> entries = cfg.numbers("problem.factor.sigma.entries");
        if (entries.size() == 1 && dim * noise > 1) {
            // scalar shorthand: sigma = s I
            std::vector<double> full(static_cast<std::size_t>(dim * noise), 0.0);
            for (int a = 0; a < std::min(dim, noise); ++a)
                full[static_cast<std::size_t>(a * noise + a)] = entries[0];
            entries = std::move(full);
        }
        in.factor.sigma = MatrixField::constant(dim, noise, std::move(entries));
    } else if (sigma_form == "diagonal") {
        std::vector<ScalarField> diag;
        for (int a = 0; a < dim; ++a)
            diag.push_back(load_field(cfg, "problem.factor.sigma." + std::to_string(a)));
        in.factor.sigma = MatrixField::diagonal(std::move(diag));
        in.factor.noise_dim = dim;
    } else {
        throw ConfigError("problem.factor.sigma.form: unknown form '" + sigma_form + "'");
    }

    in.costs.eta = load_field(cfg, "problem.costs.eta");
    in.costs.gamma = load_field(cfg, "problem.costs.gamma");
    in.costs.lambda = load_field(cfg, "problem.costs.lambda");
    in.costs.theta = cfg.number_or("problem.theta", 0.0);
    in.costs.p = cfg.number_or("problem.p", 2.0);
    in.costs.kappa0 = cfg.number("problem.costs.kappa0");

    const std::vector<double> lo = cfg.numbers("domain.lo");
    const std::vector<double> hi = cfg.numbers("domain.hi");
    in.domain.dim = dim;
    for (int a = 0; a < dim; ++a) {
        in.domain.lo[a] = lo[std::min<std::size_t>(static_cast<std::size_t>(a), lo.size() - 1)];
        in.domain.hi[a] = hi[std::min<std::size_t>(static_cast<std::size_t>(a), hi.size() - 1)];
    }
    in.validation_nodes_per_axis = static_cast<int>(cfg.integer_or("domain.validation_nodes", 101));

    const std::vector<double> y0 = cfg.numbers("problem.y0");
    in.y0.dim = dim;
    for (int a = 0; a < dim; ++a)
        in.y0[a] = y0[std::min<std::size_t>(static_cast<std::size_t>(a), y0.size() - 1)];

    out.grid.nt = static_cast<int>(cfg.integer_or("grid.nt", 4096));
    out.grid.ny = static_cast<int>(cfg.integer_or("grid.ny", 41));
    out.grid.refine_ratio = cfg.number_or("grid.refine_ratio", 0.5);
    out.solve.series_tol = cfg.number_or("grid.series_tol", 1e-12);

    out.sim.n_paths = cfg.integer_or("simulation.paths", 10000);
    out.sim.seed = static_cast<std::uint64_t>(cfg.integer_or("simulation.seed", 20177));
    out.sim.steps = static_cast<int>(cfg.integer_or("simulation.steps", 512));
    out.sim.strategy = cfg.text_or("simulation.strategy", "feedback");
    out.sim.dump_paths = static_cast<int>(cfg.integer_or("simulation.dump_paths", 0));

    if (cfg.has("probes.times")) {
        const std::vector<double> times = cfg.numbers("probes.times");
        std::vector<std::vector<double>> points;
        if (cfg.has("probes.points")) {
            const std::vector<double> flat = cfg.numbers("probes.points");
            if (flat.size() % static_cast<std::size_t>(dim) != 0)
                throw ConfigError("probes.points: length must be a multiple of the dimension");
            for (std::size_t i = 0; i < flat.size(); i += static_cast<std::size_t>(dim))
                points.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(i),
                                    flat.begin() + static_cast<std::ptrdiff_t>(i + static_cast<std::size_t>(dim)));
        } else {
            points.push_back(std::vector<double>(static_cast<std::size_t>(dim), 0.0));
            for (int a = 0; a < dim; ++a)
                points.back()[static_cast<std::size_t>(a)] = in.y0[a];
        }
        for (double t : times) {
            for (const auto& pt : points) {
                Probe probe;
                probe.t = t;
                probe.y.dim = dim;
                for (int a = 0; a < dim; ++a) probe.y[a] = pt[static_cast<std::size_t>(a)];
                out.probes.push_back(probe);
            }
        }
    }

    if (cfg.has("experiments.run")) out.experiments = cfg.words("experiments.run");
    for (const char* name : {"solve", "simulate", "verify-bounds", "certificate", "asymptotics",
                             "compare-strategies"}) {
        const std::string key = std::string("experiment.") + name + ".output";
        if (cfg.has(key)) out.output_names[name] = cfg.text(key);
    }
    return out;
}

}  // namespace liq
