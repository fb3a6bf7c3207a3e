#include "freeconv/measureparse.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "freeconv/csvio.hpp"

namespace freeconv {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& body) {
    std::vector<std::pair<double, double>> out;
    size_t pos = 0;
    while (true) {
        size_t open = body.find('(', pos);
        if (open == std::string::npos) break;
        size_t comma = body.find(',', open);
        size_t close = body.find(')', open);
        if (comma == std::string::npos || close == std::string::npos || comma > close)
            throw std::invalid_argument("malformed pair in measure literal: " + body);
        double x = std::stod(body.substr(open + 1, comma - open - 1));
        double m = std::stod(body.substr(comma + 1, close - comma - 1));
        out.emplace_back(x, m);
        pos = close + 1;
    }
    if (out.empty()) throw std::invalid_argument("no pairs in measure literal: " + body);
    return out;
}

std::map<std::string, double> parse_kv(std::istringstream& in) {
    std::map<std::string, double> kv;
    std::string tok;
    while (in >> tok) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got: " + tok);
        kv[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
    }
    return kv;
}

double kv_get(const std::map<std::string, double>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("missing parameter: " + key);
    return it->second;
}

double kv_get_or(const std::map<std::string, double>& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

Measure parse_law(const std::string& body) {
    std::istringstream in(body);
    std::string name;
    in >> name;
    for (auto& c : name) c = char(std::tolower(c));
    auto kv = parse_kv(in);
    if (name == "freestable")
        return Measure::free_stable(kv_get(kv, "alpha"), kv_get(kv, "rho"), kv_get_or(kv, "scale", 1.0));
    if (name == "booleanstable")
        return Measure::boolean_stable(kv_get(kv, "alpha"), kv_get(kv, "rho"), kv_get_or(kv, "scale", 1.0));
    if (name == "semicircle") return Measure::semicircle(kv_get_or(kv, "a", 0.0), kv_get(kv, "v"));
    if (name == "mp" || name == "marchenkopastur") return Measure::marchenko_pastur();
    if (name == "cauchy") return Measure::cauchy(kv_get(kv, "a"), kv_get(kv, "b"));
    if (name == "point") return Measure::point_mass(kv_get(kv, "a"));
    throw std::invalid_argument("unknown law: " + name);
}

Measure parse_density_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open density csv: " + path);
    std::vector<double> xs, fs;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("density csv needs two columns: " + path);
        try {
            double x = std::stod(line.substr(0, comma));
            double f = std::stod(line.substr(comma + 1));
            xs.push_back(x);
            fs.push_back(std::max(0.0, f));
        } catch (const std::exception&) {
            if (xs.empty()) continue;  // header row
            throw std::invalid_argument("malformed density row in " + path + ": " + line);
        }
    }
    if (xs.size() < 2) throw std::invalid_argument("density csv too short: " + path);
    double mass = 0.0;
    for (size_t i = 0; i + 1 < xs.size(); ++i) mass += 0.5 * (fs[i] + fs[i + 1]) * (xs[i + 1] - xs[i]);
    if (!(mass > 0.0)) throw std::invalid_argument("density csv carries no mass: " + path);
    for (auto& f : fs) f /= mass;
    return Measure::grid_density(std::move(xs), std::move(fs));
}

Measure parse_grid_inline(const std::string& body) {
    double atom0 = 0.0;
    std::string pair_part = body;
    if (size_t semi = body.find(';'); semi != std::string::npos) {
        pair_part = body.substr(0, semi);
        std::string rest = trim(body.substr(semi + 1));
        if (rest.rfind("atom0=", 0) == 0) atom0 = std::stod(rest.substr(6));
    }
    auto pairs = parse_pairs(pair_part);
    std::vector<double> xs, fs;
    for (auto [x, f] : pairs) {
        xs.push_back(x);
        fs.push_back(f);
    }
    return Measure::grid_density(std::move(xs), std::move(fs), atom0);
}

}  // namespace

Measure parse_measure(const std::string& text) {
    std::string s = trim(text);
    size_t colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("measure literal needs a kind prefix: " + text);
    std::string kind = trim(s.substr(0, colon));
    std::string body = trim(s.substr(colon + 1));
    for (auto& c : kind) c = char(std::tolower(c));
    if (kind == "atomic") return Measure::atomic(parse_pairs(body));
    if (kind == "density") return parse_density_csv(body);
    if (kind == "gridinline") return parse_grid_inline(body);
    if (kind == "law") return parse_law(body);
    throw std::invalid_argument("unknown measure kind: " + kind);
}

std::string serialize_measure(const Measure& m) {
    if (m.is_atomic()) {
        const auto& a = std::get<AtomicMeasure>(m.repr());
        std::string out = "atomic:";
        for (auto [x, w] : a.atoms) out += " (" + format_double(x) + "," + format_double(w) + ")";
        return out;
    }
    if (m.is_grid()) {
        const auto& g = std::get<GridDensityMeasure>(m.repr());
        std::string out = "gridinline:";
        for (size_t i = 0; i < g.grid.size(); ++i)
            out += "(" + format_double(g.grid[i]) + "," + format_double(g.density[i]) + ")";
        if (g.atom_at_zero > 0.0) out += ";atom0=" + format_double(g.atom_at_zero);
        return out;
    }
    const auto& p = std::get<ParametricLaw>(m.repr());
    switch (p.law) {
        case Law::PointMass: return "law: point a=" + format_double(p.a);
        case Law::Semicircle:
            return "law: semicircle a=" + format_double(p.a) + " v=" + format_double(p.b);
        case Law::MarchenkoPastur: return "law: mp";
        case Law::CauchyDist:
            return "law: cauchy a=" + format_double(p.a) + " b=" + format_double(p.b);
        case Law::FreeStable:
            return "law: freestable alpha=" + format_double(p.stable.alpha) +
                   " rho=" + format_double(p.stable.rho) + " scale=" + format_double(p.stable.scale);
        case Law::BooleanStable:
            return "law: booleanstable alpha=" + format_double(p.stable.alpha) +
                   " rho=" + format_double(p.stable.rho) + " scale=" + format_double(p.stable.scale);
    }
    throw std::logic_error("unknown law");
}

}  // namespace freeconv
