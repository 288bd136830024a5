#include "fraclab/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fraclab::config {

namespace {
std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        char tmp[40];
        std::snprintf(tmp, sizeof tmp, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(tmp, "%lf", &back);
        if (back == v) return tmp;
    }
    return buf;
}

KvDoc KvDoc::parse(const std::string& text) {
    KvDoc doc;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config parse error at line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config parse error at line " + std::to_string(lineno) +
                                     ": empty key");
        doc.set(key, val);
    }
    return doc;
}

KvDoc KvDoc::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string KvDoc::serialize() const {
    std::ostringstream os;
    for (const auto& [k, v] : items_) os << k << " = " << v << "\n";
    return os.str();
}

void KvDoc::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : items_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    items_.emplace_back(key, value);
}

void KvDoc::set_double(const std::string& key, double v) { set(key, format_double(v)); }
void KvDoc::set_int(const std::string& key, long long v) { set(key, std::to_string(v)); }

bool KvDoc::has(const std::string& key) const {
    return std::any_of(items_.begin(), items_.end(),
                       [&](const auto& kv) { return kv.first == key; });
}

const std::string& KvDoc::get(const std::string& key) const {
    for (const auto& kv : items_)
        if (kv.first == key) return kv.second;
    throw std::runtime_error("missing config key: " + key);
}

std::string KvDoc::get_or(const std::string& key, const std::string& def) const {
    return has(key) ? get(key) : def;
}

double KvDoc::get_double(const std::string& key) const {
    const std::string& s = get(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config key " + key + ": not a number: " + s);
    }
}

double KvDoc::get_double_or(const std::string& key, double def) const {
    return has(key) ? get_double(key) : def;
}

long long KvDoc::get_int(const std::string& key) const {
    const std::string& s = get(key);
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config key " + key + ": not an integer: " + s);
    }
}

long long KvDoc::get_int_or(const std::string& key, long long def) const {
    return has(key) ? get_int(key) : def;
}

std::vector<double> KvDoc::get_list(const std::string& key) const {
    const std::string& s = get(key);
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::runtime_error("config key " + key + ": not a number list: " + s);
        }
    }
    return out;
}

void KvDoc::merge_from(const KvDoc& other) {
    for (const auto& [k, v] : other.items_) set(k, v);
}

// ---------------------------------------------------------------------------
// Spec serialization
// ---------------------------------------------------------------------------

void domain_to_kv(const geom::Domain& dom, KvDoc& doc) {
    switch (dom.kind()) {
    case geom::DomainKind::Cube:
        doc.set("domain.type", "cube");
        doc.set_int("domain.n", dom.dim());
        break;
    case geom::DomainKind::Ball:
        doc.set("domain.type", "ball");
        doc.set_int("domain.n", dom.dim());
        doc.set_double("domain.radius", dom.radius());
        break;
    case geom::DomainKind::Cusp:
        doc.set("domain.type", "cusp");
        doc.set_int("domain.n", 2);
        doc.set_double("domain.alpha", dom.alpha());
        doc.set_int("domain.resolution", dom.boundary_resolution());
        break;
    case geom::DomainKind::Mushroom: {
        doc.set("domain.type", "mushroom");
        doc.set_int("domain.n", 2);
        doc.set_double("domain.beta", dom.beta());
        doc.set_double("domain.cube_side", dom.cube_side());
        std::ostringstream os;
        const auto& r = dom.stem_radii();
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
        doc.set("domain.stems", os.str());
        doc.set_int("domain.resolution", dom.boundary_resolution());
        break;
    }
    }
}

geom::Domain domain_from_kv(const KvDoc& doc) {
    const std::string type = doc.get("domain.type");
    if (type == "cube") return geom::Domain::unit_cube(static_cast<int>(doc.get_int_or("domain.n", 2)));
    if (type == "ball")
        return geom::Domain::ball(static_cast<int>(doc.get_int_or("domain.n", 2)),
                                  doc.get_double("domain.radius"));
    if (type == "cusp")
        return geom::Domain::cusp(doc.get_double("domain.alpha"),
                                  static_cast<int>(doc.get_int_or("domain.resolution", 2048)));
    if (type == "mushroom")
        return geom::Domain::mushroom(doc.get_double("domain.beta"),
                                      doc.get_double_or("domain.cube_side", 1.0),
                                      doc.get_list("domain.stems"),
                                      static_cast<int>(doc.get_int_or("domain.resolution", 2048)));
    throw std::runtime_error("unknown domain.type: " + type);
}

void field_to_kv(const fields::Field& f, KvDoc& doc) {
    struct V {
        KvDoc& doc;
        void operator()(const fields::Constant& c) const {
            doc.set("field.type", "constant");
            doc.set_double("field.value", c.value);
        }
        void operator()(const fields::Coordinate& c) const {
            doc.set("field.type", "coordinate");
            doc.set_int("field.axis", c.axis);
        }
        void operator()(const fields::Sine& s) const {
            doc.set("field.type", "sine");
            doc.set_int("field.axis", s.axis);
            doc.set_double("field.freq", s.freq);
        }
        void operator()(const fields::GaussianBump& g) const {
            doc.set("field.type", "gaussian");
            std::ostringstream os;
            for (std::size_t i = 0; i < g.center.size(); ++i)
                os << (i ? "," : "") << format_double(g.center[i]);
            doc.set("field.center", os.str());
            doc.set_double("field.width", g.width);
        }
        void operator()(const fields::CuspPower& c) const {
            doc.set("field.type", "cusp_power");
            doc.set_double("field.nu", c.nu);
        }
        void operator()(const fields::MushroomBump& b) const {
            doc.set("field.type", "mushroom_bump");
            doc.set_int("field.index", b.index);
        }
    };
    std::visit(V{doc}, f.descriptor());
}

fields::Field field_from_kv(const KvDoc& doc, const geom::Domain& dom) {
    const std::string type = doc.get("field.type");
    if (type == "constant") return fields::constant(doc.get_double_or("field.value", 1.0));
    if (type == "coordinate")
        return fields::coordinate(static_cast<int>(doc.get_int_or("field.axis", 1)));
    if (type == "sine")
        return fields::sine(static_cast<int>(doc.get_int_or("field.axis", 1)),
                            doc.get_double_or("field.freq", 1.0));
    if (type == "gaussian") {
        std::vector<double> center = doc.has("field.center")
                                         ? doc.get_list("field.center")
                                         : std::vector<double>(static_cast<std::size_t>(dom.dim()), 0.5);
        return fields::gaussian_bump(std::move(center), doc.get_double_or("field.width", 0.3));
    }
    if (type == "cusp_power") return fields::cusp_power(doc.get_double("field.nu"));
    if (type == "mushroom_bump")
        return fields::mushroom_bump(dom, static_cast<int>(doc.get_int_or("field.index", 0)));
    throw std::runtime_error("unknown field.type: " + type);
}

void frac_params_to_kv(const funct::FracParams& p, KvDoc& doc) {
    doc.set_double("params.s", p.s);
    doc.set_double("params.p", p.p);
    doc.set_double("params.q", p.q);
    doc.set_double("params.a", p.a);
    doc.set_double("params.b", p.b);
    doc.set_double("params.tau", p.tau);
}

funct::FracParams frac_params_from_kv(const KvDoc& doc) {
    funct::FracParams p;
    p.s = doc.get_double_or("params.s", 0.5);
    p.p = doc.get_double_or("params.p", 2.0);
    p.q = doc.get_double_or("params.q", p.p);
    p.a = doc.get_double_or("params.a", 0.0);
    p.b = doc.get_double_or("params.b", 0.0);
    p.tau = doc.get_double_or("params.tau", 0.5);
    p.validate();
    return p;
}

void mc_config_to_kv(const mc::McConfig& m, KvDoc& doc) {
    doc.set_int("mc.n_pairs", m.n_pairs);
    doc.set_int("mc.seed", static_cast<long long>(m.seed));
    doc.set_double("mc.r_min_rel", m.r_min_rel);
    doc.set_int("mc.chunk", m.chunk);
    doc.set_int("mc.workers", m.workers);
}

mc::McConfig mc_config_from_kv(const KvDoc& doc) {
    mc::McConfig m;
    m.n_pairs = doc.get_int_or("mc.n_pairs", m.n_pairs);
    m.seed = static_cast<std::uint64_t>(doc.get_int_or("mc.seed", 0));
    m.r_min_rel = doc.get_double_or("mc.r_min_rel", m.r_min_rel);
    m.chunk = doc.get_int_or("mc.chunk", m.chunk);
    m.workers = static_cast<int>(doc.get_int_or("mc.workers", 0));
    m.validate();
    return m;
}

} // namespace fraclab::config
