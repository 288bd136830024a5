#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraclab/fields.hpp"
#include "fraclab/functionals.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/mc.hpp"

namespace fraclab::config {

// Ordered key-value document ("key = value" per line, '#' comments). This is
// the on-disk run configuration; every run is a pure function of it.
class KvDoc {
public:
    static KvDoc parse(const std::string& text);
    static KvDoc load(const std::string& path);
    std::string serialize() const;

    void set(const std::string& key, const std::string& value);
    void set_double(const std::string& key, double v);
    void set_int(const std::string& key, long long v);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const; // throws if missing
    std::string get_or(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double def) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long def) const;
    std::vector<double> get_list(const std::string& key) const; // comma separated

    // Later documents override earlier keys.
    void merge_from(const KvDoc& other);

    const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

// Domain and field specs in the shared schema (domain.* / field.* keys).
void domain_to_kv(const geom::Domain& dom, KvDoc& doc);
geom::Domain domain_from_kv(const KvDoc& doc);

void field_to_kv(const fields::Field& f, KvDoc& doc);
fields::Field field_from_kv(const KvDoc& doc, const geom::Domain& dom);

void frac_params_to_kv(const funct::FracParams& p, KvDoc& doc);
funct::FracParams frac_params_from_kv(const KvDoc& doc);

void mc_config_to_kv(const mc::McConfig& m, KvDoc& doc);
mc::McConfig mc_config_from_kv(const KvDoc& doc);

std::string format_double(double v); // shortest round-trip, '.' decimal

} // namespace fraclab::config
