#include "config.hpp"

#include "strichartz/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace lab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
bool parse_number(const std::string& text, T& out) {
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::string normalize_integer(const std::string& raw, const std::string& where) {
    long long v = 0;
    if (!parse_number(raw, v)) throw ConfigError(where, "expected an integer, got '" + raw + "'");
    return std::to_string(v);
}

std::string normalize_real(const std::string& raw, const std::string& where) {
    double v = 0.0;
    if (!parse_number(raw, v) || !std::isfinite(v)) throw ConfigError(where, "expected a finite number, got '" + raw + "'");
    return strichartz::format_double(v);
}

std::string normalize_seed(const std::string& raw, const std::string& where) {
    std::uint64_t v = 0;
    if (!parse_number(raw, v)) throw ConfigError(where, "expected an unsigned 64-bit seed, got '" + raw + "'");
    return std::to_string(v);
}

template <class F>
std::string normalize_list(const std::string& raw, const std::string& where, F item) {
    std::string out;
    for (const auto& part : split_list(raw)) {
        if (part.empty()) throw ConfigError(where, "empty list item in '" + raw + "'");
        if (!out.empty()) out += ',';
        out += item(part, where);
    }
    return out;
}

std::string normalize(FieldType type, const std::string& raw, const std::string& where) {
    const std::string v = trim(raw);
    switch (type) {
        case FieldType::integer:
            return normalize_integer(v, where);
        case FieldType::real:
            return normalize_real(v, where);
        case FieldType::seed:
            return normalize_seed(v, where);
        case FieldType::integers:
            return normalize_list(v, where, normalize_integer);
        case FieldType::reals:
            return normalize_list(v, where, normalize_real);
        case FieldType::text:
            return v;
    }
    return v;
}

}  // namespace

Section::Section(std::string name, std::vector<FieldSpec> fields) : name_(std::move(name)), fields_(std::move(fields)) {
    for (const auto& f : fields_) set(f.name, f.fallback, "default [" + name_ + "] " + f.name);
}

const FieldSpec& Section::spec(const std::string& key) const {
    for (const auto& f : fields_)
        if (f.name == key) return f;
    throw std::logic_error("no field '" + key + "' in section [" + name_ + "]");
}

void Section::set(const std::string& key, const std::string& raw, const std::string& where) {
    values_[key] = normalize(spec(key).type, raw, where);
}

long long Section::integer(const std::string& key) const {
    long long v = 0;
    parse_number(values_.at(key), v);
    return v;
}

double Section::real(const std::string& key) const {
    double v = 0.0;
    parse_number(values_.at(key), v);
    return v;
}

std::uint64_t Section::seed(const std::string& key) const {
    std::uint64_t v = 0;
    parse_number(values_.at(key), v);
    return v;
}

std::vector<long long> Section::integers(const std::string& key) const {
    std::vector<long long> out;
    for (const auto& part : split_list(values_.at(key))) {
        long long v = 0;
        parse_number(part, v);
        out.push_back(v);
    }
    return out;
}

std::vector<double> Section::reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& part : split_list(values_.at(key))) {
        double v = 0.0;
        parse_number(part, v);
        out.push_back(v);
    }
    return out;
}

const std::string& Section::text(const std::string& key) const { return values_.at(key); }

Config::Config(const Schema& schema) {
    for (const auto& [name, fields] : schema) sections_.emplace(name, Section(name, fields));
}

void Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    source_ = path;
    std::string line;
    std::size_t number = 0;
    Section* current = nullptr;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++number;
        const std::string where = path + ":" + std::to_string(number);
        const std::string body = trim(line.substr(0, line.find_first_of("#;")));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') throw ConfigError(where, "unterminated section header");
            const std::string name = trim(body.substr(1, body.size() - 2));
            const auto it = sections_.find(name);
            if (it == sections_.end()) throw ConfigError(where, "unknown section [" + name + "]");
            current = &it->second;
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value'");
        if (current == nullptr) throw ConfigError(where, "key outside of any section");
        const std::string key = trim(body.substr(0, eq));
        const std::string field = where + ": [" + current->name() + "] " + key;
        bool known = false;
        for (const auto& f : current->fields()) known = known || f.name == key;
        if (!known) throw ConfigError(field, "unknown field");
        if (!seen.insert(current->name() + "." + key).second) throw ConfigError(field, "duplicate field");
        current->set(key, body.substr(eq + 1), field);
    }
}

const Section& Config::section(const std::string& name) const { return sections_.at(name); }

void require_nonempty(const Section& s, const std::string& key, std::size_t size) {
    if (size == 0) throw ConfigError("[" + s.name() + "] " + key, "empty range");
}

void require_ordered(const Section& s, const std::string& lo, const std::string& hi) {
    if (s.integer(lo) > s.integer(hi)) {
        throw ConfigError("[" + s.name() + "] " + lo + ", " + hi,
                          "empty range (" + s.text(lo) + " > " + s.text(hi) + ")");
    }
}

}  // namespace lab
