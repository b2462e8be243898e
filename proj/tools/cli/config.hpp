#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lab {

enum class FieldType { integer, real, seed, integers, reals, text };

struct FieldSpec {
    std::string name;
    FieldType type;
    std::string fallback;
};

// A schema violation, reported as "<file>:<line>: [section] field: message".
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& where, const std::string& message)
        : std::runtime_error(where.empty() ? message : where + ": " + message) {}
};

/// Effective settings of one experiment: schema defaults overridden by the
/// config file. Values are kept in normalized text form.
class Section {
public:
    Section(std::string name, std::vector<FieldSpec> fields);

    const std::string& name() const { return name_; }
    const std::vector<FieldSpec>& fields() const { return fields_; }

    long long integer(const std::string& key) const;
    double real(const std::string& key) const;
    std::uint64_t seed(const std::string& key) const;
    std::vector<long long> integers(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
    const std::string& text(const std::string& key) const;

    // key -> normalized value, every field of the schema
    const std::map<std::string, std::string>& values() const { return values_; }

    void set(const std::string& key, const std::string& raw, const std::string& where);

private:
    const FieldSpec& spec(const std::string& key) const;

    std::string name_;
    std::vector<FieldSpec> fields_;
    std::map<std::string, std::string> values_;
};

using Schema = std::map<std::string, std::vector<FieldSpec>>;

class Config {
public:
    explicit Config(const Schema& schema);

    // Whole-file validation: unknown sections, unknown keys, bad values and
    // duplicate keys are all errors.
    void load(const std::string& path);

    const Section& section(const std::string& name) const;
    const std::string& source() const { return source_; }

private:
    std::map<std::string, Section> sections_;
    std::string source_;
};

// Throws ConfigError naming the section and key.
void require_nonempty(const Section& s, const std::string& key, std::size_t size);
void require_ordered(const Section& s, const std::string& lo, const std::string& hi);

}  // namespace lab
