#include "faht/data.hpp"

#include "faht/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace faht {

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

bool is_missing_token(const std::string& s) { return s.empty() || s == kMissingSymbol; }

// RFC-4180-style reader: quoted fields may contain commas, doubled quotes
// and newlines; unquoted fields are trimmed (Adult pads with spaces).
class CsvReader {
  public:
    explicit CsvReader(std::istream& is) : is_(is) {}

    // Reads one record; false at end of input. Skips blank lines.
    bool next(std::vector<std::string>& fields, long& line_number) {
        fields.clear();
        std::string field;
        bool in_quotes = false;
        bool field_quoted = false;
        bool any = false;
        line_number = line_ + 1;
        int c;
        while ((c = is_.get()) != EOF) {
            if (c == '\n') ++line_;
            if (in_quotes) {
                if (c == '"') {
                    if (is_.peek() == '"') {
                        field.push_back('"');
                        is_.get();
                    } else {
                        in_quotes = false;
                    }
                } else {
                    field.push_back(static_cast<char>(c));
                }
                continue;
            }
            if (c == '"' && trim(field).empty() && !field_quoted) {
                in_quotes = true;
                field_quoted = true;
                field.clear();
                any = true;
                continue;
            }
            if (c == ',') {
                fields.push_back(field_quoted ? field : trim(field));
                field.clear();
                field_quoted = false;
                any = true;
                continue;
            }
            if (c == '\n') {
                if (fields.empty() && !field_quoted && trim(field).empty()) {  // blank line
                    field.clear();
                    any = false;
                    line_number = line_ + 1;
                    continue;
                }
                fields.push_back(field_quoted ? field : trim(field));
                return true;
            }
            field.push_back(static_cast<char>(c));
            any = true;
        }
        if (in_quotes) throw ParseError("unterminated quoted field", line_number);
        if (any || !trim(field).empty()) {
            fields.push_back(field_quoted ? field : trim(field));
            return true;
        }
        return false;
    }

  private:
    std::istream& is_;
    long line_ = 0;
};

struct RawColumn {
    std::string name;
    bool numeric_candidate = true;
    bool saw_value = false;
    std::vector<std::string> domain;  // first-appearance order
    std::unordered_map<std::string, int> domain_index;

    void note(const std::string& value) {
        saw_value = true;
        double d;
        if (numeric_candidate && !parse_double(value, d)) numeric_candidate = false;
        if (domain_index.emplace(value, static_cast<int>(domain.size())).second) {
            domain.push_back(value);
        }
    }
};

struct TableSchema {
    std::vector<std::string> column_names;
    std::vector<AttributeSpec> columns;  // kinds and domains, parallel to names
};

TableSchema infer_csv_schema(const std::filesystem::path& path, const DatasetConfig& config) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open dataset file: " + path.string());
    CsvReader reader(is);

    std::vector<std::string> fields;
    long line = 0;
    if (!reader.next(fields, line)) throw ParseError("empty CSV file: " + path.string());
    std::vector<RawColumn> cols(fields.size());
    for (size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].empty()) throw ParseError("empty column name in header", line);
        cols[i].name = fields[i];
    }

    while (reader.next(fields, line)) {
        if (fields.size() != cols.size()) {
            throw ParseError("row has " + std::to_string(fields.size()) + " fields, header has " +
                                 std::to_string(cols.size()),
                             line);
        }
        for (size_t i = 0; i < fields.size(); ++i) {
            if (is_missing_token(fields[i])) continue;
            cols[i].note(fields[i]);
        }
    }

    std::unordered_set<std::string> forced_numeric(config.force_numeric.begin(), config.force_numeric.end());

    TableSchema out;
    for (RawColumn& c : cols) {
        out.column_names.push_back(c.name);
        AttributeSpec spec;
        spec.name = c.name;
        auto declared = config.declared_domains.find(c.name);
        if (declared != config.declared_domains.end()) {
            spec.kind = AttributeKind::Nominal;
            spec.values = declared->second;
            for (const std::string& v : c.domain) {
                if (spec.value_index(v) < 0 && v != kMissingSymbol) {
                    throw SchemaError("value '" + v + "' of column '" + c.name +
                                      "' is not in its declared domain");
                }
            }
        } else if (forced_numeric.count(c.name)) {
            if (!c.numeric_candidate && c.saw_value) {
                throw SchemaError("column '" + c.name + "' declared numeric but holds non-numeric values");
            }
            spec.kind = AttributeKind::Numeric;
        } else if (c.numeric_candidate && c.saw_value) {
            spec.kind = AttributeKind::Numeric;
        } else {
            spec.kind = AttributeKind::Nominal;
            spec.values = std::move(c.domain);
        }
        out.columns.push_back(std::move(spec));
    }
    return out;
}

std::string strip_arff_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') || (s.front() == '"' && s.back() == '"'))) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

// Minimal ARFF subset: @relation, @attribute name {v,...}|numeric|real|integer,
// @data with CSV rows, '%' comments, '?' missing. Sparse format unsupported.
void parse_arff(const std::filesystem::path& path, TableSchema& schema,
                std::vector<std::vector<std::string>>& rows) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open dataset file: " + path.string());

    std::string raw;
    long line = 0;
    bool in_data = false;
    while (std::getline(is, raw)) {
        ++line;
        std::string text = trim(raw);
        if (text.empty() || text[0] == '%') continue;
        if (!in_data && text[0] == '@') {
            std::istringstream ls(text);
            std::string keyword;
            ls >> keyword;
            if (iequals(keyword, "@relation")) continue;
            if (iequals(keyword, "@data")) {
                in_data = true;
                continue;
            }
            if (iequals(keyword, "@attribute")) {
                std::string rest = trim(text.substr(keyword.size()));
                AttributeSpec spec;
                size_t brace = rest.find('{');
                if (brace != std::string::npos) {
                    if (rest.back() != '}') throw ParseError("malformed nominal domain", line);
                    spec.name = strip_arff_quotes(trim(rest.substr(0, brace)));
                    spec.kind = AttributeKind::Nominal;
                    std::string body = rest.substr(brace + 1, rest.size() - brace - 2);
                    std::istringstream vs(body);
                    std::string v;
                    while (std::getline(vs, v, ',')) {
                        spec.values.push_back(strip_arff_quotes(trim(v)));
                    }
                    if (spec.values.empty()) throw ParseError("empty nominal domain", line);
                } else {
                    std::istringstream as(rest);
                    std::string name, type;
                    as >> name >> type;
                    spec.name = strip_arff_quotes(name);
                    if (iequals(type, "numeric") || iequals(type, "real") || iequals(type, "integer")) {
                        spec.kind = AttributeKind::Numeric;
                    } else {
                        throw ParseError("unsupported attribute type '" + type + "'", line);
                    }
                }
                schema.column_names.push_back(spec.name);
                schema.columns.push_back(std::move(spec));
                continue;
            }
            throw ParseError("unknown ARFF directive '" + keyword + "'", line);
        }
        if (!in_data) throw ParseError("data before @data section", line);
        std::vector<std::string> fields;
        std::istringstream rs(text);
        std::string f;
        while (std::getline(rs, f, ',')) fields.push_back(strip_arff_quotes(trim(f)));
        if (fields.size() != schema.columns.size()) {
            throw ParseError("row has " + std::to_string(fields.size()) + " fields, schema declares " +
                                 std::to_string(schema.columns.size()),
                             line);
        }
        rows.push_back(std::move(fields));
    }
    if (schema.columns.empty()) throw ParseError("no @attribute declarations in " + path.string());
}

double encode_cell(const std::string& cell, const AttributeSpec& spec, long line) {
    if (is_missing_token(cell)) {
        if (spec.is_nominal()) {
            int idx = spec.value_index(kMissingSymbol);
            if (idx >= 0) return static_cast<double>(idx);
        }
        return missing_value();
    }
    if (spec.is_numeric()) {
        double d;
        if (!parse_double(cell, d)) throw ParseError("expected number, got '" + cell + "'", line);
        return d;
    }
    int idx = spec.value_index(cell);
    if (idx < 0) throw SchemaError("value '" + cell + "' not in domain of '" + spec.name + "'");
    return static_cast<double>(idx);
}

}  // namespace

DatasetConfig DatasetConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open dataset config: " + path.string());
    return parse(is, path.parent_path());
}

DatasetConfig DatasetConfig::parse(std::istream& is, const std::filesystem::path& base_dir) {
    DatasetConfig cfg;
    std::string raw;
    long line = 0;
    auto split_list = [](const std::string& s) {
        std::vector<std::string> out;
        std::istringstream ss(s);
        std::string item;
        while (std::getline(ss, item, '|')) out.push_back(trim(item));
        return out;
    };
    while (std::getline(is, raw)) {
        ++line;
        std::string text = trim(raw);
        if (text.empty() || text[0] == '#') continue;
        size_t eq = text.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line);
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError("empty key or value", line);

        if (key == "path") {
            std::filesystem::path p = value;
            cfg.source = p.is_absolute() ? p : base_dir / p;
        } else if (key == "format") {
            if (value == "csv") cfg.format = DatasetFormat::Csv;
            else if (value == "arff") cfg.format = DatasetFormat::Arff;
            else throw ParseError("unknown format '" + value + "'", line);
        } else if (key == "class") {
            cfg.class_attribute = value;
        } else if (key == "positive") {
            cfg.positive_class = value;
        } else if (key == "sensitive") {
            cfg.sensitive_attribute = value;
        } else if (key == "deprived") {
            cfg.deprived_value = value;
        } else if (key == "seed") {
            uint64_t seed;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
            if (ec != std::errc() || ptr != value.data() + value.size()) {
                throw ParseError("seed must be an unsigned integer", line);
            }
            cfg.shuffle_seed = seed;
        } else if (key == "numeric") {
            cfg.force_numeric = split_list(value);
        } else if (key.rfind("domain.", 0) == 0) {
            std::string attr = key.substr(7);
            if (attr.empty()) throw ParseError("domain key without attribute name", line);
            cfg.declared_domains[attr] = split_list(value);
        } else {
            throw ParseError("unknown config key '" + key + "'", line);
        }
    }
    if (cfg.source.empty()) throw ParseError("config is missing 'path'");
    if (cfg.class_attribute.empty()) throw ParseError("config is missing 'class'");
    if (cfg.positive_class.empty()) throw ParseError("config is missing 'positive'");
    if (cfg.sensitive_attribute.empty()) throw ParseError("config is missing 'sensitive'");
    if (cfg.deprived_value.empty()) throw ParseError("config is missing 'deprived'");
    return cfg;
}

Dataset load(const DatasetConfig& config) {
    TableSchema table;
    std::vector<std::vector<std::string>> arff_rows;
    if (config.format == DatasetFormat::Csv) {
        table = infer_csv_schema(config.source, config);
    } else {
        parse_arff(config.source, table, arff_rows);
        for (AttributeSpec& spec : table.columns) {
            auto declared = config.declared_domains.find(spec.name);
            if (declared != config.declared_domains.end()) spec.values = declared->second;
        }
    }

    int class_column = -1;
    for (size_t i = 0; i < table.column_names.size(); ++i) {
        if (table.column_names[i] == config.class_attribute) class_column = static_cast<int>(i);
    }
    if (class_column < 0) {
        throw SchemaError("class attribute '" + config.class_attribute + "' not found in " +
                          config.source.string());
    }

    // Close nominal predictor domains with the reserved missing symbol.
    std::vector<AttributeSpec> predictors;
    for (size_t i = 0; i < table.columns.size(); ++i) {
        if (static_cast<int>(i) == class_column) continue;
        AttributeSpec spec = table.columns[i];
        if (spec.is_nominal() && spec.value_index(kMissingSymbol) < 0) {
            spec.values.emplace_back(kMissingSymbol);
        }
        predictors.push_back(std::move(spec));
    }

    Dataset data{
        StreamSchema::make(std::move(predictors), table.columns[static_cast<size_t>(class_column)],
                           config.sensitive_attribute, config.deprived_value, config.positive_class),
        {}};

    auto encode_row = [&](const std::vector<std::string>& fields, long line) {
        Instance x;
        x.values.reserve(data.schema.attribute_count());
        size_t attr = 0;
        for (size_t i = 0; i < fields.size(); ++i) {
            if (static_cast<int>(i) == class_column) continue;
            x.values.push_back(encode_cell(fields[i], data.schema.attribute(attr), line));
            ++attr;
        }
        const std::string& label_cell = fields[static_cast<size_t>(class_column)];
        if (!is_missing_token(label_cell)) {
            int idx = data.schema.class_attribute().value_index(label_cell);
            if (idx < 0) {
                throw SchemaError("label '" + label_cell + "' not in domain of '" +
                                  config.class_attribute + "'");
            }
            x.label = idx;
        }
        return x;
    };

    if (config.format == DatasetFormat::Csv) {
        std::ifstream is(config.source);
        if (!is) throw ParseError("cannot open dataset file: " + config.source.string());
        CsvReader reader(is);
        std::vector<std::string> fields;
        long line = 0;
        reader.next(fields, line);  // header
        while (reader.next(fields, line)) {
            if (fields.size() != table.column_names.size()) {
                throw ParseError("row width changed between passes", line);
            }
            data.instances.push_back(encode_row(fields, line));
        }
    } else {
        for (const auto& fields : arff_rows) {
            data.instances.push_back(encode_row(fields, 0));
        }
    }

    if (config.shuffle_seed) {
        fisher_yates_shuffle(data.instances, *config.shuffle_seed);
    }
    return data;
}

double dataset_discrimination(const Dataset& data) {
    FairnessCounts counts;
    for (const Instance& x : data.instances) {
        counts.add(community_of(x, data.schema));
    }
    return statistical_parity(counts);
}

void export_csv(const Dataset& data, std::ostream& os) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += "\"\"";
            else q.push_back(c);
        }
        q += '"';
        return q;
    };

    for (const AttributeSpec& a : data.schema.attributes()) os << quote(a.name) << ',';
    os << quote(data.schema.class_attribute().name) << '\n';

    for (const Instance& x : data.instances) {
        for (size_t i = 0; i < x.values.size(); ++i) {
            const AttributeSpec& a = data.schema.attribute(i);
            double v = x.values[i];
            if (is_missing(v)) {
                os << kMissingSymbol;
            } else if (a.is_nominal()) {
                os << quote(a.values[static_cast<size_t>(v)]);
            } else {
                os << format_double(v);
            }
            os << ',';
        }
        if (x.label) {
            os << quote(data.schema.class_attribute().values[static_cast<size_t>(*x.label)]);
        } else {
            os << kMissingSymbol;
        }
        os << '\n';
    }
}

void export_dataset(const Dataset& data, const std::filesystem::path& csv_path,
                    const std::filesystem::path& config_path) {
    {
        std::ofstream os(csv_path);
        if (!os) throw ParseError("cannot write " + csv_path.string());
        export_csv(data, os);
    }
    std::ofstream os(config_path);
    if (!os) throw ParseError("cannot write " + config_path.string());
    os << "path = " << csv_path.filename().string() << '\n';
    os << "format = csv\n";
    os << "class = " << data.schema.class_attribute().name << '\n';
    os << "positive = " << data.schema.positive_class() << '\n';
    os << "sensitive = " << data.schema.sensitive_name() << '\n';
    os << "deprived = " << data.schema.deprived_value() << '\n';
    auto domain_line = [&os](const AttributeSpec& a) {
        os << "domain." << a.name << " = ";
        for (size_t i = 0; i < a.values.size(); ++i) {
            if (i) os << '|';
            os << a.values[i];
        }
        os << '\n';
    };
    std::string numeric_names;
    for (const AttributeSpec& a : data.schema.attributes()) {
        if (a.is_nominal()) {
            domain_line(a);
        } else {
            if (!numeric_names.empty()) numeric_names += '|';
            numeric_names += a.name;
        }
    }
    domain_line(data.schema.class_attribute());
    if (!numeric_names.empty()) os << "numeric = " << numeric_names << '\n';
}

std::vector<double> encode_attribute(const Dataset& data, int attribute) {
    const AttributeSpec& spec = data.schema.attribute(static_cast<size_t>(attribute));
    std::vector<double> out;
    out.reserve(data.instances.size());
    int missing_index = spec.is_nominal() ? spec.value_index(kMissingSymbol) : -1;
    for (const Instance& x : data.instances) {
        double v = x.values[static_cast<size_t>(attribute)];
        if (spec.is_nominal() && !is_missing(v) && static_cast<int>(v) == missing_index) {
            out.push_back(missing_value());
        } else {
            out.push_back(v);
        }
    }
    return out;
}

std::vector<double> encode_labels(const Dataset& data) {
    std::vector<double> out;
    out.reserve(data.instances.size());
    for (const Instance& x : data.instances) {
        out.push_back(x.label ? static_cast<double>(*x.label) : missing_value());
    }
    return out;
}

std::vector<double> encode_labels(std::span<const int> labels) {
    return {labels.begin(), labels.end()};
}

namespace {

double gaussian_draw(Xoshiro256StarStar& rng, double mean, double stddev) {
    // Box-Muller; draws two uniforms per call to keep the stream order fixed.
    double u1 = rng.next_double();
    double u2 = rng.next_double();
    while (u1 <= 0.0) u1 = rng.next_double();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + stddev * z;
}

}  // namespace

Dataset generate(const SyntheticStreamSpec& spec) {
    // Domains carry the reserved missing symbol, same as loaded datasets.
    std::vector<AttributeSpec> predictors = {
        {"signal_num", AttributeKind::Numeric, {}, 0},
        {"noise_num", AttributeKind::Numeric, {}, 1},
        {"signal_cat", AttributeKind::Nominal, {"a", "b", "c", "?"}, 2},
        {"noise_cat", AttributeKind::Nominal, {"x", "y", "?"}, 3},
        {"group", AttributeKind::Nominal, {"favored", "deprived", "?"}, 4},
    };
    AttributeSpec class_attr{"outcome", AttributeKind::Nominal, {"rejected", "granted"}, 0};
    Dataset data{StreamSchema::make(std::move(predictors), std::move(class_attr), "group", "deprived",
                                    "granted"),
                 {}};
    if (spec.n <= 0) return data;

    std::vector<DriftPoint> drifts = spec.drift_points;
    std::sort(drifts.begin(), drifts.end(),
              [](const DriftPoint& a, const DriftPoint& b) { return a.index < b.index; });

    Xoshiro256StarStar rng(spec.seed);
    double base = spec.base_positive_rate;
    double disc = spec.discrimination;
    size_t next_drift = 0;

    long target = spec.mirrored ? spec.n - (spec.n % 2) : spec.n;
    data.instances.reserve(static_cast<size_t>(target));

    auto make_instance = [&](bool deprived, bool granted, double sig, double noise, int cat, int ncat) {
        Instance x;
        x.values = {sig, noise, static_cast<double>(cat), static_cast<double>(ncat),
                    deprived ? 1.0 : 0.0};
        x.label = granted ? 1 : 0;
        return x;
    };

    long emitted = 0;
    while (emitted < target) {
        while (next_drift < drifts.size() && emitted >= drifts[next_drift].index) {
            base = drifts[next_drift].base_positive_rate;
            disc = drifts[next_drift].discrimination;
            ++next_drift;
        }

        bool deprived = false;
        double rate = base;
        if (!spec.mirrored) {
            deprived = rng.next_double() < 0.5;
            rate = deprived ? base : base + disc;
            rate = std::clamp(rate, 0.0, 1.0);
        }
        bool granted = rng.next_double() < rate;
        double sig = gaussian_draw(rng, granted ? 1.2 : -1.2, 1.0);
        double noise = gaussian_draw(rng, 0.0, 1.0);
        double u = rng.next_double();
        int cat = granted ? (u < 0.6 ? 0 : (u < 0.9 ? 1 : 2)) : (u < 0.6 ? 2 : (u < 0.9 ? 1 : 0));
        int ncat = rng.next_double() < 0.5 ? 0 : 1;

        if (spec.mirrored) {
            data.instances.push_back(make_instance(false, granted, sig, noise, cat, ncat));
            data.instances.push_back(make_instance(true, granted, sig, noise, cat, ncat));
            emitted += 2;
        } else {
            data.instances.push_back(make_instance(deprived, granted, sig, noise, cat, ncat));
            ++emitted;
        }
    }
    return data;
}

}  // namespace faht
