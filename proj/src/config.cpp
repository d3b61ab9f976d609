// Copyright 2026 The qlgasim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qlga/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace qlga {

namespace {

std::string join(const std::vector<std::string> &errors) {
    std::string out;
    for (const auto &e : errors) {
        if (!out.empty()) {
            out += "; ";
        }
        out += e;
    }
    return out;
}

template <typename Enum> struct Names {
    Enum value;
    std::string_view name;
};

constexpr Names<ExperimentKind> kKindNames[] = {
    {ExperimentKind::run_brick, "run-brick"},       {ExperimentKind::run_qlga, "run-qlga"},
    {ExperimentKind::dispersion, "dispersion"},     {ExperimentKind::converge, "converge"},
    {ExperimentKind::oracle_check, "oracle-check"}, {ExperimentKind::gate_count, "gate-count"},
    {ExperimentKind::m_inverse, "m-inverse"},
};
constexpr Names<ExternalShape> kExternalNames[] = {
    {ExternalShape::none, "none"},
    {ExternalShape::harmonic, "harmonic"},
    {ExternalShape::well, "well"},
    {ExternalShape::random, "random"},
};
constexpr Names<PairShape> kPairNames[] = {
    {PairShape::none, "none"}, {PairShape::contact, "contact"}, {PairShape::gaussian, "gaussian"}};
constexpr Names<PairCadence> kCadenceNames[] = {{PairCadence::per_pass, "per-pass"},
                                                {PairCadence::per_double_step, "per-double-step"}};
constexpr Names<InitialKind> kInitialNames[] = {{InitialKind::basis, "basis"},
                                                {InitialKind::gaussian, "gaussian"},
                                                {InitialKind::gaussian_pair, "gaussian-pair"}};
constexpr Names<Representation> kReprNames[] = {{Representation::sector, "sector"},
                                                {Representation::dense, "dense"}};
constexpr Names<LatticeMode> kModeNames[] = {{LatticeMode::brick1d, "brick1d"},
                                             {LatticeMode::qlga, "qlga"}};
constexpr Names<Statistics> kStatNames[] = {{Statistics::hard_boson, "hard-boson"},
                                            {Statistics::fermion, "fermion"}};

template <typename Enum, std::size_t N>
std::string enum_name(const Names<Enum> (&table)[N], Enum value) {
    for (const auto &entry : table) {
        if (entry.value == value) {
            return std::string(entry.name);
        }
    }
    return "?";
}

template <typename Enum, std::size_t N>
std::optional<std::string> enum_parse(const Names<Enum> (&table)[N], const std::string &text,
                                      Enum &out) {
    std::string options;
    for (const auto &entry : table) {
        if (entry.name == text) {
            out = entry.value;
            return std::nullopt;
        }
        options += (options.empty() ? "" : ", ") + std::string(entry.name);
    }
    return "expected one of " + options + ", got '" + text + "'";
}

template <typename Int> std::optional<std::string> parse_integer(const std::string &text, Int &out) {
    Int value{};
    const char *first = text.data();
    const char *last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        return "expected an integer, got '" + text + "'";
    }
    out = value;
    return std::nullopt;
}

std::optional<double> to_double(std::string_view text) {
    if (text.empty()) {
        return std::nullopt;
    }
    const std::string buffer(text);
    char *end = nullptr;
    errno = 0;
    const double value = std::strtod(buffer.c_str(), &end);
    if (end != buffer.c_str() + buffer.size() || errno == ERANGE || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<std::string> parse_real(const std::string &text, double &out) {
    const auto value = to_double(text);
    if (!value) {
        return "expected a finite number, got '" + text + "'";
    }
    out = *value;
    return std::nullopt;
}

std::optional<std::string> parse_cplx(const std::string &text, cplx &out) {
    const auto value = parse_complex(text);
    if (!value) {
        return "expected a complex number like 0.5+0.25j, got '" + text + "'";
    }
    out = *value;
    return std::nullopt;
}

std::optional<std::string> parse_bool(const std::string &text, bool &out) {
    if (text == "true") {
        out = true;
    } else if (text == "false") {
        out = false;
    } else {
        return "expected true or false, got '" + text + "'";
    }
    return std::nullopt;
}

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> items;
    std::string current;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!current.empty()) {
                items.push_back(current);
                current.clear();
            }
        } else {
            current += c;
        }
    }
    if (!current.empty()) {
        items.push_back(current);
    }
    return items;
}

template <typename Int>
std::optional<std::string> parse_list(const std::string &text, std::vector<Int> &out) {
    std::vector<Int> values;
    for (const auto &item : split_list(text)) {
        Int v{};
        if (auto err = parse_integer(item, v)) {
            return "expected a list of integers, got '" + text + "'";
        }
        values.push_back(v);
    }
    out = std::move(values);
    return std::nullopt;
}

template <typename Int> std::string render_list(const std::vector<Int> &values) {
    std::string out;
    for (const auto v : values) {
        out += (out.empty() ? "" : " ") + std::to_string(v);
    }
    return out;
}

struct Field {
    std::string section;
    std::string key;
    std::function<std::string()> get;
    std::function<std::optional<std::string>(const std::string &)> set;

    std::string path() const { return section + "." + key; }
};

template <typename T> Field integer_field(std::string s, std::string k, T &ref) {
    return {std::move(s), std::move(k), [&ref] { return std::to_string(ref); },
            [&ref](const std::string &v) { return parse_integer(v, ref); }};
}

Field real_field(std::string s, std::string k, double &ref) {
    return {std::move(s), std::move(k), [&ref] { return format_double(ref); },
            [&ref](const std::string &v) { return parse_real(v, ref); }};
}

Field complex_field(std::string s, std::string k, cplx &ref) {
    return {std::move(s), std::move(k), [&ref] { return format_complex(ref); },
            [&ref](const std::string &v) { return parse_cplx(v, ref); }};
}

Field bool_field(std::string s, std::string k, bool &ref) {
    return {std::move(s), std::move(k), [&ref] { return std::string(ref ? "true" : "false"); },
            [&ref](const std::string &v) { return parse_bool(v, ref); }};
}

Field string_field(std::string s, std::string k, std::string &ref) {
    return {std::move(s), std::move(k), [&ref] { return ref; },
            [&ref](const std::string &v) -> std::optional<std::string> {
                if (v.empty()) {
                    return std::string("expected a non-empty value");
                }
                ref = v;
                return std::nullopt;
            }};
}

template <typename Enum, std::size_t N>
Field enum_field(std::string s, std::string k, Enum &ref, const Names<Enum> (&table)[N]) {
    return {std::move(s), std::move(k), [&ref, &table] { return enum_name(table, ref); },
            [&ref, &table](const std::string &v) { return enum_parse(table, v, ref); }};
}

template <typename Int> Field list_field(std::string s, std::string k, std::vector<Int> &ref) {
    return {std::move(s), std::move(k), [&ref] { return render_list(ref); },
            [&ref](const std::string &v) { return parse_list(v, ref); }};
}

std::vector<Field> fields(ExperimentConfig &c) {
    return {
        enum_field("experiment", "kind", c.kind, kKindNames),
        integer_field("experiment", "seed", c.seed),

        integer_field("lattice", "dimension", c.dimension),
        integer_field("lattice", "sites", c.sites),
        real_field("lattice", "epsilon", c.epsilon),
        enum_field("lattice", "mode", c.mode, kModeNames),

        complex_field("kinetic", "a", c.a),
        complex_field("kinetic", "b", c.b),
        real_field("kinetic", "phi", c.phi),

        complex_field("collision", "mu", c.mu),
        complex_field("collision", "nu", c.nu),
        complex_field("collision", "lambda", c.lambda),
        real_field("collision", "phi_onsite", c.phi_onsite),

        enum_field("potentials", "external", c.external, kExternalNames),
        real_field("potentials", "external_strength", c.external_strength),
        real_field("potentials", "external_center", c.external_center),
        integer_field("potentials", "external_modes", c.external_modes),
        enum_field("potentials", "pair", c.pair, kPairNames),
        real_field("potentials", "pair_strength", c.pair_strength),
        real_field("potentials", "pair_range", c.pair_range),
        enum_field("potentials", "pair_cadence", c.pair_cadence, kCadenceNames),

        enum_field("initial", "kind", c.initial, kInitialNames),
        list_field("initial", "occupied", c.occupied),
        real_field("initial", "x0", c.x0),
        real_field("initial", "sigma", c.sigma),
        real_field("initial", "k0", c.k0),
        real_field("initial", "x1", c.x1),
        real_field("initial", "k1", c.k1),

        enum_field("run", "statistics", c.statistics, kStatNames),
        integer_field("run", "steps", c.steps),
        integer_field("run", "observe_every", c.observe_every),
        bool_field("run", "record_density", c.record_density),
        enum_field("run", "representation", c.representation, kReprNames),
        integer_field("run", "samples", c.samples),

        list_field("dispersion", "k", c.k_list),
        integer_field("dispersion", "steps", c.dispersion_steps),

        real_field("converge", "length", c.converge_length),
        integer_field("converge", "base_sites", c.converge_base_sites),
        integer_field("converge", "levels", c.converge_levels),
        real_field("converge", "time", c.converge_time),
        real_field("converge", "x0", c.converge_x0),
        real_field("converge", "sigma", c.converge_sigma),
        real_field("converge", "k0", c.converge_k0),
        real_field("converge", "well_depth", c.converge_well_depth),
        integer_field("converge", "fine_factor", c.converge_fine_factor),
        real_field("converge", "oracle_dt", c.converge_oracle_dt),

        integer_field("gate_count", "particles", c.gate_particles),

        list_field("m_inverse", "sites", c.m_sites),
        real_field("m_inverse", "threshold", c.m_threshold),

        string_field("output", "directory", c.directory),
        string_field("output", "prefix", c.prefix),

        real_field("tolerances", "algebraic", c.algebraic_tol),
        real_field("tolerances", "drift", c.drift_tol),
        integer_field("tolerances", "dense_limit", c.dense_limit),
    };
}

std::string suggestion(const std::string &path, const std::vector<Field> &known) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::string best_path;
    const auto dot = path.find('.');
    const std::string key = dot == std::string::npos ? path : path.substr(dot + 1);
    for (const auto &f : known) {
        // Compare whole paths and bare keys so a misspelt key in the right
        // section and a right key in the wrong section are both found.
        const std::size_t d = std::min(edit_distance(path, f.path()), edit_distance(key, f.key) + 1);
        if (d < best) {
            best = d;
            best_path = f.path();
        }
    }
    if (best <= std::max<std::size_t>(2, key.size() / 3)) {
        const auto fdot = best_path.find('.');
        return " (did you mean '" + best_path.substr(fdot + 1) + "' in [" + best_path.substr(0, fdot) +
               "]?)";
    }
    return "";
}

bool needs_kinetic(const ExperimentConfig &c) {
    return c.mode == LatticeMode::brick1d || c.kind == ExperimentKind::converge ||
           c.kind == ExperimentKind::m_inverse;
}

void validate(const ExperimentConfig &c, std::vector<std::string> &errors) {
    auto positive = [&](double v, const char *name) {
        if (!(v > 0.0)) {
            errors.push_back(std::string(name) + ": must be positive");
        }
    };
    positive(c.algebraic_tol, "tolerances.algebraic");
    positive(c.drift_tol, "tolerances.drift");

    std::optional<LatticeSpec> lattice;
    try {
        lattice.emplace(c.dimension, c.sites, c.epsilon, c.mode);
    } catch (const std::exception &e) {
        errors.push_back(std::string("lattice: ") + e.what());
    }
    if (c.kind == ExperimentKind::run_brick && c.mode != LatticeMode::brick1d) {
        errors.push_back("lattice.mode: run-brick needs mode brick1d");
    }
    if (c.kind == ExperimentKind::run_qlga && c.mode != LatticeMode::qlga) {
        errors.push_back("lattice.mode: run-qlga needs mode qlga");
    }

    if (needs_kinetic(c)) {
        const KineticCheck check = validate_kinetic(c.a, c.b, c.algebraic_tol);
        if (!check.ok) {
            errors.push_back("kinetic: " + check.message);
        }
    }
    if (c.mode == LatticeMode::qlga && c.kind != ExperimentKind::gate_count) {
        CollisionSpec spec{c.mu, c.nu, c.lambda, c.phi_onsite, c.statistics};
        try {
            validate_collision(spec, c.algebraic_tol);
        } catch (const std::exception &e) {
            errors.push_back(std::string("collision: ") + e.what());
        }
    }

    if (c.external == ExternalShape::random && c.external_modes < 1) {
        errors.push_back("potentials.external_modes: must be >= 1");
    }
    if (c.pair == PairShape::gaussian) {
        positive(c.pair_range, "potentials.pair_range");
    }

    if (c.initial != InitialKind::basis) {
        positive(c.sigma, "initial.sigma");
    }
    if (lattice) {
        const std::size_t nq = lattice->num_qbits();
        if (c.initial == InitialKind::basis) {
            for (QbitIndex q : c.occupied) {
                if (q >= nq) {
                    errors.push_back("initial.occupied: q-bit " + std::to_string(q) +
                                     " outside 0.." + std::to_string(nq - 1));
                }
            }
            std::vector<QbitIndex> sorted = c.occupied;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                errors.push_back("initial.occupied: duplicate q-bit");
            }
        }
        const bool dense = c.representation == Representation::dense ||
                           c.kind == ExperimentKind::oracle_check;
        if (dense && nq > c.dense_limit) {
            errors.push_back("run.representation: " + std::to_string(nq) +
                             " q-bits exceed the dense limit " + std::to_string(c.dense_limit));
        }
    }

    if (c.kind == ExperimentKind::dispersion) {
        if (c.k_list.empty()) {
            errors.push_back("dispersion.k: needs at least one wave number");
        }
        if (c.dispersion_steps == 0) {
            errors.push_back("dispersion.steps: must be >= 1");
        }
    }
    if (c.kind == ExperimentKind::converge) {
        if (c.converge_levels < 2) {
            errors.push_back("converge.levels: must be >= 2");
        }
        if (c.converge_base_sites < 4 || c.converge_base_sites % 2 != 0) {
            errors.push_back("converge.base_sites: must be even and >= 4");
        }
        if (c.converge_fine_factor < 1) {
            errors.push_back("converge.fine_factor: must be >= 1");
        }
        positive(c.converge_length, "converge.length");
        positive(c.converge_time, "converge.time");
        positive(c.converge_sigma, "converge.sigma");
        positive(c.converge_oracle_dt, "converge.oracle_dt");
        const cplx m = c.b * cplx{0.0, 1.0} / c.a;
        if (c.a == cplx{0.0, 0.0} || !(m.real() > 0.0)) {
            errors.push_back("kinetic: convergence study needs a positive finite mass b*i/a");
        }
    }
    if (c.kind == ExperimentKind::m_inverse) {
        if (c.m_sites.empty()) {
            errors.push_back("m_inverse.sites: needs at least one size");
        }
        for (int l : c.m_sites) {
            if (l < 3 || l > 512) {
                errors.push_back("m_inverse.sites: " + std::to_string(l) + " outside 3..512");
            }
        }
        positive(c.m_threshold, "m_inverse.threshold");
    }
    if (c.kind == ExperimentKind::gate_count && c.gate_particles == 0) {
        errors.push_back("gate_count.particles: must be >= 1");
    }
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error("invalid configuration: " + join(errors)), errors_(std::move(errors)) {}

std::string_view to_string(ExperimentKind kind) {
    for (const auto &entry : kKindNames) {
        if (entry.value == kind) {
            return entry.name;
        }
    }
    return "?";
}

ExperimentKind experiment_kind_from_string(std::string_view text) {
    ExperimentKind kind{};
    if (auto err = enum_parse(kKindNames, std::string(text), kind)) {
        throw ConfigError({"experiment.kind: " + *err});
    }
    return kind;
}

std::string format_double(double value) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << std::setprecision(17) << value;
    return out.str();
}

std::string format_complex(cplx value) {
    std::string im = format_double(std::abs(value.imag()));
    return format_double(value.real()) + (std::signbit(value.imag()) ? "-" : "+") + im + "j";
}

std::optional<cplx> parse_complex(std::string_view text) {
    if (text.empty()) {
        return std::nullopt;
    }
    if (text.back() != 'j') {
        const auto re = to_double(text);
        return re ? std::optional<cplx>(cplx{*re, 0.0}) : std::nullopt;
    }
    const std::string_view body = text.substr(0, text.size() - 1);
    // Split at the last sign that is not leading and not an exponent sign.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag_part = [](std::string_view s) -> std::optional<double> {
        if (s.empty() || s == "+") {
            return 1.0;
        }
        if (s == "-") {
            return -1.0;
        }
        return to_double(s);
    };
    if (split == std::string_view::npos) {
        const auto im = imag_part(body);
        return im ? std::optional<cplx>(cplx{0.0, *im}) : std::nullopt;
    }
    const auto re = to_double(body.substr(0, split));
    const auto im = imag_part(body.substr(split));
    if (!re || !im) {
        return std::nullopt;
    }
    return cplx{*re, *im};
}

std::size_t edit_distance(std::string_view lhs, std::string_view rhs) {
    std::vector<std::size_t> prev(rhs.size() + 1);
    std::vector<std::size_t> cur(rhs.size() + 1);
    for (std::size_t j = 0; j <= rhs.size(); ++j) {
        prev[j] = j;
    }
    for (std::size_t i = 1; i <= lhs.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= rhs.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (lhs[i - 1] == rhs[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[rhs.size()];
}

ExperimentConfig parse_config(std::string_view text, std::optional<ExperimentKind> default_kind) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ConfigError({"line " + std::to_string(e.line()) + ": " + e.message()});
    }

    ExperimentConfig config;
    if (default_kind) {
        config.kind = *default_kind;
    }
    std::vector<Field> known = fields(config);
    std::vector<std::string> errors;

    auto lookup = [&](const std::string &section, const std::string &key) -> const Field * {
        for (const auto &f : known) {
            if (f.section == section && f.key == key) {
                return &f;
            }
        }
        return nullptr;
    };

    bool kind_given = false;
    bool mode_given = false;
    std::vector<std::string> failed_sections;
    for (const auto &[section, body] : tree) {
        if (body.empty()) {
            if (!body.data().empty()) {
                errors.push_back("key '" + section + "' outside any section");
            }
            continue;
        }
        for (const auto &[key, value] : body) {
            const Field *field = lookup(section, key);
            if (field == nullptr) {
                errors.push_back("unknown key '" + key + "' in [" + section + "]" +
                                 suggestion(section + "." + key, known));
                continue;
            }
            if (auto err = field->set(value.data())) {
                errors.push_back(field->path() + ": " + *err);
                failed_sections.push_back(section);
            }
            kind_given |= field->path() == "experiment.kind";
            mode_given |= field->path() == "lattice.mode";
        }
    }
    if (!kind_given && !default_kind) {
        errors.push_back("experiment.kind: missing");
    }
    if (!mode_given && config.kind == ExperimentKind::run_qlga) {
        config.mode = LatticeMode::qlga;
    }
    // Constraint checks still run after type errors, except for sections
    // holding an unparsed value, whose defaults would give spurious reports.
    std::vector<std::string> violations;
    validate(config, violations);
    for (auto &v : violations) {
        const std::string section = v.substr(0, v.find_first_of(".:"));
        if (std::find(failed_sections.begin(), failed_sections.end(), section) ==
            failed_sections.end()) {
            errors.push_back(std::move(v));
        }
    }
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return config;
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig &config) {
    ExperimentConfig copy = config;
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto &f : fields(copy)) {
        out.emplace_back(f.path(), f.get());
    }
    return out;
}

std::string render_config(const ExperimentConfig &config) {
    ExperimentConfig copy = config;
    std::string out;
    std::string section;
    for (const auto &f : fields(copy)) {
        if (f.section != section) {
            out += (section.empty() ? "[" : "\n[") + f.section + "]\n";
            section = f.section;
        }
        out += f.key + " = " + f.get() + "\n";
    }
    return out;
}

} // namespace qlga
