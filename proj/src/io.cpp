#include "spindyn/io.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace spindyn::io {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path + ": cannot open for writing");
    out << content;
    if (!out) throw ConfigError(path + ": write failed");
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    const char* begin = t.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError("key '" + key + "': cannot parse number from '" + text + "'");
    return value;
}

long parse_long(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    const char* begin = t.c_str();
    char* end = nullptr;
    const long value = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError("key '" + key + "': cannot parse integer from '" + text + "'");
    return value;
}

// "re,im" or "inf"
CoherentLabel parse_label(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    if (t == "inf" || t == "infinity") return CoherentLabel::infinity();
    const auto comma = t.find(',');
    if (comma == std::string::npos)
        throw ConfigError("key '" + key + "': expected 're,im' or 'inf', got '" + text + "'");
    return CoherentLabel(Complex(parse_double(t.substr(0, comma), key),
                                 parse_double(t.substr(comma + 1), key)));
}

std::string label_to_string(const CoherentLabel& z) {
    if (z.at_infinity) return "inf";
    return format_double(z.z.real()) + "," + format_double(z.z.imag());
}

CanonicalPair parse_pair(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    const auto comma = t.find(',');
    if (comma == std::string::npos)
        throw ConfigError("key '" + key + "': expected 'q,p', got '" + text + "'");
    return CanonicalPair{parse_double(t.substr(0, comma), key),
                         parse_double(t.substr(comma + 1), key)};
}

std::string kind_name(InitialSpec::Kind kind) {
    switch (kind) {
        case InitialSpec::Kind::coherent: return "coherent";
        case InitialSpec::Kind::uniform: return "uniform";
        case InitialSpec::Kind::thermal: return "thermal";
        case InitialSpec::Kind::canonical: return "canonical";
    }
    throw ConfigError("unknown initial kind");
}

InitialSpec::Kind kind_from_name(const std::string& name, const std::string& key) {
    if (name == "coherent") return InitialSpec::Kind::coherent;
    if (name == "uniform") return InitialSpec::Kind::uniform;
    if (name == "thermal") return InitialSpec::Kind::thermal;
    if (name == "canonical") return InitialSpec::Kind::canonical;
    throw ConfigError("key '" + key + "': unknown initial kind '" + name + "'");
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_entropy_csv(const EntropySeries& series, const std::string& path) {
    const Index n = series.size();
    if (series.delta.size() != n || series.delta_n.size() != n || series.sigma1.size() != n ||
        series.sigma2.size() != n)
        throw ConfigError(path + ": series vectors have mismatched lengths");
    std::string out = "t,delta,delta_N,sigma1,sigma2\n";
    for (Index i = 0; i < n; ++i) {
        out += format_double(series.times[i]);
        out += ',';
        out += format_double(series.delta[i]);
        out += ',';
        out += format_double(series.delta_n[i]);
        out += ',';
        out += format_double(series.sigma1[i]);
        out += ',';
        out += format_double(series.sigma2[i]);
        out += '\n';
    }
    write_text_file(path, out);
}

EntropySeries read_entropy_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t,delta,delta_N,sigma1,sigma2")
        throw ConfigError(path + ": missing or unexpected CSV header");
    std::vector<std::array<double, 5>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::array<double, 5> row{};
        std::istringstream fields(line);
        std::string field;
        for (int c = 0; c < 5; ++c) {
            if (!std::getline(fields, field, ','))
                throw ConfigError(path + ": short CSV row '" + line + "'");
            row[static_cast<size_t>(c)] = parse_double(field, "csv column " + std::to_string(c));
        }
        rows.push_back(row);
    }
    EntropySeries series;
    const Index n = static_cast<Index>(rows.size());
    series.times.resize(n);
    series.delta.resize(n);
    series.delta_n.resize(n);
    series.sigma1.resize(n);
    series.sigma2.resize(n);
    for (Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<size_t>(i)];
        series.times[i] = row[0];
        series.delta[i] = row[1];
        series.delta_n[i] = row[2];
        series.sigma1[i] = row[3];
        series.sigma2[i] = row[4];
    }
    return series;
}

void write_section_csv(const std::vector<SectionPoint>& points, const std::string& path) {
    std::string out = "q1,p1,t_cross\n";
    for (const SectionPoint& pt : points) {
        out += format_double(pt.q1);
        out += ',';
        out += format_double(pt.p1);
        out += ',';
        out += format_double(pt.crossing_time);
        out += '\n';
    }
    write_text_file(path, out);
}

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path) {
    std::string out = "t,q1,p1,q2,p2,energy\n";
    for (Index i = 0; i < trajectory.size(); ++i) {
        const ClassicalState& x = trajectory.states[static_cast<size_t>(i)];
        out += format_double(trajectory.times[i]);
        out += ',';
        out += format_double(x.q1);
        out += ',';
        out += format_double(x.p1);
        out += ',';
        out += format_double(x.q2);
        out += ',';
        out += format_double(x.p2);
        out += ',';
        out += format_double(trajectory.energies[i]);
        out += '\n';
    }
    write_text_file(path, out);
}

const std::string* IniSection::find(const std::string& key) const {
    const std::string* found = nullptr;
    for (const auto& [k, v] : entries)
        if (k == key) found = &v;
    return found;
}

const IniSection* IniFile::find(const std::string& name) const {
    for (const IniSection& section : sections)
        if (section.name == name) return &section;
    return nullptr;
}

IniFile parse_ini(const std::string& text) {
    IniFile file;
    std::istringstream in(text);
    std::string line;
    IniSection* current = nullptr;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            file.sections.push_back({trim(t.substr(1, t.size() - 2)), {}});
            current = &file.sections.back();
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        if (current == nullptr)
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        current->entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return file;
}

std::string serialize_ini(const IniFile& file) {
    std::string out;
    for (const IniSection& section : file.sections) {
        if (!out.empty()) out += '\n';
        out += '[' + section.name + "]\n";
        for (const auto& [key, value] : section.entries) out += key + " = " + value + '\n';
    }
    return out;
}

IniFile load_ini(const std::string& path) {
    try {
        return parse_ini(read_text_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

KeyValues scenario_to_keys(const ScenarioConfig& cfg) {
    KeyValues keys;
    keys.emplace_back("alpha", format_double(cfg.model.alpha));
    keys.emplace_back("eps1_b0", format_double(cfg.model.eps1_b0));
    keys.emplace_back("eps2_b0", format_double(cfg.model.eps2_b0));
    keys.emplace_back("s1", format_double(cfg.model.s1.value()));
    keys.emplace_back("s2", format_double(cfg.model.s2.value()));
    keys.emplace_back("t_start", format_double(cfg.grid.t_start));
    keys.emplace_back("t_end", format_double(cfg.grid.t_end));
    keys.emplace_back("n_points", std::to_string(cfg.grid.n_points));

    const auto emit_initial = [&keys](const InitialSpec& spec, const char* which,
                                      const char* z_key, const char* point_key) {
        keys.emplace_back(which, kind_name(spec.kind));
        switch (spec.kind) {
            case InitialSpec::Kind::coherent:
                keys.emplace_back(z_key, label_to_string(spec.z));
                break;
            case InitialSpec::Kind::thermal:
                keys.emplace_back("temperature", format_double(spec.temperature));
                break;
            case InitialSpec::Kind::canonical:
                keys.emplace_back(point_key, format_double(spec.point.q) + "," +
                                                 format_double(spec.point.p));
                break;
            case InitialSpec::Kind::uniform: break;
        }
    };
    emit_initial(cfg.initial1, "initial1", "z1", "point1");
    emit_initial(cfg.initial2, "initial2", "z2", "point2");
    return keys;
}

ScenarioConfig scenario_from_keys(const KeyValues& keys, Regime regime) {
    ScenarioConfig cfg = default_config(regime);

    double t_start = cfg.grid.t_start;
    double t_end = cfg.grid.t_end;
    Index n_points = cfg.grid.n_points;
    bool saw_z1 = false, saw_z2 = false, saw_point1 = false, saw_point2 = false;
    bool saw_temperature = false;

    for (const auto& [key, value] : keys) {
        if (key == "alpha") cfg.model.alpha = parse_double(value, key);
        else if (key == "eps1_b0") cfg.model.eps1_b0 = parse_double(value, key);
        else if (key == "eps2_b0") cfg.model.eps2_b0 = parse_double(value, key);
        else if (key == "s1") cfg.model.s1 = SpinMagnitude::from_value(parse_double(value, key));
        else if (key == "s2") cfg.model.s2 = SpinMagnitude::from_value(parse_double(value, key));
        else if (key == "t_start") t_start = parse_double(value, key);
        else if (key == "t_end") t_end = parse_double(value, key);
        else if (key == "n_points") n_points = parse_long(value, key);
        else if (key == "initial1") cfg.initial1.kind = kind_from_name(trim(value), key);
        else if (key == "initial2") cfg.initial2.kind = kind_from_name(trim(value), key);
        else if (key == "z1") { cfg.initial1.z = parse_label(value, key); saw_z1 = true; }
        else if (key == "z2") { cfg.initial2.z = parse_label(value, key); saw_z2 = true; }
        else if (key == "point1") { cfg.initial1.point = parse_pair(value, key); saw_point1 = true; }
        else if (key == "point2") { cfg.initial2.point = parse_pair(value, key); saw_point2 = true; }
        else if (key == "temperature") {
            cfg.initial1.temperature = parse_double(value, key);
            saw_temperature = true;
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }

    try {
        cfg.grid = TimeGrid{t_start, t_end, n_points};
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("keys t_start/t_end/n_points: ") + e.what());
    }

    using Kind = InitialSpec::Kind;
    if (saw_z1 && cfg.initial1.kind != Kind::coherent)
        throw ConfigError("key 'z1' requires initial1 = coherent");
    if (saw_z2 && cfg.initial2.kind != Kind::coherent)
        throw ConfigError("key 'z2' requires initial2 = coherent");
    if (saw_point1 && cfg.initial1.kind != Kind::canonical)
        throw ConfigError("key 'point1' requires initial1 = canonical");
    if (saw_point2 && cfg.initial2.kind != Kind::canonical)
        throw ConfigError("key 'point2' requires initial2 = canonical");
    if (saw_temperature && cfg.initial1.kind != Kind::thermal)
        throw ConfigError("key 'temperature' requires initial1 = thermal");
    return cfg;
}

ScenarioConfig load_config(const std::string& path, Regime regime) {
    const IniFile file = load_ini(path);
    const IniSection* section = file.find(regime_name(regime));
    if (section == nullptr)
        throw ConfigError(path + ": no [" + regime_name(regime) + "] section");
    try {
        return scenario_from_keys(section->entries, regime);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_manifest(const RunManifest& manifest, const std::string& dir) {
    IniFile file;
    IniSection run{"run", {}};
    run.entries.emplace_back("version", manifest.version);
    run.entries.emplace_back("regime", regime_name(manifest.config.regime));
    run.entries.emplace_back("duration_seconds", format_double(manifest.duration_seconds));
    for (const std::string& output : manifest.outputs) run.entries.emplace_back("output", output);
    file.sections.push_back(std::move(run));
    file.sections.push_back({regime_name(manifest.config.regime),
                             scenario_to_keys(manifest.config)});
    write_text_file(dir + "/manifest", serialize_ini(file));
}

RunManifest read_manifest(const std::string& path) {
    const IniFile file = load_ini(path);
    const IniSection* run = file.find("run");
    if (run == nullptr) throw ConfigError(path + ": no [run] section");

    RunManifest manifest;
    const std::string* version = run->find("version");
    const std::string* regime = run->find("regime");
    const std::string* duration = run->find("duration_seconds");
    if (version == nullptr || regime == nullptr || duration == nullptr)
        throw ConfigError(path + ": [run] must carry version, regime, duration_seconds");
    manifest.version = *version;
    manifest.duration_seconds = parse_double(*duration, "duration_seconds");
    for (const auto& [key, value] : run->entries)
        if (key == "output") manifest.outputs.push_back(value);

    const Regime r = regime_from_name(*regime);
    const IniSection* section = file.find(regime_name(r));
    if (section == nullptr)
        throw ConfigError(path + ": no [" + regime_name(r) + "] section");
    manifest.config = scenario_from_keys(section->entries, r);
    return manifest;
}

void write_entropy_plot_script(const std::string& csv_name, const std::string& path) {
    std::string out;
    out += "# run: gnuplot -p " + path + "\n";
    out += "set datafile separator ','\n";
    out += "set xlabel 't'\n";
    out += "set ylabel 'entropy'\n";
    out += "set yrange [0:1.05]\n";
    out += "plot '" + csv_name + "' skip 1 using 1:2 with lines title 'delta', \\\n";
    out += "     '" + csv_name + "' skip 1 using 1:3 with lines title 'delta_N'\n";
    write_text_file(path, out);
}

void write_polarization_plot_script(const std::string& csv_name, const std::string& path) {
    std::string out;
    out += "# run: gnuplot -p " + path + "\n";
    out += "set datafile separator ','\n";
    out += "set xlabel 't'\n";
    out += "set ylabel 'normalized angular momentum'\n";
    out += "set yrange [-0.05:1.05]\n";
    out += "plot '" + csv_name + "' skip 1 using 1:4 with lines title 'sigma1', \\\n";
    out += "     '" + csv_name + "' skip 1 using 1:5 with lines title 'sigma2'\n";
    write_text_file(path, out);
}

void write_section_plot_script(const std::string& csv_name, const std::string& path) {
    std::string out;
    out += "# run: gnuplot -p " + path + "\n";
    out += "set datafile separator ','\n";
    out += "set xlabel 'q1'\n";
    out += "set ylabel 'p1'\n";
    out += "set size ratio -1\n";
    out += "plot '" + csv_name + "' skip 1 using 1:2 with dots notitle\n";
    write_text_file(path, out);
}

}  // namespace spindyn::io
