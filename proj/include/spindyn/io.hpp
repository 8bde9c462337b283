#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spindyn/classical.hpp"
#include "spindyn/entanglement.hpp"
#include "spindyn/scenarios.hpp"

// File formats: CSV series, INI-style configs, run manifests, gnuplot
// scripts. All numbers are written with 17 significant digits and '.' as
// the decimal separator, so emitted files parse back bit-identically.

namespace spindyn::io {

/// "%.17g" rendering; round-trips any finite double exactly.
std::string format_double(double value);

/// Whole-file text write, LF endings as given. Throws ConfigError on failure.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Header `t,delta,delta_N,sigma1,sigma2`, one row per grid point, LF endings.
void write_entropy_csv(const EntropySeries& series, const std::string& path);
EntropySeries read_entropy_csv(const std::string& path);

/// Header `q1,p1,t_cross`, one row per crossing.
void write_section_csv(const std::vector<SectionPoint>& points, const std::string& path);

/// Header `t,q1,p1,q2,p2,energy`, one row per grid point.
void write_trajectory_csv(const Trajectory& trajectory, const std::string& path);

/// Ordered key-value pairs; duplicate keys keep file order.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct IniSection {
    std::string name;
    KeyValues entries;

    /// Last value of a key, or empty option if absent.
    const std::string* find(const std::string& key) const;
};

struct IniFile {
    std::vector<IniSection> sections;

    const IniSection* find(const std::string& name) const;
};

/// Lines `key = value` grouped under `[section]` headers; blank lines and
/// lines starting with '#' or ';' are ignored. Keys outside a section and
/// lines without '=' are rejected.
IniFile parse_ini(const std::string& text);
std::string serialize_ini(const IniFile& file);
IniFile load_ini(const std::string& path);

/// Complete, ordered key set describing a config; parsing it back yields an
/// identical ScenarioConfig.
KeyValues scenario_to_keys(const ScenarioConfig& cfg);

/// Builds a config from keys on top of default_config(regime). Unknown keys,
/// malformed values, and payload keys that contradict the declared initial
/// kinds are rejected with the offending key named.
ScenarioConfig scenario_from_keys(const KeyValues& keys, Regime regime);

/// Reads the [regime-name] section of an INI file (other sections ignored,
/// so a manifest works as a config file).
ScenarioConfig load_config(const std::string& path, Regime regime);

struct RunManifest {
    std::string version;
    ScenarioConfig config;
    double duration_seconds = 0.0;
    std::vector<std::string> outputs;  // file names relative to the run directory
};

/// Writes `<dir>/manifest`: a [run] section plus the config snapshot section.
void write_manifest(const RunManifest& manifest, const std::string& dir);
RunManifest read_manifest(const std::string& path);

// Gnuplot companions referencing a CSV by name; never render images here.
void write_entropy_plot_script(const std::string& csv_name, const std::string& path);
void write_polarization_plot_script(const std::string& csv_name, const std::string& path);
void write_section_plot_script(const std::string& csv_name, const std::string& path);

}  // namespace spindyn::io
