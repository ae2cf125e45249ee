#include "eeafs/config_file.hpp"

#include "eeafs/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

namespace eeafs {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_number(std::string_view text)
{
    const std::string s = trim(text);
    if (s == "inf" || s == "infinity" || s == "+inf")
        return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || s.empty())
        return std::nullopt;
    return v;
}

std::vector<std::string> split_items(std::string_view text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!cur.empty())
                out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty())
        out.push_back(std::move(cur));
    return out;
}

class SectionReader {
public:
    SectionReader(std::string name, const pt::ptree& tree, std::vector<std::string>& errors)
        : name_(std::move(name)), tree_(tree), errors_(errors)
    {
    }

    void number(const char* key, double& dst)
    {
        seen_.insert(key);
        auto raw = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!raw)
            return;
        if (auto v = to_number(*raw))
            dst = *v;
        else
            errors_.push_back("[" + name_ + "] " + key + ": '" + *raw + "' is not a number");
    }

    void optional_number(const char* key, std::optional<double>& dst)
    {
        seen_.insert(key);
        auto raw = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!raw)
            return;
        if (auto v = to_number(*raw))
            dst = *v;
        else
            errors_.push_back("[" + name_ + "] " + key + ": '" + *raw + "' is not a number");
    }

    void text(const char* key, std::string& dst)
    {
        seen_.insert(key);
        if (auto raw = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0')))
            dst = trim(*raw);
    }

    void numbers(const char* key, std::vector<double>& dst, bool required)
    {
        seen_.insert(key);
        auto raw = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!raw) {
            if (required)
                errors_.push_back("[" + name_ + "] missing required key '" + key + "'");
            return;
        }
        dst.clear();
        for (const auto& item : split_items(*raw)) {
            if (auto v = to_number(item))
                dst.push_back(*v);
            else
                errors_.push_back("[" + name_ + "] " + key + ": '" + item + "' is not a number");
        }
    }

    void flag(const char* key, bool& dst)
    {
        seen_.insert(key);
        auto raw = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!raw)
            return;
        const std::string v = trim(*raw);
        if (v == "true" || v == "1" || v == "yes" || v == "on")
            dst = true;
        else if (v == "false" || v == "0" || v == "no" || v == "off")
            dst = false;
        else
            errors_.push_back("[" + name_ + "] " + key + ": '" + v + "' is not a boolean");
    }

    // "time:value" pairs.
    void pairs(const char* key, std::vector<std::pair<double, double>>& dst)
    {
        seen_.insert(key);
        auto raw = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!raw)
            return;
        for (const auto& item : split_items(*raw)) {
            const auto colon = item.find(':');
            std::optional<double> t, v;
            if (colon != std::string::npos) {
                t = to_number(std::string_view(item).substr(0, colon));
                v = to_number(std::string_view(item).substr(colon + 1));
            }
            if (!t || !v)
                errors_.push_back("[" + name_ + "] " + key + ": '" + item + "' is not time:value");
            else
                dst.emplace_back(*t, *v);
        }
    }

    void reject_unknown()
    {
        for (const auto& [k, _] : tree_)
            if (!seen_.contains(k))
                errors_.push_back("[" + name_ + "] unknown key '" + k + "'");
    }

private:
    std::string name_;
    const pt::ptree& tree_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
};

std::string format_number(double v)
{
    if (std::isinf(v))
        return "inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string join_numbers(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ' ';
        out += format_number(v[i]);
    }
    return out;
}

} // namespace

ScenarioConfig parse_config(std::istream& in)
{
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }

    ScenarioConfig cfg;
    std::vector<std::string> errors;
    std::map<int, LoopConfig> loops;

    for (const auto& [section, body] : tree) {
        if (section == "scenario") {
            SectionReader r(section, body, errors);
            std::string scheme;
            r.text("name", cfg.name);
            r.number("duration", cfg.duration);
            r.text("scheme", scheme);
            r.number("trace_stride", cfg.trace_stride);
            r.number("plant_substep", cfg.plant_substep);
            r.flag("release_pull_in", cfg.release_pull_in);
            r.reject_unknown();
            if (!scheme.empty()) {
                if (auto s = parse_scheme(scheme))
                    cfg.fs.mode = *s;
                else
                    errors.push_back("[scenario] scheme: unknown scheme '" + scheme + "'");
            }
        } else if (section == "fs") {
            SectionReader r(section, body, errors);
            r.number("t_fs", cfg.fs.t_fs);
            r.number("lambda", cfg.fs.lambda);
            r.number("e_min", cfg.fs.e_min);
            r.number("e_max", cfg.fs.e_max);
            r.number("beta", cfg.fs.beta);
            r.number("delta", cfg.fs.delta);
            r.number("alpha_min", cfg.fs.alpha_min);
            r.reject_unknown();
        } else if (section.rfind("loop.", 0) == 0) {
            int index = 0;
            const std::string suffix = section.substr(5);
            auto [ptr, ec] = std::from_chars(suffix.data(), suffix.data() + suffix.size(), index);
            if (ec != std::errc{} || ptr != suffix.data() + suffix.size() || index < 1) {
                errors.push_back("[" + section + "] loop sections are named loop.1, loop.2, ...");
                continue;
            }
            LoopConfig l;
            l.name = "loop" + suffix;
            SectionReader r(section, body, errors);
            std::vector<std::pair<double, double>> perturb, switches;
            r.text("name", l.name);
            r.numbers("num", l.plant.num, true);
            r.numbers("den", l.plant.den, true);
            r.number("kp", l.gains.kp);
            r.number("ki", l.gains.ki);
            r.number("kd", l.gains.kd);
            r.number("c_nom", l.c_nom);
            r.number("h0", l.h0);
            r.number("h_max", l.h_max);
            r.number("activation", l.activation);
            r.number("initial_reference", l.initial_reference);
            r.optional_number("delta", l.delta);
            r.pairs("perturbations", perturb);
            r.pairs("period_switches", switches);
            r.reject_unknown();
            for (auto [t, v] : perturb)
                l.perturbations.push_back({t, v});
            for (auto [t, h] : switches)
                l.period_switches.push_back({t, h});
            if (!loops.emplace(index, std::move(l)).second)
                errors.push_back("[" + section + "] duplicate loop section");
        } else {
            errors.push_back("unknown section [" + section + "]");
        }
    }

    int expected = 1;
    for (auto& [idx, l] : loops) {
        if (idx != expected)
            errors.push_back("loop sections must be numbered 1..N without gaps (missing loop." +
                             std::to_string(expected) + ")");
        expected = idx + 1;
        cfg.loops.push_back(std::move(l));
    }

    if (!errors.empty())
        throw ConfigError(std::move(errors));
    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file " + path.string());
    return parse_config(in);
}

void write_config(std::ostream& out, const ScenarioConfig& cfg)
{
    out << "[scenario]\n";
    if (!cfg.name.empty())
        out << "name = " << cfg.name << '\n';
    out << "duration = " << format_number(cfg.duration) << '\n'
        << "scheme = " << to_string(cfg.fs.mode) << '\n'
        << "trace_stride = " << format_number(cfg.trace_stride) << '\n'
        << "plant_substep = " << format_number(cfg.plant_substep) << '\n'
        << "release_pull_in = " << (cfg.release_pull_in ? "true" : "false") << "\n\n";
    out << "[fs]\n"
        << "t_fs = " << format_number(cfg.fs.t_fs) << '\n'
        << "lambda = " << format_number(cfg.fs.lambda) << '\n'
        << "e_min = " << format_number(cfg.fs.e_min) << '\n'
        << "e_max = " << format_number(cfg.fs.e_max) << '\n'
        << "beta = " << format_number(cfg.fs.beta) << '\n'
        << "delta = " << format_number(cfg.fs.delta) << '\n'
        << "alpha_min = " << format_number(cfg.fs.alpha_min) << '\n';
    for (std::size_t i = 0; i < cfg.loops.size(); ++i) {
        const auto& l = cfg.loops[i];
        out << "\n[loop." << i + 1 << "]\n";
        if (!l.name.empty())
            out << "name = " << l.name << '\n';
        out << "num = " << join_numbers(l.plant.num) << '\n'
            << "den = " << join_numbers(l.plant.den) << '\n'
            << "kp = " << format_number(l.gains.kp) << '\n'
            << "ki = " << format_number(l.gains.ki) << '\n'
            << "kd = " << format_number(l.gains.kd) << '\n'
            << "c_nom = " << format_number(l.c_nom) << '\n'
            << "h0 = " << format_number(l.h0) << '\n'
            << "h_max = " << format_number(l.h_max) << '\n'
            << "activation = " << format_number(l.activation) << '\n'
            << "initial_reference = " << format_number(l.initial_reference) << '\n';
        if (l.delta)
            out << "delta = " << format_number(*l.delta) << '\n';
        if (!l.perturbations.empty()) {
            out << "perturbations =";
            for (const auto& p : l.perturbations)
                out << ' ' << format_number(p.time) << ':' << format_number(p.reference);
            out << '\n';
        }
        if (!l.period_switches.empty()) {
            out << "period_switches =";
            for (const auto& s : l.period_switches)
                out << ' ' << format_number(s.time) << ':' << format_number(s.period);
            out << '\n';
        }
    }
}

} // namespace eeafs
