#include "patient/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "patient/format.hpp"

namespace patient {

ConfigError::ConfigError(std::string field, std::size_t line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : "field '" + field + "': ") + message),
      field_(std::move(field)),
      line_(line) {}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    if (a.arms.size() != b.arms.size()) return false;
    for (std::size_t i = 0; i < a.arms.size(); ++i) {
        if (!(a.arms[i].reward == b.arms[i].reward) || !(a.arms[i].delay == b.arms[i].delay)) {
            return false;
        }
    }
    return a.label == b.label && a.policy == b.policy && a.horizon == b.horizon &&
           a.runs == b.runs && a.master_seed == b.master_seed && a.checkpoints == b.checkpoints &&
           a.output == b.output && a.note == b.note;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view text) {
    text = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw std::invalid_argument("expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

template <class Int>
Int to_integer(std::string_view text) {
    text = trim(text);
    Int value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

bool to_bool(std::string_view text) {
    text = trim(text);
    if (text == "true") return true;
    if (text == "false") return false;
    throw std::invalid_argument("expected true or false, got '" + std::string(text) + "'");
}

/// Splits "name(a,b,c)" into name and argument list.
std::pair<std::string, std::vector<std::string_view>> split_call(std::string_view text) {
    text = trim(text);
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') {
        throw std::invalid_argument("expected name(args), got '" + std::string(text) + "'");
    }
    std::string name(trim(text.substr(0, open)));
    std::vector<std::string_view> args;
    std::string_view inner = text.substr(open + 1, text.size() - open - 2);
    while (true) {
        const auto comma = inner.find(',');
        args.push_back(trim(inner.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        inner = inner.substr(comma + 1);
    }
    return {name, args};
}

void expect_arity(const std::string& name, const std::vector<std::string_view>& args, std::size_t n) {
    if (args.size() != n) {
        throw std::invalid_argument(name + " takes " + std::to_string(n) + " argument(s), got " +
                                    std::to_string(args.size()));
    }
}

std::string format_checkpoints(const std::vector<Round>& checkpoints) {
    if (checkpoints.empty()) return "default";
    std::string out;
    for (std::size_t j = 0; j < checkpoints.size(); ++j) {
        if (j) out += ",";
        out += std::to_string(checkpoints[j]);
    }
    return out;
}

std::vector<Round> parse_checkpoints(std::string_view text) {
    text = trim(text);
    if (text == "default") return {};
    std::vector<Round> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(to_integer<Round>(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
    }
    for (std::size_t j = 1; j < out.size(); ++j) {
        if (out[j] <= out[j - 1]) throw std::invalid_argument("checkpoints must be strictly increasing");
    }
    return out;
}

void check_single_line(const std::string& field, const std::string& value, bool forbid_comma) {
    if (value.find('\n') != std::string::npos) {
        throw ConfigError(field, 0, "value must fit on one line");
    }
    if (value.find('#') != std::string::npos) {
        throw ConfigError(field, 0, "value may not contain '#'");
    }
    if (forbid_comma && value.find_first_of(",\"") != std::string::npos) {
        throw ConfigError(field, 0, "value may not contain commas or quotes");
    }
}

}  // namespace

std::string format_reward_law(const RewardLaw& law) {
    return std::visit(
        overloaded{[](const Bernoulli& b) { return "bernoulli(" + format_number(b.mu) + ")"; },
                   [](const PointMass& p) { return "point(" + format_number(p.value) + ")"; }},
        law.kind());
}

std::string format_delay_law(const DelayLaw& law) {
    return std::visit(
        overloaded{[](const Dirac& d) { return "dirac(" + std::to_string(d.d) + ")"; },
                   [](const ParetoCeil& p) { return "pareto(" + format_number(p.alpha) + ")"; },
                   [](const TwoPointMass& t) {
                       return "twopoint(" + format_number(t.p) + "," + std::to_string(t.d0) + "," +
                              std::to_string(t.d1) + ")";
                   },
                   [](const Geometric& g) { return "geometric(" + format_number(g.q) + ")"; }},
        law.kind());
}

RewardLaw parse_reward_law(std::string_view text) {
    const auto [name, args] = split_call(text);
    if (name == "bernoulli") {
        expect_arity(name, args, 1);
        return RewardLaw::bernoulli(to_double(args[0]));
    }
    if (name == "point") {
        expect_arity(name, args, 1);
        return RewardLaw::point_mass(to_double(args[0]));
    }
    throw std::invalid_argument("unknown reward law '" + name + "' (expected bernoulli|point)");
}

DelayLaw parse_delay_law(std::string_view text) {
    const auto [name, args] = split_call(text);
    if (name == "dirac") {
        expect_arity(name, args, 1);
        return DelayLaw::dirac(to_integer<Delay>(args[0]));
    }
    if (name == "pareto") {
        expect_arity(name, args, 1);
        return DelayLaw::pareto_ceil(to_double(args[0]));
    }
    if (name == "twopoint") {
        expect_arity(name, args, 3);
        return DelayLaw::two_point(to_double(args[0]), to_integer<Delay>(args[1]),
                                   to_integer<Delay>(args[2]));
    }
    if (name == "geometric") {
        expect_arity(name, args, 1);
        return DelayLaw::geometric(to_double(args[0]));
    }
    throw std::invalid_argument("unknown delay law '" + name +
                                "' (expected dirac|pareto|twopoint|geometric)");
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    bool seen_policy = false;
    bool seen_horizon = false;
    std::size_t horizon_line = 0;
    std::size_t line_no = 0;

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("", line_no, "expected 'key = value', got '" + std::string(line) + "'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        try {
            if (key == "label") {
                config.label = std::string(value);
                check_single_line(key, config.label, true);
            } else if (key == "horizon") {
                config.horizon = to_integer<Round>(value);
                if (config.horizon < 1) throw std::invalid_argument("horizon must be positive");
                seen_horizon = true;
                horizon_line = line_no;
            } else if (key == "runs") {
                config.runs = to_integer<std::size_t>(value);
                if (config.runs < 1) throw std::invalid_argument("runs must be at least 1");
            } else if (key == "master_seed") {
                config.master_seed = to_integer<std::uint64_t>(value);
            } else if (key == "checkpoints") {
                config.checkpoints = parse_checkpoints(value);
            } else if (key == "output") {
                config.output = std::string(value);
            } else if (key == "note") {
                config.note = std::string(value);
            } else if (key == "arm") {
                const auto space = value.find(')');
                if (space == std::string_view::npos) {
                    throw std::invalid_argument("expected '<reward law> <delay law>'");
                }
                config.arms.push_back(Arm{parse_reward_law(value.substr(0, space + 1)),
                                          parse_delay_law(value.substr(space + 1))});
            } else if (key == "policy") {
                config.policy.kind = parse_policy_tag(value);
                seen_policy = true;
            } else if (key == "policy.alpha") {
                config.policy.alpha = to_double(value);
            } else if (key == "policy.alpha_schedule") {
                config.policy.alpha_schedule = to_bool(value);
            } else if (key == "policy.bias") {
                config.policy.bias = to_bool(value);
            } else if (key == "policy.c") {
                config.policy.c = to_double(value);
            } else if (key == "policy.alpha_floor") {
                config.policy.alpha_floor = to_double(value);
            } else if (key == "policy.mu_floor") {
                config.policy.mu_floor = to_double(value);
            } else if (key == "policy.window") {
                config.policy.window = to_integer<Delay>(value);
            } else if (key == "policy.cdf") {
                config.policy.assumed_cdf = parse_delay_law(value);
            } else {
                throw std::invalid_argument("unknown key");
            }
        } catch (const ConfigError& e) {
            throw ConfigError(key, line_no, e.what());
        } catch (const std::exception& e) {
            throw ConfigError(key, line_no, e.what());
        }
    }

    if (config.arms.empty()) throw ConfigError("arm", 0, "at least one arm is required");
    if (!seen_horizon) throw ConfigError("horizon", 0, "missing");
    if (!seen_policy) throw ConfigError("policy", 0, "missing");
    if (config.horizon < static_cast<Round>(config.arms.size())) {
        throw ConfigError("horizon", horizon_line,
                          "T=" + std::to_string(config.horizon) + " is smaller than K=" +
                              std::to_string(config.arms.size()));
    }
    if (!config.checkpoints.empty() && config.checkpoints.back() > config.horizon) {
        throw ConfigError("checkpoints", 0, "checkpoint beyond the horizon");
    }
    if (!config.checkpoints.empty() && config.checkpoints.front() < 1) {
        throw ConfigError("checkpoints", 0, "checkpoints start at round 1");
    }
    try {
        (void)make_policy(config.policy, config.arms.size(), config.horizon);
    } catch (const std::exception& e) {
        throw ConfigError("policy", 0, e.what());
    }
    if (config.label.empty()) {
        config.label = make_policy(config.policy, config.arms.size(), config.horizon)->name();
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& config) {
    check_single_line("label", config.label, true);
    check_single_line("output", config.output, false);
    check_single_line("note", config.note, false);

    std::ostringstream out;
    out << "label = " << config.label << "\n";
    out << "horizon = " << config.horizon << "\n";
    out << "runs = " << config.runs << "\n";
    out << "master_seed = " << config.master_seed << "\n";
    out << "checkpoints = " << format_checkpoints(config.checkpoints) << "\n";
    if (!config.output.empty()) out << "output = " << config.output << "\n";
    for (const auto& arm : config.arms) {
        out << "arm = " << format_reward_law(arm.reward) << " " << format_delay_law(arm.delay) << "\n";
    }
    const PolicySpec& p = config.policy;
    out << "policy = " << policy_tag(p.kind) << "\n";
    out << "policy.alpha = " << format_number(p.alpha) << "\n";
    out << "policy.alpha_schedule = " << (p.alpha_schedule ? "true" : "false") << "\n";
    out << "policy.bias = " << (p.bias ? "true" : "false") << "\n";
    out << "policy.c = " << format_number(p.c) << "\n";
    out << "policy.alpha_floor = " << format_number(p.alpha_floor) << "\n";
    out << "policy.mu_floor = " << format_number(p.mu_floor) << "\n";
    out << "policy.window = " << p.window << "\n";
    if (p.assumed_cdf) out << "policy.cdf = " << format_delay_law(*p.assumed_cdf) << "\n";
    if (!config.note.empty()) out << "note = " << config.note << "\n";
    return out.str();
}

// presets

namespace {

std::size_t scaled_runs(std::size_t base, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    const auto n = std::llround(static_cast<double>(base) * scale);
    return static_cast<std::size_t>(std::max<long long>(n, 1));
}

std::vector<Arm> two_pareto_arms(double mu1, double alpha1, double mu2, double alpha2) {
    return {Arm{RewardLaw::bernoulli(mu1), DelayLaw::pareto_ceil(alpha1)},
            Arm{RewardLaw::bernoulli(mu2), DelayLaw::pareto_ceil(alpha2)}};
}

ExperimentConfig base_config(std::vector<Arm> arms, PolicySpec policy, std::size_t runs,
                             std::uint64_t seed) {
    ExperimentConfig c;
    c.arms = std::move(arms);
    c.policy = policy;
    c.horizon = 3000;
    c.runs = runs;
    c.master_seed = seed;
    c.label = make_policy(c.policy, c.arms.size(), c.horizon)->name();
    return c;
}

PolicySpec patient_spec(double alpha) {
    PolicySpec p;
    p.kind = PolicyKind::patient;
    p.alpha = alpha;
    return p;
}

PolicySpec ducb_spec(Delay window, DelayLaw cdf) {
    PolicySpec p;
    p.kind = PolicyKind::ducb;
    p.window = window;
    p.assumed_cdf = cdf;
    return p;
}

std::vector<ExperimentConfig> delay_comparison(std::vector<Arm> arms, std::size_t runs,
                                               std::uint64_t seed) {
    std::vector<ExperimentConfig> out;
    for (double alpha : {0.1, 0.5}) out.push_back(base_config(arms, patient_spec(alpha), runs, seed));
    for (Delay m : {10, 50, 100, 200}) {
        out.push_back(base_config(arms, ducb_spec(m, DelayLaw::pareto_ceil(0.7)), runs, seed));
    }
    return out;
}

}  // namespace

std::vector<std::string> preset_names() { return {"figure2", "figure3", "figure4", "figure5"}; }

std::vector<ExperimentConfig> preset(std::string_view name, double scale, std::uint64_t master_seed) {
    std::vector<ExperimentConfig> out;
    if (name == "figure2") {
        const std::size_t runs = scaled_runs(400, scale);
        const auto arms = two_pareto_arms(0.5, 1.0, 0.55, 0.3);
        for (int j = 1; j <= 25; ++j) {
            out.push_back(base_config(arms, patient_spec(j / 50.0), runs, master_seed));
        }
    } else if (name == "figure3") {
        const std::size_t runs = scaled_runs(300, scale);
        for (double alpha2 : {0.2, 0.3, 0.4, 0.5, 0.8}) {
            for (int j = 1; j <= 30; ++j) {
                const double gap = j / 50.0;
                auto c = base_config(two_pareto_arms(0.4, 1.0, 0.4 + gap, alpha2),
                                     patient_spec(alpha2), runs, master_seed);
                c.label += "@delta=" + format_number(gap);
                out.push_back(std::move(c));
            }
        }
    } else if (name == "figure4") {
        out = delay_comparison(two_pareto_arms(0.6, 0.7, 0.8, 0.7), scaled_runs(400, scale),
                               master_seed);
    } else if (name == "figure5") {
        out = delay_comparison(two_pareto_arms(0.6, 1.0, 0.8, 0.3), scaled_runs(400, scale),
                               master_seed);
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) +
                                    "' (expected figure2|figure3|figure4|figure5)");
    }
    return out;
}

std::vector<std::string> preset_notes(std::string_view name) {
    std::vector<std::string> notes{
        "pareto(a) delays are ceil(Z) with Z Pareto type I of scale 1, so P(D > m) = m^-a",
        "regret is pseudo-regret sum_i gap_i * pulls_i(t)",
        "horizon 3000 for every preset"};
    if (name == "figure3") {
        notes.emplace_back("arm means are (0.4, 0.4 + delta)");
        notes.emplace_back("delta grid: 30 evenly spaced values in [0.02, 0.6]");
    }
    if (name == "figure2") notes.emplace_back("alpha grid: 25 evenly spaced values in [0.02, 0.5]");
    if (name == "figure4" || name == "figure5") {
        notes.emplace_back("ducb is given the pareto(0.7) CDF");
    }
    return notes;
}

// running and output

std::vector<ExperimentResult> run_experiments(const std::vector<ExperimentConfig>& configs,
                                              unsigned threads) {
    std::vector<ExperimentResult> out;
    out.reserve(configs.size());
    for (const auto& c : configs) {
        MonteCarloOptions options;
        options.runs = c.runs;
        options.master_seed = c.master_seed;
        options.checkpoints = c.checkpoints;
        options.threads = threads;
        out.push_back(ExperimentResult{c.label, monte_carlo(c.instance(), c.policy, options)});
    }
    return out;
}

std::string render_csv(const std::vector<ExperimentResult>& results) {
    std::string out = "policy,run_count,round,mean_regret,stderr\n";
    for (const auto& r : results) {
        const auto& m = r.result;
        for (std::size_t j = 0; j < m.checkpoints.size(); ++j) {
            out += r.label;
            out += ',';
            out += std::to_string(m.runs);
            out += ',';
            out += std::to_string(m.checkpoints[j]);
            out += ',';
            out += format_number(m.mean[j]);
            out += ',';
            out += format_number(m.std_error[j]);
            out += '\n';
        }
    }
    return out;
}

std::string render_gnuplot(const std::vector<ExperimentResult>& results) {
    std::string out;
    for (std::size_t g = 0; g < results.size(); ++g) {
        if (g) out += "\n\n";
        const auto& m = results[g].result;
        out += "# " + results[g].label + " (" + std::to_string(m.runs) + " runs)\n";
        out += "# round mean_regret stderr\n";
        for (std::size_t j = 0; j < m.checkpoints.size(); ++j) {
            out += std::to_string(m.checkpoints[j]) + " " + format_number(m.mean[j]) + " " +
                   format_number(m.std_error[j]) + "\n";
        }
    }
    return out;
}

std::string render_metadata(const std::vector<ExperimentConfig>& configs,
                            const std::vector<std::string>& notes) {
    nlohmann::ordered_json meta;
    meta["artifact"] = "patient-bandits";
    meta["version"] = std::string(kArtifactVersion);
    meta["master_seed"] = configs.empty() ? 0 : configs.front().master_seed;
    meta["notes"] = notes;
    auto& list = meta["configs"] = nlohmann::ordered_json::array();
    for (const auto& c : configs) list.push_back(serialize_config(c));
    return meta.dump(2) + "\n";
}

void write_file_atomically(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace patient
