#include "wealthnet/config.hpp"

#include "wealthnet/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

namespace wealthnet {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_real(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    if (t == "nan" || t == "inf" || t == "-inf") throw ConfigError(std::string(key), "expected a finite number");
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(std::string(key), "expected a number, got '" + t + "'");
    }
    return value;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(std::string(key), "expected a non-negative integer, got '" + t + "'");
    }
    return value;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) out.push_back(parse_real(key, item));
    if (out.empty()) throw ConfigError(std::string(key), "expected a comma-separated list");
    return out;
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_shortest(values[i]);
    }
    return out;
}

std::vector<double> rates(const MarketParams& m, bool win) {
    std::vector<double> out;
    for (std::size_t i = 0; i < m.real_asset_count(); ++i) out.push_back(win ? m.assets[i].win_rate : m.assets[i].loss_rate);
    return out;
}

void set_rates(MarketParams& m, const std::vector<double>& wins, const std::vector<double>& losses,
               std::string_view key) {
    if (wins.size() != losses.size()) {
        throw ConfigError(std::string(key), "win_rates and loss_rates must list the same number of assets");
    }
    std::vector<AssetSpec> assets;
    for (std::size_t i = 0; i < wins.size(); ++i) assets.push_back(AssetSpec::real(wins[i], losses[i]));
    assets.push_back(AssetSpec::no_investment());
    m.assets = std::move(assets);
}

struct Binding {
    ConfigKey key;
    std::function<void(ScenarioConfig&, std::string_view)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

const std::vector<Binding>& bindings() {
    static const std::vector<Binding> table = [] {
        std::vector<Binding> b;
        auto add = [&](std::string section, std::string name, std::string description, auto set, auto get) {
            b.push_back({{std::move(section), std::move(name), std::move(description)}, set, get});
        };
        auto str_u = [](std::uint64_t v) { return std::to_string(v); };

        add("market", "n", "number of agents",
            [](ScenarioConfig& c, std::string_view v) { c.market.agents = parse_unsigned("n", v); },
            [=](const ScenarioConfig& c) { return str_u(c.market.agents); });
        add("market", "delta", "fraction of wealth staked per trade",
            [](ScenarioConfig& c, std::string_view v) { c.market.delta = parse_real("delta", v); },
            [](const ScenarioConfig& c) { return format_shortest(c.market.delta); });
        add("market", "x0", "initial wealth of every agent",
            [](ScenarioConfig& c, std::string_view v) { c.market.initial_wealth = parse_real("x0", v); },
            [](const ScenarioConfig& c) { return format_shortest(c.market.initial_wealth); });
        add("market", "availability_fraction", "per-asset session capacity as a fraction of total wealth",
            [](ScenarioConfig& c, std::string_view v) {
                c.market.availability_fraction = parse_real("availability_fraction", v);
            },
            [](const ScenarioConfig& c) { return format_shortest(c.market.availability_fraction); });
        add("market", "win_rates", "comma-separated win rates of the real assets",
            [](ScenarioConfig& c, std::string_view v) {
                set_rates(c.market, parse_list("win_rates", v), rates(c.market, false), "win_rates");
            },
            [](const ScenarioConfig& c) { return join(rates(c.market, true)); });
        add("market", "loss_rates", "comma-separated loss rates of the real assets",
            [](ScenarioConfig& c, std::string_view v) {
                set_rates(c.market, rates(c.market, true), parse_list("loss_rates", v), "loss_rates");
            },
            [](const ScenarioConfig& c) { return join(rates(c.market, false)); });
        add("market", "ordinary_threshold", "lowest attitude of the ordinary class",
            [](ScenarioConfig& c, std::string_view v) {
                c.market.boundaries.ordinary = parse_real("ordinary_threshold", v);
            },
            [](const ScenarioConfig& c) { return format_shortest(c.market.boundaries.ordinary); });
        add("market", "audacious_threshold", "lowest attitude of the audacious class",
            [](ScenarioConfig& c, std::string_view v) {
                c.market.boundaries.audacious = parse_real("audacious_threshold", v);
            },
            [](const ScenarioConfig& c) { return format_shortest(c.market.boundaries.audacious); });

        add("tax", "tax", "tobin | flat",
            [](ScenarioConfig& c, std::string_view v) {
                const auto t = trim(v);
                if (t == "tobin") c.tax.scheme = TaxScheme::TobinLike;
                else if (t == "flat") c.tax.scheme = TaxScheme::Flat;
                else throw ConfigError("tax", "expected 'tobin' or 'flat', got '" + t + "'");
            },
            [](const ScenarioConfig& c) { return std::string(to_string(c.tax.scheme)); });
        add("tax", "tobin_denominator", "winners | literal",
            [](ScenarioConfig& c, std::string_view v) {
                const auto t = trim(v);
                if (t == "winners") c.tax.denominator = TobinDenominator::WinnersOnly;
                else if (t == "literal") c.tax.denominator = TobinDenominator::AllGains;
                else throw ConfigError("tobin_denominator", "expected 'winners' or 'literal', got '" + t + "'");
            },
            [](const ScenarioConfig& c) { return std::string(to_string(c.tax.denominator)); });

        add("herding", "scenario", "reference | focal",
            [](ScenarioConfig& c, std::string_view v) {
                const auto t = trim(v);
                if (t == "reference") c.scenario = Scenario::Reference;
                else if (t == "focal") c.scenario = Scenario::Focal;
                else throw ConfigError("scenario", "expected 'reference' or 'focal', got '" + t + "'");
            },
            [](const ScenarioConfig& c) { return std::string(to_string(c.scenario)); });
        add("herding", "w", "interaction weight in [0, 1]",
            [](ScenarioConfig& c, std::string_view v) { c.herding.weight = parse_real("w", v); },
            [](const ScenarioConfig& c) { return format_shortest(c.herding.weight); });
        add("herding", "kt", "trigger step of communities and herding",
            [](ScenarioConfig& c, std::string_view v) { c.herding.trigger_step = parse_unsigned("kt", v); },
            [=](const ScenarioConfig& c) { return str_u(c.herding.trigger_step); });

        add("network", "edges_per_node", "preferential-attachment links per joining follower",
            [](ScenarioConfig& c, std::string_view v) {
                c.network.edges_per_node = parse_unsigned("edges_per_node", v);
            },
            [=](const ScenarioConfig& c) { return str_u(c.network.edges_per_node); });
        add("network", "leaders", "number of leaders chosen at the trigger step",
            [](ScenarioConfig& c, std::string_view v) { c.network.leader_count = parse_unsigned("leaders", v); },
            [=](const ScenarioConfig& c) { return str_u(c.network.leader_count); });
        add("network", "rewire_fraction", "fraction of edges rewired across communities, at most 0.05",
            [](ScenarioConfig& c, std::string_view v) {
                c.network.rewire_fraction = parse_real("rewire_fraction", v);
            },
            [](const ScenarioConfig& c) { return format_shortest(c.network.rewire_fraction); });

        add("run", "steps", "trading sessions per replicate (T)",
            [](ScenarioConfig& c, std::string_view v) { c.run.steps = parse_unsigned("steps", v); },
            [=](const ScenarioConfig& c) { return str_u(c.run.steps); });
        add("run", "replicates", "Monte Carlo replicates (R)",
            [](ScenarioConfig& c, std::string_view v) { c.run.replicates = parse_unsigned("replicates", v); },
            [=](const ScenarioConfig& c) { return str_u(c.run.replicates); });
        add("run", "seed", "master seed",
            [](ScenarioConfig& c, std::string_view v) { c.run.seed = parse_unsigned("seed", v); },
            [=](const ScenarioConfig& c) { return str_u(c.run.seed); });
        add("run", "workers", "worker threads, 0 for one per core",
            [](ScenarioConfig& c, std::string_view v) { c.run.workers = parse_unsigned("workers", v); },
            [=](const ScenarioConfig& c) { return str_u(c.run.workers); });
        add("run", "steady_window", "trailing steps averaged for steady-state statistics",
            [](ScenarioConfig& c, std::string_view v) { c.run.steady_window = parse_unsigned("steady_window", v); },
            [=](const ScenarioConfig& c) { return str_u(c.run.steady_window); });
        add("run", "moving_average", "window of the smoothed volume series",
            [](ScenarioConfig& c, std::string_view v) { c.run.moving_average = parse_unsigned("moving_average", v); },
            [=](const ScenarioConfig& c) { return str_u(c.run.moving_average); });
        return b;
    }();
    return table;
}

const Binding* find_binding(std::string_view key) {
    for (const auto& b : bindings()) {
        if (b.key.name == key) return &b;
    }
    return nullptr;
}

bool is_section(const std::string& name) {
    return name == "market" || name == "tax" || name == "herding" || name == "network" || name == "run";
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> out;
        for (const auto& b : bindings()) out.push_back(b.key);
        return out;
    }();
    return keys;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general,
                                         std::numeric_limits<double>::max_digits10);
    return std::string(buf, ptr);
}

std::string format_shortest(double value) {
    if (!std::isfinite(value)) return format_number(value);
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

ScenarioConfig default_config() { return ScenarioConfig{}; }

void apply_preset(ScenarioConfig& config, std::string_view preset) {
    if (preset == "desk") {
        config.run.steps = 500;
        config.run.replicates = 100;
    } else if (preset == "paper") {
        config.run.steps = 1000;
        config.run.replicates = 1000;
    } else {
        throw ConfigError("preset", "expected 'desk' or 'paper', got '" + std::string(preset) + "'");
    }
}

void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value) {
    const Binding* b = find_binding(key);
    if (!b) throw ConfigError(std::string(key), "unknown configuration key");
    b->set(config, value);
}

void apply_settings(ScenarioConfig& config, std::span<const std::pair<std::string, std::string>> settings) {
    std::optional<std::vector<double>> wins;
    std::optional<std::vector<double>> losses;
    for (const auto& [key, value] : settings) {
        if (key == "win_rates") {
            wins = parse_list(key, value);
        } else if (key == "loss_rates") {
            losses = parse_list(key, value);
        } else {
            apply_setting(config, key, value);
        }
    }
    if (wins || losses) {
        set_rates(config.market, wins ? *wins : rates(config.market, true),
                  losses ? *losses : rates(config.market, false), wins ? "win_rates" : "loss_rates");
    }
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
    }

    std::vector<std::pair<std::string, std::string>> settings;
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            if (is_section(name) && node.data().empty()) continue;
            if (!find_binding(name)) throw ConfigError(name, "unknown configuration key");
            settings.emplace_back(name, node.data());
            continue;
        }
        if (!is_section(name)) throw ConfigError(name, "unknown section");
        for (const auto& [key, leaf] : node) {
            const Binding* b = find_binding(key);
            if (!b) throw ConfigError(key, "unknown configuration key in [" + name + "]");
            if (b->key.section != name) {
                throw ConfigError(key, "belongs to [" + b->key.section + "], found in [" + name + "]");
            }
            settings.emplace_back(key, leaf.data());
        }
    }
    apply_settings(base, settings);
    base.validate();
    return base;
}

std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& config) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& b : bindings()) out.emplace_back(b.key.name, b.get(config));
    return out;
}

std::string to_config_text(const ScenarioConfig& config) {
    std::string out;
    std::string section;
    for (const auto& b : bindings()) {
        if (b.key.section != section) {
            if (!section.empty()) out += '\n';
            section = b.key.section;
            out += '[' + section + "]\n";
        }
        out += b.key.name + " = " + b.get(config) + '\n';
    }
    return out;
}

}  // namespace wealthnet
