#include "mabguess/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <string_view>

namespace mabguess::cli {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kConfigError, field + ": " + what);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& field, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    config_error(field, fmt::format("'{}' is not a valid number", text));
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) config_error(field, "must be finite");
  }
  return value;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& text) {
  std::filesystem::path p(std::string(trim(text)));
  if (p.is_relative()) p = base / p;
  return p.lexically_normal();
}

void reject_unknown(const pt::ptree& section, const std::string& name,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : section) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) config_error(name + "." + key, "unknown key");
  }
}

std::vector<double> parse_proportions(const std::string& field, const std::string& text) {
  std::vector<double> out;
  std::string_view rest = text;
  while (!trim(rest).empty()) {
    const auto cut = rest.find_first_of(", ");
    const std::string_view item = cut == std::string_view::npos ? rest : rest.substr(0, cut);
    if (!trim(item).empty()) out.push_back(parse_number<double>(field, item));
    if (cut == std::string_view::npos) break;
    rest.remove_prefix(cut + 1);
  }
  if (out.empty()) config_error(field, "no proportions given");
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dictionaries.empty()) config_error("dictionaries", "at least one dictionary is required");
  std::set<std::string> names;
  for (const auto& d : dictionaries) {
    if (!names.insert(d.name).second) config_error("dictionaries." + d.name, "duplicate name");
  }
  if (composition && password_set) {
    config_error("composition", "give either [composition] or [password_set], not both");
  }
  if (composition) {
    if (composition->proportions.size() != dictionaries.size()) {
      config_error("composition.proportions",
                   fmt::format("{} proportions for {} dictionaries",
                               composition->proportions.size(), dictionaries.size()));
    }
    if (!on_simplex(composition->proportions)) {
      config_error("composition.proportions", "must be non-negative and sum to 1");
    }
    if (composition->users == 0) config_error("composition.users", "must be >= 1");
  }
  if (guesses == 0) config_error("attack.guesses", "must be >= 1");
  if (runs == 0) config_error("attack.runs", "must be >= 1");
  try {
    descent.validate();
  } catch (const Error& e) {
    config_error("descent", e.what());
  }
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kConfigError, e.message(), e.line());
  }

  ExperimentConfig cfg;
  cfg.output = resolve(base_dir, cfg.output.string());
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      config_error(section, "key outside of any section");
    }
    auto get = [&](std::string_view key) -> std::optional<std::string> {
      if (auto v = body.get_optional<std::string>(pt::ptree::path_type(std::string(key), '\0'))) {
        return std::string(trim(*v));
      }
      return std::nullopt;
    };
    auto field = [&](std::string_view key) { return section + "." + std::string(key); };

    if (section == "dictionaries") {
      for (const auto& [name, value] : body) {
        cfg.dictionaries.push_back({name, resolve(base_dir, value.data())});
      }
    } else if (section == "composition") {
      reject_unknown(body, section, {"proportions", "users", "seed"});
      Composition c;
      if (auto v = get("proportions")) c.proportions = parse_proportions(field("proportions"), *v);
      else config_error(field("proportions"), "missing");
      if (auto v = get("users")) c.users = parse_number<std::uint64_t>(field("users"), *v);
      else config_error(field("users"), "missing");
      if (auto v = get("seed")) c.seed = parse_number<std::uint64_t>(field("seed"), *v);
      cfg.composition = std::move(c);
    } else if (section == "password_set") {
      reject_unknown(body, section, {"path"});
      if (auto v = get("path")) cfg.password_set = resolve(base_dir, *v);
      else config_error(field("path"), "missing");
    } else if (section == "attack") {
      reject_unknown(body, section, {"init", "guess", "guesses", "runs", "seed"});
      if (auto v = get("init")) {
        auto p = parse_init_policy(*v);
        if (!p) config_error(field("init"), "expected random | average | best");
        cfg.init = *p;
      }
      if (auto v = get("guess")) {
        auto p = parse_guess_policy(*v);
        if (!p) config_error(field("guess"), "expected random-dict | best-dict | by-q");
        cfg.guess = *p;
      }
      if (auto v = get("guesses")) cfg.guesses = parse_number<std::size_t>(field("guesses"), *v);
      if (auto v = get("runs")) cfg.runs = parse_number<std::size_t>(field("runs"), *v);
      if (auto v = get("seed")) cfg.seed = parse_number<std::uint64_t>(field("seed"), *v);
    } else if (section == "descent") {
      reject_unknown(body, section, {"max_steps", "initial_step", "backtrack_factor", "min_step",
                                     "probability_floor", "convergence_tol"});
      DescentConfig& d = cfg.descent;
      if (auto v = get("max_steps")) d.max_steps = parse_number<int>(field("max_steps"), *v);
      if (auto v = get("initial_step")) d.initial_step = parse_number<double>(field("initial_step"), *v);
      if (auto v = get("backtrack_factor")) d.backtrack_factor = parse_number<double>(field("backtrack_factor"), *v);
      if (auto v = get("min_step")) d.min_step = parse_number<double>(field("min_step"), *v);
      if (auto v = get("probability_floor")) d.probability_floor = parse_number<double>(field("probability_floor"), *v);
      if (auto v = get("convergence_tol")) d.convergence_tol = parse_number<double>(field("convergence_tol"), *v);
    } else if (section == "estimate") {
      reject_unknown(body, section, {"words_file"});
      if (auto v = get("words_file")) cfg.estimate_words = resolve(base_dir, *v);
    } else if (section == "output") {
      reject_unknown(body, section, {"directory"});
      if (auto v = get("directory")) cfg.output = resolve(base_dir, *v);
    } else {
      config_error(section, "unknown section");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

void write_config(const ExperimentConfig& config, std::ostream& out) {
  fmt::print(out, "[dictionaries]\n");
  for (const auto& d : config.dictionaries) fmt::print(out, "{} = {}\n", d.name, d.path.string());
  if (config.composition) {
    fmt::print(out, "\n[composition]\nproportions = {}\nusers = {}\nseed = {}\n",
               fmt::join(config.composition->proportions, ", "), config.composition->users,
               config.composition->seed);
  }
  if (config.password_set) {
    fmt::print(out, "\n[password_set]\npath = {}\n", config.password_set->string());
  }
  fmt::print(out, "\n[attack]\ninit = {}\nguess = {}\nguesses = {}\nruns = {}\nseed = {}\n",
             to_string(config.init), to_string(config.guess), config.guesses, config.runs,
             config.seed);
  const DescentConfig& d = config.descent;
  fmt::print(out,
             "\n[descent]\nmax_steps = {}\ninitial_step = {}\nbacktrack_factor = {}\n"
             "min_step = {}\nprobability_floor = {}\nconvergence_tol = {}\n",
             d.max_steps, d.initial_step, d.backtrack_factor, d.min_step, d.probability_floor,
             d.convergence_tol);
  if (config.estimate_words) {
    fmt::print(out, "\n[estimate]\nwords_file = {}\n", config.estimate_words->string());
  }
  fmt::print(out, "\n[output]\ndirectory = {}\n", config.output.string());
}

}  // namespace mabguess::cli
