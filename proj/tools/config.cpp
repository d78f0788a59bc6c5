#include "config.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"

namespace dadcert::cli {

Config Config::parse(const std::string& text) {
  std::istringstream in(text);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  Config c;
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;
    const std::string section = it.parents.empty() ? "" : it.parents.front();
    c.data_[section][it.name] = it.inputs;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = data_.find(section);
  return s != data_.end() && s->second.count(key) > 0;
}

const std::vector<std::string>& Config::values(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ConfigError("config: missing [" + section + "] " + key);
  return data_.at(section).at(key);
}

std::string Config::str(const std::string& section, const std::string& key) const {
  const auto& v = values(section, key);
  if (v.size() != 1) throw ConfigError("config: [" + section + "] " + key + " needs one value");
  return v.front();
}

std::string Config::str_or(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? str(section, key) : fallback;
}

int64_t Config::integer(const std::string& section, const std::string& key) const {
  const auto s = str(section, key);
  try {
    size_t used = 0;
    const int64_t v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: [" + section + "] " + key + " is not an integer: " + s);
  }
}

int64_t Config::integer_or(const std::string& section, const std::string& key, int64_t fallback) const {
  return has(section, key) ? integer(section, key) : fallback;
}

namespace {

std::vector<int> digits(const Config& c, const std::string& key) {
  std::vector<int> out;
  if (!c.has("system", key)) return out;
  for (const auto& t : c.values("system", key)) {
    try {
      out.push_back(std::stoi(t));
    } catch (const std::exception&) {
      throw ConfigError("config: [system] " + key + " has a non-integer entry " + t);
    }
  }
  return out;
}

}  // namespace

System Config::system() const {
  const auto model = str("system", "model");
  System sys;
  if (model == "odometer") {
    sys = System::odometer(static_cast<int>(integer_or("system", "p", 2)), static_cast<int>(integer_or("system", "d", 1)));
  } else if (model == "sturmian") {
    Slope slope = Slope::golden();
    if (str_or("system", "slope", "golden") != "golden") {
      throw ConfigError("config: slope must be 'golden' or given by prefix/tail");
    }
    if (has("system", "prefix")) slope.prefix = digits(*this, "prefix");
    if (has("system", "tail")) slope.tail = digits(*this, "tail");
    sys = System::sturmian(slope);
  } else {
    throw ConfigError("config: unknown model " + model);
  }
  if (auto y = clopen(sys, "restriction")) sys = restrict(sys, *y);
  return sys;
}

GroupElement parse_element(const std::string& token, int dim) {
  std::vector<int64_t> coords;
  std::stringstream ss(token);
  std::string part;
  while (std::getline(ss, part, ':')) {
    try {
      size_t used = 0;
      coords.push_back(std::stoll(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("config: bad group element " + token);
    }
  }
  if (static_cast<int>(coords.size()) != dim) throw ConfigError("config: element " + token + " has wrong dimension");
  return GroupElement::from_span(coords);
}

FiniteSubset Config::subset(const std::string& section, const std::string& key, int dim) const {
  const auto& v = values(section, key);
  if (v.size() == 1 && v.front().rfind("ball:", 0) == 0) {
    const auto r = v.front().substr(5);
    try {
      return ball(dim, std::stoll(r));
    } catch (const std::exception&) {
      throw ConfigError("config: bad ball radius " + r);
    }
  }
  std::vector<GroupElement> elems;
  for (const auto& t : v) elems.push_back(parse_element(t, dim));
  return FiniteSubset(dim, std::move(elems));
}

std::optional<ClopenSet> Config::clopen(const System& sys, const std::string& section) const {
  if (has(section, "set")) {
    const auto s = str(section, "set");
    if (s == "full") return full_set(sys);
    if (s == "empty") return empty_set(sys);
    throw ConfigError("config: [" + section + "] set must be full or empty");
  }
  if (has(section, "cells")) {
    if (sys.model() != Model::odometer) throw ConfigError("config: cells describe odometer sets");
    std::vector<GroupElement> cells;
    for (const auto& t : values(section, "cells")) cells.push_back(parse_element(t, sys.dim()));
    return residues(sys, integer(section, "depth"), cells);
  }
  if (has(section, "words")) {
    if (sys.model() != Model::sturmian) throw ConfigError("config: words describe sturmian sets");
    return cylinders(sys, integer_or(section, "lo", 0), values(section, "words"));
  }
  return std::nullopt;
}

}  // namespace dadcert::cli
