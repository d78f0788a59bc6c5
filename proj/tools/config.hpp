#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dadcert/group.hpp"
#include "dadcert/systems.hpp"

namespace dadcert::cli {

/// Malformed configuration (exit status 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat key-value text with [section] headers. Values are lists of tokens
/// separated by commas or spaces; '#' and ';' start comments.
///
///   [system]  model = odometer | sturmian, p, d, slope = golden | prefix/tail
///   [restriction]  set descriptor (optional)
///   [task]    command parameters
///   [output]  cover, certificate
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  const std::vector<std::string>& values(const std::string& section, const std::string& key) const;
  std::string str(const std::string& section, const std::string& key) const;
  std::string str_or(const std::string& section, const std::string& key, const std::string& fallback) const;
  int64_t integer(const std::string& section, const std::string& key) const;
  int64_t integer_or(const std::string& section, const std::string& key, int64_t fallback) const;

  System system() const;
  /// `ball:r` or a list of elements (scalars in Z, colon-joined coordinates
  /// such as 0:1 in Z^d).
  FiniteSubset subset(const std::string& section, const std::string& key, int dim) const;
  /// Set descriptor in a section: `set = full | empty`, or `cells` with
  /// `depth` (odometer), or `words` with `lo` (sturmian).
  std::optional<ClopenSet> clopen(const System& sys, const std::string& section) const;

 private:
  std::map<std::string, std::map<std::string, std::vector<std::string>>> data_;
};

GroupElement parse_element(const std::string& token, int dim);

}  // namespace dadcert::cli
