#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lplab {

/// Universal constants the theory leaves unspecified, plus a few run guards.
///
/// The key set is closed: reading a file with an unknown key is an error.
/// Defaults are the Monte Carlo calibrated values shipped in
/// data/constants.default.txt.
class Constants {
 public:
  struct Entry {
    std::string_view key;
    double default_value;
    std::string_view description;
  };

  Constants();

  static const std::vector<Entry>& schema();
  static Constants defaults() { return Constants{}; }

  /// Parses flat `key = value` text. Blank lines and `#` comments are ignored.
  static Constants parse(std::istream& in, std::string_view origin = "<stream>");
  static Constants load(const std::filesystem::path& path);
  /// `explicit_path` if nonempty, else $LPLAB_CONSTANTS if set, else defaults.
  static Constants resolve(const std::string& explicit_path);

  double get(std::string_view key) const;
  void set(std::string_view key, double value);
  const std::map<std::string, double, std::less<>>& values() const { return values_; }

  void write(std::ostream& out) const;

  friend bool operator==(const Constants&, const Constants&) = default;

 private:
  std::map<std::string, double, std::less<>> values_;
};

}  // namespace lplab
