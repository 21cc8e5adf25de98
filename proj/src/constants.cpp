#include "lplab/constants.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lplab/errors.hpp"

namespace lplab {

const std::vector<Constants::Entry>& Constants::schema() {
  static const std::vector<Entry> entries = {
      {"n_min", 100, "smallest n accepted by the regime predictor"},
      {"quantile_check_K", 1.0, "allowed |xi - quantile_approx| * sqrt(log(n/i))"},
      {"feller_lo", 1.25, "lower edge of xi^-1 exp(-xi^2/2) / (1 - alpha)"},
      {"feller_hi", 1.45, "upper edge of xi^-1 exp(-xi^2/2) / (1 - alpha)"},
      {"moment_bracket_lo", 0.5, "lower factor: incomplete integral / order expression"},
      {"moment_bracket_hi", 2.5, "upper factor: incomplete integral / order expression"},
      {"dev_initial_c", 0.02, "constant c of the large order statistic lower deviation bound"},
      {"dev_initial_C", 1.0, "constant C in the range u <= 1 - C/log n"},
      {"dev_intermediate_c", 0.5, "constant c of the intermediate lower deviation bound"},
      {"small_ball_c", 0.1, "constant c of the small ball bound"},
      {"small_ball_Cprime", 1.0, "constant C' of the small ball bound"},
      {"negative_K", 6, "admissible range q L <= K log n for negative moments"},
      {"negative_v", 4.0, "constant v_K of the negative moment bound"},
      {"tails_c", 1.0, "constant of E(||G||_p - f_T)^2 <= c n T^-3 exp(-T^2/2)"},
      {"c_A", 0.15, "constant of 1 + log A >= c_A p at T = M(p)"},
      {"C_lower", 8, "p above which the large-p variance lower bound applies"},
      {"pvz_lower_c", 0.25, "floor c/log n of the lower envelope for p >= C log n"},
      {"pvz_lower_C", 3, "C in p >= C log n for the lower envelope floor"},
      {"mc_c_lo", 0.1, "MC variance >= mc_c_lo * lower envelope"},
      {"mc_c_hi", 2.5, "MC variance <= mc_c_hi * upper envelope"},
      {"twop_low_lo", 0.15, "E(|g|^{2p-2} 1{|g|<=M}) / (2p/e)^{p-1}, lower, LOW regime"},
      {"twop_low_hi", 2, "same, upper"},
      {"twop_mid_lo", 0.15, "E(|g|^{2p-2} 1{|g|<=M}) / MID closed form, lower"},
      {"twop_mid_hi", 0.7, "same, upper"},
      {"twop_high_lo", 0.45, "E(|g|^{2p-2} 1{|g|<=M}) / xi^{2p}/(n(xi+p-xi^2)), lower"},
      {"twop_high_hi", 2, "E(|g|^{2p-2} 1{|g|<=M}) / p xi^{2p-2}/(n(xi+p-xi^2)), upper"},
      {"mexpm_high_lo", 0.6, "M^-1 exp(-M^2/2) / ((1/n)(1-(xi^2-xi)/p)), lower"},
      {"mexpm_high_hi", 3.3, "same, upper"},
      {"mc_memory_guard_bytes", 1073741824, "largest per-run sample workspace the CLI accepts"},
  };
  return entries;
}

Constants::Constants() {
  for (const auto& e : schema()) values_.emplace(std::string(e.key), e.default_value);
}

double Constants::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw DomainError("unknown constant: " + std::string(key));
  return it->second;
}

void Constants::set(std::string_view key, double value) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw DomainError("unknown constant: " + std::string(key));
  it->second = value;
}

Constants Constants::parse(std::istream& in, std::string_view origin) {
  Constants c;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = std::string(origin) + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw DomainError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string text = trim(line.substr(eq + 1));
    if (c.values_.find(key) == c.values_.end()) throw DomainError(where + ": unknown key '" + key + "'");
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw DomainError(where + ": bad number '" + text + "'");
    c.values_[key] = value;
  }
  return c;
}

Constants Constants::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open constants file " + path.string());
  return parse(in, path.string());
}

Constants Constants::resolve(const std::string& explicit_path) {
  if (!explicit_path.empty()) return load(explicit_path);
  if (const char* env = std::getenv("LPLAB_CONSTANTS"); env != nullptr && *env != '\0') return load(env);
  return defaults();
}

void Constants::write(std::ostream& out) const {
  std::ostringstream os;
  for (const auto& e : schema()) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, get(e.key));
    os << e.key << " = " << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << "\n";
  }
  out << os.str();
}

}  // namespace lplab
