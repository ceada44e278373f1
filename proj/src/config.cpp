#include "lagflow/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lagflow {

namespace {

using nlohmann::json;

int line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first occurrence of "key" at or after `from`; 0 if absent.
int line_of_key(std::string_view text, const std::string& key, std::size_t from = 0) {
  const std::string quoted = "\"" + key + "\"";
  const std::size_t pos = text.find(quoted, from);
  return pos == std::string_view::npos ? 0 : line_at(text, pos);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg, std::size_t from = 0) const {
    throw ConfigError(line_of_key(text_, key, from), msg);
  }

  void expect_keys(const json& obj, const std::set<std::string>& allowed, const std::set<std::string>& required,
                   const std::string& where, std::size_t from = 0) const {
    if (!obj.is_object()) fail(where, where + " must be a JSON object", from);
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) fail(key, "unknown key \"" + key + "\" in " + where, from);
    }
    for (const auto& key : required) {
      if (!obj.contains(key)) throw ConfigError(line_of_key(text_, where, from), "missing key \"" + key + "\" in " + where);
    }
  }

  int integer(const json& obj, const std::string& key, std::size_t from = 0) const {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(key, "\"" + key + "\" must be an integer", from);
    return v.get<int>();
  }

  double real(const json& obj, const std::string& key, std::size_t from = 0) const {
    const json& v = obj.at(key);
    if (!v.is_number()) fail(key, "\"" + key + "\" must be a number", from);
    return v.get<double>();
  }

  std::string string(const json& obj, const std::string& key, std::size_t from = 0) const {
    const json& v = obj.at(key);
    if (!v.is_string()) fail(key, "\"" + key + "\" must be a string", from);
    return v.get<std::string>();
  }

  std::size_t offset_of(const std::string& key, std::size_t from = 0) const {
    const std::size_t pos = text_.find("\"" + key + "\"", from);
    return pos == std::string_view::npos ? from : pos;
  }

 private:
  std::string_view text_;
};

Shear parse_shear(const Reader& rd, const json& obj, std::size_t from) {
  rd.expect_keys(obj, {"axis", "amplitude", "profile"}, {"axis", "amplitude", "profile"}, "shear", from);
  Shear s;
  const std::string axis = rd.string(obj, "axis", from);
  if (axis == "x") {
    s.axis = ShearAxis::X;
  } else if (axis == "y") {
    s.axis = ShearAxis::Y;
  } else {
    rd.fail("axis", "shear axis must be \"x\" or \"y\"", from);
  }
  s.amplitude = rd.real(obj, "amplitude", from);
  const json& profile = obj.at("profile");
  if (!profile.is_array()) rd.fail("profile", "\"profile\" must be an array", from);
  std::size_t cursor = rd.offset_of("profile", from);
  for (const json& term : profile) {
    rd.expect_keys(term, {"k", "cos", "sin"}, {"k"}, "profile term", cursor);
    TrigTerm t;
    t.k = rd.integer(term, "k", cursor);
    if (t.k < 0) rd.fail("k", "profile wavenumber must be nonnegative", cursor);
    if (term.contains("cos")) t.cos_coef = rd.real(term, "cos", cursor);
    if (term.contains("sin")) t.sin_coef = rd.real(term, "sin", cursor);
    s.profile.terms.push_back(t);
    cursor = rd.offset_of("k", cursor) + 1;
  }
  return s;
}

InitialData parse_initial(const Reader& rd, const json& obj) {
  const std::size_t from = rd.offset_of("initial");
  rd.expect_keys(obj, {"shears", "linear", "snapshot"}, {}, "initial", from);
  InitialData init;
  if (obj.contains("snapshot")) {
    if (obj.contains("shears") || obj.contains("linear")) {
      rd.fail("snapshot", "\"initial\" takes either \"snapshot\" or \"shears\", not both", from);
    }
    init.snapshot = rd.string(obj, "snapshot", from);
    return init;
  }
  if (!obj.contains("shears")) rd.fail("initial", "\"initial\" needs \"shears\" or \"snapshot\"");
  const json& shears = obj.at("shears");
  if (!shears.is_array()) rd.fail("shears", "\"shears\" must be an array", from);
  std::size_t cursor = rd.offset_of("shears", from);
  for (const json& s : shears) {
    init.shears.shears.push_back(parse_shear(rd, s, cursor));
    cursor = rd.offset_of("axis", cursor) + 1;
  }
  if (obj.contains("linear")) {
    const json& m = obj.at("linear");
    const bool ok = m.is_array() && m.size() == 2 && m[0].is_array() && m[1].is_array() && m[0].size() == 2 &&
                    m[1].size() == 2 && m[0][0].is_number_integer() && m[0][1].is_number_integer() &&
                    m[1][0].is_number_integer() && m[1][1].is_number_integer();
    if (!ok) rd.fail("linear", "\"linear\" must be a 2x2 integer matrix", from);
    init.linear = {m[0][0].get<int>(), m[0][1].get<int>(), m[1][0].get<int>(), m[1][1].get<int>()};
    if (init.linear.det() != 1) rd.fail("linear", "\"linear\" must have determinant 1", from);
  }
  return init;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(line_at(text, e.byte > 0 ? e.byte - 1 : 0), std::string("malformed JSON: ") + e.what());
  }

  const Reader rd(text);
  const std::set<std::string> keys{"n",          "sigma",          "t_end",          "c",   "initial", "out_dir",
                                   "diag_every", "snapshot_every", "residual_every", "seed"};
  if (!doc.is_object()) throw ConfigError(1, "config must be a JSON object");
  rd.expect_keys(doc, keys, keys, "config");

  RunConfig cfg;
  cfg.n = rd.integer(doc, "n");
  if (cfg.n < 8 || cfg.n % 2 != 0) rd.fail("n", "\"n\" must be even and >= 8");
  cfg.sigma = rd.real(doc, "sigma");
  if (!(cfg.sigma > 0.0) || cfg.sigma > 0.5) rd.fail("sigma", "\"sigma\" must lie in (0, 0.5]");
  cfg.t_end = rd.real(doc, "t_end");
  if (!(cfg.t_end >= 0.0)) rd.fail("t_end", "\"t_end\" must be >= 0");
  cfg.c = rd.integer(doc, "c");
  if (cfg.c < -1 || cfg.c > 1) rd.fail("c", "\"c\" must be -1, 0 or 1");
  cfg.initial = parse_initial(rd, doc.at("initial"));
  cfg.out_dir = rd.string(doc, "out_dir");
  cfg.diag_every = rd.integer(doc, "diag_every");
  if (cfg.diag_every < 1) rd.fail("diag_every", "\"diag_every\" must be >= 1");
  cfg.snapshot_every = rd.integer(doc, "snapshot_every");
  if (cfg.snapshot_every < 0) rd.fail("snapshot_every", "\"snapshot_every\" must be >= 0");
  cfg.residual_every = rd.integer(doc, "residual_every");
  if (cfg.residual_every < 0) rd.fail("residual_every", "\"residual_every\" must be >= 0");
  const json& seed = doc.at("seed");
  if (!seed.is_number_unsigned()) {
    rd.fail("seed", "\"seed\" must be a nonnegative integer");
  }
  cfg.seed = seed.get<std::uint64_t>();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void require_flow_config(const RunConfig& cfg) {
  if (cfg.c != 0) {
    throw ConfigError(0,
                      "flow runs are implemented for the flat torus only (c = 0); c = -1 and c = 1 need a curved "
                      "ambient geometry and are available in the pointwise `verify` suites");
  }
}

TorusMap initial_map(const RunConfig& cfg) {
  TorusMap m = make_shear_composition(cfg.initial.shears, cfg.n);
  return TorusMap(cfg.initial.linear, m.u1(), m.u2());
}

}  // namespace lagflow
