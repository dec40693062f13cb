#pragma once

// Scenario files (strict JSON) and text/CSV/SVG emitters. Everything here is
// deterministic: identical inputs give byte-identical output.

#include "dhwalk/classify.hpp"
#include "dhwalk/errors.hpp"
#include "dhwalk/rigidity.hpp"
#include "dhwalk/scenario.hpp"
#include "dhwalk/walk.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dhwalk {

// ---------------------------------------------------------------------------
// Source positions

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

namespace detail {

inline SourcePos pos_of_offset(std::string_view text, std::size_t offset) {
  SourcePos p{1, 1};
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

/// Start positions of every JSON token except ',' and ':', in order. For
/// syntactically valid input these line up one-to-one with SAX events.
inline std::vector<SourcePos> token_positions(std::string_view text) {
  std::vector<SourcePos> out;
  SourcePos p{1, 1};
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n && i < text.size(); ++j, ++i) {
      if (text[i] == '\n') {
        ++p.line;
        p.column = 1;
      } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
        ++p.column;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ',' || c == ':') {
      advance(1);
    } else if (c == '"') {
      out.push_back(p);
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"') j += text[j] == '\\' ? 2 : 1;
      advance(j + 1 - i);
    } else if (c == '{' || c == '}' || c == '[' || c == ']') {
      out.push_back(p);
      advance(1);
    } else {
      out.push_back(p);
      std::size_t j = i;
      while (j < text.size() && std::string_view(" \t\r\n,:]}").find(text[j]) == std::string_view::npos) ++j;
      advance(j - i);
    }
  }
  return out;
}

/// Records the source position of every value and object key, by JSON pointer.
class PositionRecorder : public nlohmann::json_sax<nlohmann::json> {
 public:
  explicit PositionRecorder(std::vector<SourcePos> tokens) : tokens_(std::move(tokens)) {}

  std::map<std::string, SourcePos> values;
  std::map<std::string, SourcePos> keys;

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }
  bool start_object(std::size_t) override { return open(false); }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(true); }
  bool end_array() override { return close(); }
  bool key(string_t& k) override {
    frames_.back().key = escape(k);
    keys[current()] = next();
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

 private:
  struct Frame {
    bool array;
    std::size_t index = 0;
    std::string key;
  };

  static std::string escape(const std::string& k) {
    std::string out;
    for (char c : k) out += c == '~' ? "~0" : (c == '/' ? "~1" : std::string(1, c));
    return out;
  }

  std::string current() const {
    std::string s;
    for (const auto& f : frames_) s += "/" + (f.array ? std::to_string(f.index) : f.key);
    return s;
  }

  SourcePos next() { return cursor_ < tokens_.size() ? tokens_[cursor_++] : SourcePos{}; }

  void finish_value() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }

  bool scalar() {
    values[current()] = next();
    finish_value();
    return true;
  }

  bool open(bool array) {
    values[current()] = next();
    frames_.push_back({array, 0, {}});
    return true;
  }

  bool close() {
    next();
    frames_.pop_back();
    finish_value();
    return true;
  }

  std::vector<SourcePos> tokens_;
  std::size_t cursor_ = 0;
  std::vector<Frame> frames_;
};

/// Schema walker over a parsed document that reports positions on error.
class ScenarioReader {
 public:
  ScenarioReader(const nlohmann::json& doc, const PositionRecorder& pos) : doc_(doc), pos_(pos) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& what, bool at_key = false) const {
    const auto& table = at_key ? pos_.keys : pos_.values;
    auto it = table.find(pointer);
    const SourcePos p = it != table.end() ? it->second : SourcePos{};
    throw ParseError((pointer.empty() ? std::string("document") : pointer) + ": " + what, p.line, p.column);
  }

  const nlohmann::json& at(const std::string& pointer) const { return doc_.at(nlohmann::json::json_pointer(pointer)); }

  void require_object(const std::string& ptr, const std::set<std::string>& allowed, const std::set<std::string>& required) const {
    const auto& j = at(ptr);
    if (!j.is_object()) fail(ptr, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!allowed.count(it.key())) fail(ptr + "/" + it.key(), "unknown key \"" + it.key() + "\"", true);
    for (const auto& k : required)
      if (!j.contains(k)) fail(ptr, "missing key \"" + k + "\"");
  }

  bool has(const std::string& ptr, const std::string& key) const { return at(ptr).contains(key); }

  std::int64_t integer(const std::string& ptr) const {
    const auto& j = at(ptr);
    if (!j.is_number_integer()) fail(ptr, "expected an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
      fail(ptr, "integer out of range");
    return j.get<std::int64_t>();
  }

  int small_int(const std::string& ptr) const {
    const auto v = integer(ptr);
    if (v < -1000000 || v > 1000000) fail(ptr, "integer out of range");
    return static_cast<int>(v);
  }

  std::string string(const std::string& ptr) const {
    const auto& j = at(ptr);
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
  }

  bool boolean(const std::string& ptr) const {
    const auto& j = at(ptr);
    if (!j.is_boolean()) fail(ptr, "expected true or false");
    return j.get<bool>();
  }

  /// Integer, or a string "p" / "p/q".
  Rational rational(const std::string& ptr) const {
    const auto& j = at(ptr);
    if (j.is_number_integer()) return Rational(integer(ptr));
    if (j.is_number_float()) fail(ptr, "inexact number; write rationals as strings like \"7/2\"");
    if (!j.is_string()) fail(ptr, "expected a rational (integer or \"p/q\" string)");
    const auto text = j.get<std::string>();
    auto q = parse_rational(text);
    if (!q) fail(ptr, "malformed rational \"" + text + "\"");
    return *q;
  }

  std::size_t array_size(const std::string& ptr) const {
    const auto& j = at(ptr);
    if (!j.is_array()) fail(ptr, "expected an array");
    return j.size();
  }

  LatticeClass int_class(const std::string& ptr) const {
    const std::size_t n = array_size(ptr);
    if (n == 0) fail(ptr, "class must have at least one coordinate");
    LatticeClass c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = integer(ptr + "/" + std::to_string(i));
    return c;
  }

  RationalClass rational_class(const std::string& ptr) const {
    const std::size_t n = array_size(ptr);
    if (n == 0) fail(ptr, "class must have at least one coordinate");
    RationalClass c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = rational(ptr + "/" + std::to_string(i));
    return c;
  }

  IntMatrix matrix(const std::string& ptr) const {
    const std::size_t n = array_size(ptr);
    IntMatrix m;
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = int_class(ptr + "/" + std::to_string(i));
      if (row.size() != n) fail(ptr + "/" + std::to_string(i), "gram matrix must be square");
      m.emplace_back(row.begin(), row.end());
    }
    return m;
  }

 private:
  const nlohmann::json& doc_;
  const PositionRecorder& pos_;
};

inline FixedComponent read_component(const ScenarioReader& r, const std::string& ptr) {
  r.require_object(ptr,
                   {"kind", "index", "genus", "reduced_class", "normal_split", "normal_euler", "gram", "symplectic_class",
                    "normal_euler_class"},
                   {"kind", "index"});
  FixedComponent c;
  const auto kind = r.string(ptr + "/kind");
  if (kind == "point") c.kind = ComponentKind::point;
  else if (kind == "surface") c.kind = ComponentKind::surface;
  else if (kind == "fourfold") c.kind = ComponentKind::fourfold;
  else r.fail(ptr + "/kind", "kind must be \"point\", \"surface\" or \"fourfold\"");
  c.index = r.small_int(ptr + "/index");
  if (r.has(ptr, "normal_split")) {
    if (r.array_size(ptr + "/normal_split") != 2) r.fail(ptr + "/normal_split", "normal_split is [negative, positive]");
    c.normal_split = {r.small_int(ptr + "/normal_split/0"), r.small_int(ptr + "/normal_split/1")};
  } else {
    const int neg = c.index / 2;
    c.normal_split = {neg, complex_codimension(c.kind) - neg};
  }
  if (r.has(ptr, "genus")) c.genus = r.small_int(ptr + "/genus");
  if (r.has(ptr, "reduced_class")) c.reduced_class = r.int_class(ptr + "/reduced_class");
  if (r.has(ptr, "normal_euler")) c.normal_euler = r.small_int(ptr + "/normal_euler");
  if (r.has(ptr, "gram")) c.gram = r.matrix(ptr + "/gram");
  if (r.has(ptr, "symplectic_class")) c.symplectic_class = r.rational_class(ptr + "/symplectic_class");
  if (r.has(ptr, "normal_euler_class")) c.normal_euler_class = r.int_class(ptr + "/normal_euler_class");
  if (c.gram) {
    try {
      (void)IntersectionLattice::general(*c.gram);
    } catch (const Error& e) {
      r.fail(ptr + "/gram", e.what());
    }
  }
  return c;
}

inline CriticalDatum read_level(const ScenarioReader& r, const std::string& ptr) {
  r.require_object(ptr, {"value", "components", "euler_minus", "lattice", "simple"}, {"value", "components"});
  CriticalDatum level;
  level.value = r.rational(ptr + "/value");
  const std::size_t n = r.array_size(ptr + "/components");
  for (std::size_t i = 0; i < n; ++i) level.components.push_back(read_component(r, ptr + "/components/" + std::to_string(i)));
  if (r.has(ptr, "lattice")) {
    const auto b = r.string(ptr + "/lattice");
    if (b == "blowup") level.basis = LevelBasis::blowup;
    else if (b == "product") level.basis = LevelBasis::product;
    else r.fail(ptr + "/lattice", "lattice must be \"blowup\" or \"product\"");
  }
  if (r.has(ptr, "euler_minus")) {
    level.euler_minus = r.int_class(ptr + "/euler_minus");
    if (level.basis == LevelBasis::product && level.euler_minus->size() != 2)
      r.fail(ptr + "/euler_minus", "product basis classes have 2 coordinates");
  }
  if (r.has(ptr, "simple")) level.declared_simple = r.boolean(ptr + "/simple");
  return level;
}

}  // namespace detail

/// Parses a scenario file. Throws ParseError (with line and column when the
/// offending token is known) on syntax or schema errors.
inline FixedPointData parse_scenario(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto p = detail::pos_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    if (auto k = msg.find("syntax error"); k != std::string::npos) msg = msg.substr(k);
    throw ParseError("invalid JSON: " + msg, p.line, p.column);
  }
  detail::PositionRecorder rec(detail::token_positions(text));
  nlohmann::json::sax_parse(text.begin(), text.end(), &rec);
  const detail::ScenarioReader r(doc, rec);
  r.require_object("", {"name", "dim", "mode", "levels"}, {"dim", "mode", "levels"});
  const std::string name = r.has("", "name") ? r.string("/name") : std::string();
  const int dim = r.small_int("/dim");
  const auto mode_text = r.string("/mode");
  DataMode mode = DataMode::full;
  if (mode_text == "small") mode = DataMode::small;
  else if (mode_text != "full") r.fail("/mode", "mode must be \"full\" or \"small\"");
  FixedPointData data(name, mode, dim);
  const std::size_t n = r.array_size("/levels");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string ptr = "/levels/" + std::to_string(i);
    auto level = detail::read_level(r, ptr);
    if (mode == DataMode::small && level.euler_minus) r.fail(ptr + "/euler_minus", "small-mode data cannot carry euler_minus", true);
    data.append_level(std::move(level));
  }
  return data;
}

inline FixedPointData load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

inline std::string serialize_scenario(const FixedPointData& data) {
  using ojson = nlohmann::ordered_json;
  auto int_array = [](const LatticeClass& c) {
    ojson a = ojson::array();
    for (auto x : c) a.push_back(x);
    return a;
  };
  ojson doc;
  doc["name"] = data.name();
  doc["dim"] = data.dim();
  doc["mode"] = to_string(data.mode());
  doc["levels"] = ojson::array();
  for (const auto& level : data.levels()) {
    ojson l;
    l["value"] = to_string(level.value);
    l["components"] = ojson::array();
    for (const auto& c : level.components) {
      ojson j;
      j["kind"] = to_string(c.kind);
      j["index"] = c.index;
      if (c.genus) j["genus"] = *c.genus;
      if (c.reduced_class) j["reduced_class"] = int_array(*c.reduced_class);
      j["normal_split"] = {c.normal_split.negative, c.normal_split.positive};
      if (c.normal_euler) j["normal_euler"] = *c.normal_euler;
      if (c.gram) {
        ojson g = ojson::array();
        for (const auto& row : *c.gram) g.push_back(row);
        j["gram"] = g;
      }
      if (c.symplectic_class) {
        ojson s = ojson::array();
        for (const auto& x : *c.symplectic_class) s.push_back(to_string(x));
        j["symplectic_class"] = s;
      }
      if (c.normal_euler_class) j["normal_euler_class"] = int_array(*c.normal_euler_class);
      l["components"].push_back(j);
    }
    if (level.euler_minus) l["euler_minus"] = int_array(*level.euler_minus);
    if (level.basis == LevelBasis::product) l["lattice"] = "product";
    if (level.declared_simple) l["simple"] = *level.declared_simple;
    doc["levels"].push_back(l);
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Reports

inline std::string validation_text(const ValidationReport& report, const std::optional<IsolatedValueCheck>& isolated = {}) {
  std::string out;
  if (report.ok()) out += "structure: ok\n";
  for (const auto& i : report.issues) out += "structure: " + i.code + ": " + i.message + "\n";
  if (isolated) {
    out += std::string("isolated value check: ") + to_string(isolated->status);
    if (isolated->lambdas)
      out += " (l1,l2,l3) = (" + to_string((*isolated->lambdas)[0]) + "," + to_string((*isolated->lambdas)[1]) + "," +
             to_string((*isolated->lambdas)[2]) + ")";
    out += "\n";
    for (const auto& i : isolated->report.issues)
      if (i.code != "not-applicable") out += "isolated: " + i.code + ": " + i.message + "\n";
  }
  return out;
}

/// Areas of the distinguished classes of a state: L and the exceptional
/// classes on CP2#k, the rulings on S2xS2, the basis otherwise.
inline std::vector<std::pair<std::string, AffineFunction>> area_table(const WalkState& s) {
  const auto& lat = s.lattice();
  std::vector<LatticeClass> classes;
  if (lat.kind() == LatticeKind::product) {
    classes = ruling_classes(lat);
  } else if (lat.kind() == LatticeKind::blowup_plane) {
    classes.push_back(lat.basis(0));
    for (auto& c : exceptional_classes(lat).classes) classes.push_back(std::move(c));
  } else {
    for (std::size_t i = 0; i < lat.rank(); ++i) classes.push_back(lat.basis(i));
  }
  std::vector<std::pair<std::string, AffineFunction>> out;
  for (const auto& c : classes) out.emplace_back(format_class(lat, c), s.family.area_function(c));
  return out;
}

inline std::string area_list(const WalkState& s) {
  std::string out;
  for (const auto& [label, f] : area_table(s)) out += (out.empty() ? "" : ";") + label + "=" + f.to_string();
  return out;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace detail

inline std::string trace_csv(const WalkTrace& trace) {
  std::string out = "interval_lo,interval_hi,k,exc_areas,euler_fingerprint,volume_poly,rigidity_status\n";
  for (const auto& iv : trace.intervals) {
    out += to_string(iv.lo) + "," + to_string(iv.hi) + "," + std::to_string(iv.k()) + "," +
           detail::csv_field(area_list(iv.state)) + "," + detail::csv_field(iv.fp.euler.to_string()) + "," +
           detail::csv_field(iv.volume.to_string()) + "," + to_string(iv.rigidity.status) + "\n";
  }
  return out;
}

inline std::string trace_text(const WalkTrace& trace) {
  std::ostringstream out;
  out << "scenario: " << (trace.scenario.empty() ? "(unnamed)" : trace.scenario) << "\n";
  std::size_t e = 0;
  for (const auto& iv : trace.intervals) {
    out << "interval (" << to_string(iv.lo) << ", " << to_string(iv.hi) << ")  k=" << iv.k() << "  "
        << iv.state.lattice().name() << "\n";
    out << "  areas:    " << area_list(iv.state) << "\n";
    out << "  euler:    " << format_class(iv.state.lattice(), iv.state.euler.cls) << "  [" << iv.fp.euler.to_string() << "]\n";
    out << "  volume:   " << iv.volume.to_string() << "\n";
    out << "  rigidity: " << to_string(iv.rigidity.status);
    if (!iv.rigidity.fact_id.empty()) out << " (" << iv.rigidity.fact_id << ")";
    out << "\n";
    if (e < trace.events.size() && trace.events[e].value == iv.hi) {
      const auto& ev = trace.events[e++];
      out << "wall " << to_string(ev.value) << ":";
      for (const auto& a : ev.actions) {
        out << " " << a.describe();
        if (a.kind == ActionKind::blow_down) out << " [e.C=" << a.euler_pairing << "]";
        if (&a != &ev.actions.back()) out << ",";
      }
      out << "\n";
    }
  }
  if (trace.final_report) {
    out << "maximum " << to_string(trace.final_report->value) << ": " << (trace.final_report->pass ? "pass" : "fail") << "\n";
    for (const auto& f : trace.final_report->failures) out << "  " << f << "\n";
  }
  const auto c = certify(trace);
  out << "certification: " << to_string(c.level) << " (weakest " << to_string(c.weakest) << ")\n";
  if (!c.reason.empty()) out << "  " << c.reason << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// DH profile

struct ProfileSample {
  Rational t;
  Rational volume;
  int k;
};

/// N equally spaced samples over [min, max], both ends included.
inline std::vector<ProfileSample> dh_profile(const WalkTrace& trace, std::size_t samples) {
  if (samples < 2) throw PreconditionError("need at least 2 samples");
  const Rational a = trace.start(), b = trace.end();
  std::vector<ProfileSample> out;
  for (std::size_t i = 0; i < samples; ++i) {
    const Rational t = a + (b - a) * Rational(static_cast<std::int64_t>(i)) / Rational(static_cast<std::int64_t>(samples - 1));
    const auto& iv = trace.interval_at(t);
    out.push_back({t, iv.volume(t), iv.k()});
  }
  return out;
}

inline std::string profile_csv(const std::vector<ProfileSample>& s) {
  std::string out = "t,volume,k\n";
  for (const auto& p : s) out += to_string(p.t) + "," + to_string(p.volume) + "," + std::to_string(p.k) + "\n";
  return out;
}

inline std::string profile_text(const std::vector<ProfileSample>& s) {
  std::ostringstream out;
  char buf[96];
  out << "         t        volume  k\n";
  for (const auto& p : s) {
    std::snprintf(buf, sizeof buf, "%10.4f  %12.6f  %d\n", to_double(p.t), to_double(p.volume), p.k);
    out << buf;
  }
  return out.str();
}

inline std::string profile_svg(const WalkTrace& trace, const std::vector<ProfileSample>& s) {
  const double W = 640, H = 400, m = 48;
  const double t0 = to_double(trace.start()), t1 = to_double(trace.end());
  double vmax = 0;
  for (const auto& p : s) vmax = std::max(vmax, to_double(p.volume));
  if (vmax <= 0) vmax = 1;
  auto fmt = [](double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", x);
    return std::string(b);
  };
  auto X = [&](double t) { return fmt(m + (t - t0) / (t1 - t0) * (W - 2 * m)); };
  auto Y = [&](double v) { return fmt(H - m - v / vmax * (H - 2 * m)); };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << " " << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m << "\" y2=\"" << H - m << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m << "\" stroke=\"black\"/>\n";
  for (const auto& w : trace.walls()) {
    const double t = to_double(w);
    out << "<line x1=\"" << X(t) << "\" y1=\"" << m << "\" x2=\"" << X(t) << "\" y2=\"" << H - m
        << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    out << "<text x=\"" << X(t) << "\" y=\"" << H - m + 16 << "\" font-size=\"11\" text-anchor=\"middle\">" << to_string(w)
        << "</text>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << X(to_double(s[i].t)) << "," << Y(to_double(s[i].volume));
  out << "\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\" font-size=\"12\" text-anchor=\"middle\">t</text>\n";
  out << "<text x=\"14\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << H / 2
      << ")\" text-anchor=\"middle\">volume</text>\n";
  out << "<text x=\"" << m << "\" y=\"" << m - 12 << "\" font-size=\"12\">" << trace.scenario << " (max volume "
      << fmt(vmax) << ")</text>\n";
  out << "</svg>\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Certificates, facts, classes

inline std::string certificate_text(const ClassificationResult& r) {
  std::ostringstream out;
  if (!r.ok()) {
    const auto& f = *r.refusal;
    out << "refusal: " << f.check << "\n  " << f.reason << "\n";
    if (f.wall) out << "  wall: " << *f.wall << "\n";
    return out.str();
  }
  const auto& c = *r.certificate;
  out << "certificate: " << c.statement() << "\n";
  if (!c.scenario.empty()) out << "scenario: " << c.scenario << "\n";
  out << "walls:";
  for (const auto& w : c.trace.walls()) out << " " << to_string(w);
  out << "\nk-sequence:";
  for (int k : c.trace.k_sequence()) out << " " << k;
  out << "\nmaximum: " << to_string(c.trace.end()) << "\n";
  out << "certification: " << to_string(c.certification.level) << " (weakest " << to_string(c.certification.weakest)
      << ")\n";
  out << "citations:\n";
  for (const auto& cit : c.citations) out << "  " << cit << "\n";
  return out.str();
}

inline std::string weak_text(const WeakClassification& w) {
  std::string out = std::string("verdict: ") + to_string(w.verdict) + "\n";
  if (!w.reason.empty()) out += "  " + w.reason + "\n";
  return out;
}

inline std::string facts_table() {
  std::ostringstream out;
  for (const auto& f : rigidity_facts()) {
    out << f.id << "\n";
    out << "  space:      " << f.space << "\n";
    out << "  pattern:    " << f.pattern << "\n";
    out << "  status:     " << to_string(f.status) << "\n";
    out << "  uniqueness: " << (f.uniqueness_known ? "known" : "not known") << "\n";
    out << "  citation:   " << f.citation << "\n";
  }
  return out.str();
}

inline std::string exceptional_text(int k) {
  const auto set = exceptional_classes(k);
  const auto lat = IntersectionLattice::blowup_plane(k);
  std::ostringstream out;
  out << "exceptional classes of " << lat.name() << ": " << set.classes.size() << " ("
      << (set.certified ? "certified" : "uncertified") << ")\n";
  for (const auto& c : set.classes) out << format_class(lat, c) << "\n";
  return out.str();
}

}  // namespace dhwalk
