#include "rearr/io.hpp"

#include <charconv>
#include <fstream>

namespace rearr::io {

namespace {

Json require_object(const Json& doc, const char* what) {
  if (!doc.is_object()) throw SpecParseError(std::string(what) + ": expected a JSON object");
  return doc;
}

Rational rational_field(const Json& j, const std::string& where) {
  if (!j.is_string()) {
    throw SpecParseError("series spec: " + where + " must be a \"p/q\" string");
  }
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw SpecParseError("series spec: bad rational in " + where + ": " + e.what());
  }
}

std::vector<Rational> rational_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SpecParseError("series spec: " + where + " must be an array");
  std::vector<Rational> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(rational_field(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

const char* to_string(ZrHintKind k) {
  switch (k) {
    case ZrHintKind::empty: return "empty";
    case ZrHintKind::singleton: return "singleton";
    case ZrHintKind::reals: return "reals";
  }
  return "?";
}

}  // namespace

SeriesSpec spec_from_json(const Json& doc) {
  require_object(doc, "series spec");
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw SpecParseError("series spec: missing string field \"kind\"");
  }
  const std::string kind = doc["kind"].get<std::string>();

  Json params = Json::object();
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) throw SpecParseError("series spec: \"params\" must be an object");
    params = doc["params"];
  }

  std::optional<bool> leading_zero;
  if (doc.contains("leading_zero")) {
    if (!doc["leading_zero"].is_boolean()) {
      throw SpecParseError("series spec: \"leading_zero\" must be a bool");
    }
    leading_zero = doc["leading_zero"].get<bool>();
  }

  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key != "kind" && key != "params" && key != "leading_zero" && key != "arithmetic") {
      throw SpecParseError("series spec: unknown field \"" + key + "\"");
    }
  }

  if (kind == "square_blocks") {
    return make_square_blocks(leading_zero.value_or(false));
  }

  if (kind == "escalating_blocks") {
    std::vector<Rational> seeds;
    if (params.contains("seed_targets")) seeds = rational_array(params["seed_targets"], "params.seed_targets");
    try {
      return make_escalating_blocks(std::move(seeds), leading_zero.value_or(false));
    } catch (const std::invalid_argument& e) {
      throw SpecParseError(std::string("series spec: ") + e.what());
    }
  }

  if (kind == "explicit_prefix") {
    if (!params.contains("terms")) {
      throw SpecParseError("series spec: explicit_prefix needs params.terms");
    }
    auto terms = rational_array(params["terms"], "params.terms");
    if (terms.empty()) throw SpecParseError("series spec: params.terms must be nonempty");
    return make_explicit_prefix(std::move(terms), leading_zero);
  }

  if (kind == "custom_blocks") {
    if (!params.contains("pattern") || !params["pattern"].is_array() || params["pattern"].empty()) {
      throw SpecParseError("series spec: custom_blocks needs a nonempty params.pattern array");
    }
    std::vector<CustomBlock> pattern;
    for (std::size_t i = 0; i < params["pattern"].size(); ++i) {
      const Json& e = params["pattern"][i];
      const std::string where = "params.pattern[" + std::to_string(i) + "]";
      require_object(e, ("series spec: " + where).c_str());
      CustomBlock b;
      if (!e.contains("sign") || !e["sign"].is_string() ||
          (e["sign"] != "P" && e["sign"] != "N")) {
        throw SpecParseError("series spec: " + where + ".sign must be \"P\" or \"N\"");
      }
      b.positive = e["sign"] == "P";
      if (!e.contains("count") || !e["count"].is_number_unsigned() || e["count"].get<std::uint64_t>() == 0 ||
          e["count"].get<std::uint64_t>() > UINT32_MAX) {
        throw SpecParseError("series spec: " + where + ".count must be a positive integer");
      }
      b.count = static_cast<std::uint32_t>(e["count"].get<std::uint64_t>());
      if (e.contains("scale")) b.scale = rational_field(e["scale"], where + ".scale");
      if (b.scale.sign() <= 0) {
        throw SpecParseError("series spec: " + where + ".scale must be positive");
      }
      pattern.push_back(std::move(b));
    }
    CustomDecay decay = CustomDecay::harmonic;
    if (params.contains("decay")) {
      if (params["decay"] == "harmonic") decay = CustomDecay::harmonic;
      else if (params["decay"] == "none") decay = CustomDecay::none;
      else throw SpecParseError("series spec: params.decay must be \"harmonic\" or \"none\"");
    }
    return make_custom_blocks(std::move(pattern), decay, leading_zero);
  }

  throw SpecParseError("series spec: unknown kind \"" + kind +
                       "\" (want square_blocks|escalating_blocks|explicit_prefix|custom_blocks)");
}

Json spec_to_json(const SeriesSpec& spec) {
  Json j;
  j["kind"] = spec.name();
  Json params = Json::object();
  switch (spec.kind) {
    case SeriesKind::square_blocks:
      break;
    case SeriesKind::escalating_blocks:
      if (!spec.seed_targets.empty()) {
        Json seeds = Json::array();
        for (const auto& t : spec.seed_targets) seeds.push_back(t.str());
        params["seed_targets"] = std::move(seeds);
      }
      break;
    case SeriesKind::explicit_prefix: {
      Json terms = Json::array();
      for (const auto& t : spec.terms) terms.push_back(t.str());
      params["terms"] = std::move(terms);
      break;
    }
    case SeriesKind::custom_blocks: {
      Json pattern = Json::array();
      for (const auto& b : spec.pattern) {
        pattern.push_back(Json{{"sign", b.positive ? "P" : "N"},
                               {"count", b.count},
                               {"scale", b.scale.str()}});
      }
      params["pattern"] = std::move(pattern);
      params["decay"] = spec.decay == CustomDecay::harmonic ? "harmonic" : "none";
      break;
    }
  }
  j["params"] = std::move(params);
  j["leading_zero"] = spec.leading_zero;
  return j;
}

ArithmeticMode arithmetic_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("arithmetic")) return ArithmeticMode::exact;
  if (!doc["arithmetic"].is_string()) {
    throw SpecParseError("series spec: \"arithmetic\" must be \"exact\" or \"float\"");
  }
  try {
    return parse_arithmetic_mode(doc["arithmetic"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SpecParseError(std::string("series spec: ") + e.what());
  }
}

SeriesSpec load_spec_file(const std::string& path, ArithmeticMode* mode_out) {
  std::ifstream in(path);
  if (!in) throw SpecParseError("cannot open spec file: " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecParseError("spec file " + path + ": " + e.what());
  }
  if (mode_out) *mode_out = arithmetic_from_json(doc);
  return spec_from_json(doc);
}

std::string approx_str(const ApproxValue& v) {
  if (v.exact) return v.exact->str();
  return format_double(v.enc.mid());
}

void write_header(std::ostream& os, const std::vector<std::string>& config) {
  for (const auto& line : config) os << "# " << line << '\n';
}

void write_scan_csv(std::ostream& os, const SubstantialReport& rep,
                    const std::vector<std::string>& config) {
  write_header(os, config);
  os << "k,i0,min_window,argmin_i\n";
  for (const auto& c : rep.cells) {
    os << c.k << ',' << c.i0 << ',' << approx_str(c.min_abs) << ',' << c.argmin_i << '\n';
  }
}

Json report_to_json(const SubstantialReport& rep) {
  Json j;
  j["kind"] = to_string(rep.kind);
  j["horizon_blocks"] = rep.horizon_blocks;
  j["k_max"] = rep.k_max;
  j["i0_grid"] = rep.i0_grid;
  j["analytic_st"] = rep.analytic_st ? Json(*rep.analytic_st) : Json(nullptr);

  Json cells = Json::array();
  for (const auto& c : rep.cells) {
    Json jc;
    jc["k"] = c.k;
    jc["i0"] = c.i0;
    jc["min"] = approx_str(c.min_abs);
    jc["argmin_i"] = c.argmin_i;
    Json subs = Json::array();
    for (const auto& m : c.min_at) subs.push_back(m ? Json(approx_str(*m)) : Json(nullptr));
    jc["sub_horizon_minima"] = std::move(subs);
    jc["stable"] = c.stable;
    jc["positive"] = c.positive;
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);

  j["verdict"] = to_string(rep.verdict);
  if (rep.witness) {
    j["witness"] = Json{{"k", rep.witness->k},
                        {"epsilon", approx_str(rep.witness->epsilon)},
                        {"i0", rep.witness->i0}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json scan_report_json(const SubstantialReport& rep_p, const SubstantialReport& rep_n,
                      const ZrHint& hint, bool fixing_evidence, ArithmeticMode run_mode,
                      const Json& series, const std::string& config) {
  Json j;
  j["config"] = config;
  j["series"] = series;
  j["arithmetic"] = rearr::to_string(run_mode);
  j["fixing_evidence"] = fixing_evidence;
  j["P"] = report_to_json(rep_p);
  j["N"] = report_to_json(rep_n);
  j["zr_hint"] = Json{{"kind", to_string(hint.kind)},
                      {"text", hint.text},
                      {"annotation", hint.annotation}};
  return j;
}

namespace detail {

std::vector<std::vector<std::string>> read_csv_rows(std::istream& is, std::size_t columns,
                                                    const char* what) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {  // column-name row
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != columns) {
      throw TraceParseError(std::string(what) + " import: expected " + std::to_string(columns) +
                            " columns, got " + std::to_string(fields.size()) + " in line '" +
                            line + "'");
    }
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw TraceParseError(std::string(what) + " import: no data rows");
  return rows;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw TraceParseError(std::string(what) + ": not a nonnegative integer: '" + s + "'");
  }
  return v;
}

}  // namespace detail

std::vector<std::uint64_t> read_permutation(std::istream& is, bool one_based) {
  std::vector<std::uint64_t> out;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t a = line.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t");
    std::string tok = line.substr(a, b - a + 1);
    if (tok[0] == '#') continue;
    std::uint64_t v = detail::parse_u64(tok, "permutation entry");
    if (one_based) {
      if (v == 0) throw TraceParseError("permutation entry: 0 in a one-based file");
      v -= 1;
    }
    out.push_back(v);
  }
  if (out.empty()) throw TraceParseError("permutation import: no entries");
  return out;
}

}  // namespace rearr::io
