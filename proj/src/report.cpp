#include "hampack/report.hpp"

#include <charconv>
#include <sstream>

#include "hampack/error.hpp"
#include "json_util.hpp"

namespace hampack {

namespace {

using detail::config_json;
using detail::Json;

PackingConfig config_from_json(const Json& j) {
  PackingConfig c;
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.lambda = j.at("lambda").get<double>();
  c.c = j.at("c").get<double>();
  c.eta = j.at("eta").get<double>();
  c.epsilon = j.at("epsilon").get<std::string>();
  if (const auto& m = j.at("m_override"); !m.is_null()) c.m_override = m.get<std::int64_t>();
  c.expander_c = j.at("expander_c").get<double>();
  c.retry_budget = j.at("retry_budget").get<std::int64_t>();
  c.max_fixed_ends = j.at("max_fixed_ends").get<std::int64_t>();
  c.k_clamping = j.at("k_clamping").get<bool>();
  c.single_round_fallback = j.at("single_round_fallback").get<bool>();
  c.record_timing = j.at("record_timing").get<bool>();
  c.seed = j.at("seed").get<Seed>();
  return c;
}

std::string to_json(const PackingReport& r) {
  Json j;
  j["schema_version"] = r.schema_version;
  j["n"] = r.n;
  j["p"] = r.p;
  j["seed"] = r.seed;
  j["config"] = config_json(r.config);
  j["delta"] = r.delta;
  j["k_target"] = r.k_target;
  j["outcome"] = outcome_name(r.outcome);
  j["cycles"] = Json::array();
  for (const auto& c : r.cycles) j["cycles"].push_back(c);

  Json stages;
  stages["split"] = {{"p1", r.split.p1},
                     {"p2", r.split.p2},
                     {"p3", r.split.p3},
                     {"p4", r.split.p4},
                     {"s_size", r.split.s_size}};
  Json sf = Json::array();
  for (const auto& s : r.shortfalls) {
    sf.push_back({{"stage", s.stage},
                  {"level", s.level},
                  {"pair", s.pair},
                  {"detail", s.detail},
                  {"k_target", s.k_target},
                  {"k_got", s.k_got}});
  }
  stages["factors"] = {{"shortfalls", std::move(sf)}};
  stages["paths"] = {{"counts", r.path_counts}, {"cycles_closed", r.cycles_closed}};
  stages["merge"] = {{"layers_spent", r.layers_spent}, {"booster_counts", r.booster_counts}};
  j["stages"] = std::move(stages);
  j["timing_ms"] = r.timing_ms;
  return j.dump(2) + "\n";
}

PackingReport from_json(std::string_view text) {
  PackingReport r;
  try {
    const Json j = Json::parse(text);
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != PackingReport::kSchemaVersion)
      throw ParseError("unsupported report schema_version " + std::to_string(r.schema_version));
    r.n = j.at("n").get<std::int64_t>();
    r.p = j.at("p").get<double>();
    r.seed = j.at("seed").get<Seed>();
    r.config = config_from_json(j.at("config"));
    r.delta = j.at("delta").get<std::int64_t>();
    r.k_target = j.at("k_target").get<std::int64_t>();
    r.outcome = outcome_from_name(j.at("outcome").get<std::string>());
    r.cycles = j.at("cycles").get<std::vector<std::vector<Vertex>>>();
    const Json& st = j.at("stages");
    const Json& sp = st.at("split");
    r.split.p1 = sp.at("p1").get<double>();
    r.split.p2 = sp.at("p2").get<double>();
    r.split.p3 = sp.at("p3").get<double>();
    r.split.p4 = sp.at("p4").get<double>();
    r.split.s_size = sp.at("s_size").get<std::size_t>();
    for (const Json& s : st.at("factors").at("shortfalls")) {
      r.shortfalls.push_back({s.at("stage").get<std::string>(), s.at("level").get<int>(),
                              s.at("pair").get<int>(), s.at("detail").get<std::string>(),
                              s.at("k_target").get<std::int64_t>(),
                              s.at("k_got").get<std::int64_t>()});
    }
    r.path_counts = st.at("paths").at("counts").get<std::vector<std::size_t>>();
    r.cycles_closed = st.at("paths").at("cycles_closed").get<std::vector<std::size_t>>();
    r.layers_spent = st.at("merge").at("layers_spent").get<std::vector<std::size_t>>();
    r.booster_counts = st.at("merge").at("booster_counts").get<std::vector<std::size_t>>();
    r.timing_ms = j.at("timing_ms").get<double>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return r;
}

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(xs[i]);
  }
  return out;
}

std::string to_text(const PackingReport& r) {
  std::ostringstream o;
  o << "schema_version = " << r.schema_version << '\n'
    << "n = " << r.n << '\n'
    << "p = " << fmt_double(r.p) << '\n'
    << "seed = " << r.seed << '\n';
  std::istringstream cfg(config_to_text(r.config));
  for (std::string line; std::getline(cfg, line);) o << "config." << line << '\n';
  o << "delta = " << r.delta << '\n'
    << "k_target = " << r.k_target << '\n'
    << "outcome = " << outcome_name(r.outcome) << '\n';
  for (const auto& c : r.cycles) o << "cycle = " << join(c) << '\n';
  o << "split.p1 = " << fmt_double(r.split.p1) << '\n'
    << "split.p2 = " << fmt_double(r.split.p2) << '\n'
    << "split.p3 = " << fmt_double(r.split.p3) << '\n'
    << "split.p4 = " << fmt_double(r.split.p4) << '\n'
    << "split.s_size = " << r.split.s_size << '\n';
  for (const auto& s : r.shortfalls) {
    o << "shortfall = " << s.stage << ' ' << s.level << ' ' << s.pair << ' ' << s.k_target << ' '
      << s.k_got << ' ' << s.detail << '\n';
  }
  o << "paths.counts = " << join(r.path_counts) << '\n'
    << "paths.cycles_closed = " << join(r.cycles_closed) << '\n'
    << "merge.layers_spent = " << join(r.layers_spent) << '\n'
    << "merge.booster_counts = " << join(r.booster_counts) << '\n'
    << "timing_ms = " << fmt_double(r.timing_ms) << '\n';
  return o.str();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_num(const std::string& key, std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ParseError("report key '" + key + "': bad number '" + std::string(v) + "'");
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  std::istringstream in(v);
  for (std::string tok; in >> tok;) out.push_back(parse_num<T>(key, tok));
  return out;
}

PackingReport from_text(std::string_view text) {
  PackingReport r;
  std::string config_text;
  bool have_version = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("report line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string val = trim(std::string_view(line).substr(eq + 1));
    if (key.starts_with("config.")) {
      config_text += key.substr(7) + " = " + val + '\n';
    } else if (key == "schema_version") {
      r.schema_version = parse_num<int>(key, val);
      if (r.schema_version != PackingReport::kSchemaVersion)
        throw ParseError("unsupported report schema_version " + val);
      have_version = true;
    } else if (key == "n") {
      r.n = parse_num<std::int64_t>(key, val);
    } else if (key == "p") {
      r.p = parse_num<double>(key, val);
    } else if (key == "seed") {
      r.seed = parse_num<Seed>(key, val);
    } else if (key == "delta") {
      r.delta = parse_num<std::int64_t>(key, val);
    } else if (key == "k_target") {
      r.k_target = parse_num<std::int64_t>(key, val);
    } else if (key == "outcome") {
      r.outcome = outcome_from_name(val);
    } else if (key == "cycle") {
      r.cycles.push_back(parse_list<Vertex>(key, val));
    } else if (key == "split.p1") {
      r.split.p1 = parse_num<double>(key, val);
    } else if (key == "split.p2") {
      r.split.p2 = parse_num<double>(key, val);
    } else if (key == "split.p3") {
      r.split.p3 = parse_num<double>(key, val);
    } else if (key == "split.p4") {
      r.split.p4 = parse_num<double>(key, val);
    } else if (key == "split.s_size") {
      r.split.s_size = parse_num<std::size_t>(key, val);
    } else if (key == "shortfall") {
      std::istringstream s(val);
      Shortfall f;
      if (!(s >> f.stage >> f.level >> f.pair >> f.k_target >> f.k_got))
        throw ParseError("report line " + std::to_string(lineno) + ": bad shortfall");
      s.get();
      std::getline(s, f.detail);
      r.shortfalls.push_back(std::move(f));
    } else if (key == "paths.counts") {
      r.path_counts = parse_list<std::size_t>(key, val);
    } else if (key == "paths.cycles_closed") {
      r.cycles_closed = parse_list<std::size_t>(key, val);
    } else if (key == "merge.layers_spent") {
      r.layers_spent = parse_list<std::size_t>(key, val);
    } else if (key == "merge.booster_counts") {
      r.booster_counts = parse_list<std::size_t>(key, val);
    } else if (key == "timing_ms") {
      r.timing_ms = parse_num<double>(key, val);
    } else {
      throw ParseError("report line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_version) throw ParseError("report: missing schema_version");
  try {
    r.config = parse_config_unchecked(config_text);
  } catch (const ConfigError& e) {
    throw ParseError(std::string("report config: ") + e.what());
  }
  return r;
}

}  // namespace

std::string serialize_report(const PackingReport& r, ReportFormat format) {
  return format == ReportFormat::json ? to_json(r) : to_text(r);
}

PackingReport parse_report(std::string_view text, ReportFormat format) {
  return format == ReportFormat::json ? from_json(text) : from_text(text);
}

}  // namespace hampack
