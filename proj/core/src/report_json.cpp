#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"

#include "rngaudit/errors.hpp"
#include "rngaudit/report.hpp"

namespace rngaudit {

using Json = nlohmann::ordered_json;

// --- writers -------------------------------------------------------------------

namespace {

template <typename T>
void put_opt(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_opt(const Json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return j.at(key).get<T>();
}

Json entropy_json(const Entropy& e) { return Json{{"value", e.value}, {"deficit", e.deficit}}; }
Entropy entropy_from(const Json& j) { return {j.at("value").get<double>(), j.at("deficit").get<double>()}; }

Json tuples_json(const TupleCounts& t) {
  return Json{{"mode", std::string(to_string(t.mode))}, {"c00", t.c00}, {"c01", t.c01}, {"c10", t.c10}, {"c11", t.c11}};
}

TupleMode tuple_mode_from(const std::string& s) {
  if (s == "overlapping") return TupleMode::overlapping;
  if (s == "disjoint") return TupleMode::disjoint;
  if (s == "cyclic") return TupleMode::cyclic;
  throw FormatError("unknown tuple mode '" + s + "'", 0);
}

TupleCounts tuples_from(const Json& j) {
  return {tuple_mode_from(j.at("mode").get<std::string>()), j.at("c00").get<std::uint64_t>(),
          j.at("c01").get<std::uint64_t>(), j.at("c10").get<std::uint64_t>(), j.at("c11").get<std::uint64_t>()};
}

Json config_json(const AuditConfig& c) {
  Json j;
  j["input_name"] = c.input_name;
  put_opt(j, "timestamp", c.timestamp);
  j["run_stats"] = c.run_stats;
  j["run_entropy"] = c.run_entropy;
  j["run_feller"] = c.run_feller;
  j["block_sizes"] = c.block_sizes;
  j["max_lag"] = c.max_lag;
  j["borel_ms"] = c.borel_ms;
  j["patterns"] = c.patterns;
  j["feller"] = Json{{"window", c.feller.window},
                     {"k_min", c.feller.k_min},
                     {"k_max", c.feller.k_max},
                     {"mode", std::string(to_string(c.feller.mode))},
                     {"threads", c.feller.threads}};
  j["threshold_sigma"] = c.threshold_sigma;
  j["bound_sigmas"] = c.bound_sigmas;
  j["epsilon"] = c.epsilon;
  j["threads"] = c.threads;
  return j;
}

AuditConfig config_from(const Json& j) {
  AuditConfig c;
  c.input_name = j.at("input_name").get<std::string>();
  c.timestamp = get_opt<std::string>(j, "timestamp");
  c.run_stats = j.at("run_stats").get<bool>();
  c.run_entropy = j.at("run_entropy").get<bool>();
  c.run_feller = j.at("run_feller").get<bool>();
  c.block_sizes = j.at("block_sizes").get<std::vector<std::uint64_t>>();
  c.max_lag = j.at("max_lag").get<std::size_t>();
  c.borel_ms = j.at("borel_ms").get<std::vector<unsigned>>();
  c.patterns = j.at("patterns").get<std::vector<std::string>>();
  const auto& f = j.at("feller");
  c.feller.window = f.at("window").get<std::uint64_t>();
  c.feller.k_min = f.at("k_min").get<unsigned>();
  c.feller.k_max = f.at("k_max").get<unsigned>();
  c.feller.mode = parse_run_mode(f.at("mode").get<std::string>());
  c.feller.threads = f.at("threads").get<unsigned>();
  c.threshold_sigma = j.at("threshold_sigma").get<double>();
  c.bound_sigmas = j.at("bound_sigmas").get<std::vector<double>>();
  c.epsilon = j.at("epsilon").get<double>();
  c.threads = j.at("threads").get<unsigned>();
  return c;
}

Json flag_json(const AnomalyFlag& f) {
  return Json{{"statistic", f.statistic},
              {"observed", f.observed},
              {"expected", f.expected},
              {"sigma_distance", f.sigma_distance},
              {"threshold_sigma", f.threshold_sigma}};
}

AnomalyFlag flag_from(const Json& j) {
  return {j.at("statistic").get<std::string>(), j.at("observed").get<double>(), j.at("expected").get<double>(),
          j.at("sigma_distance").get<double>(), j.at("threshold_sigma").get<double>()};
}

Json feller_row_json(const FellerRow& r) {
  Json j{{"k", r.k}, {"alpha_ideal", r.alpha_ideal}};
  put_opt(j, "alpha_extracted", r.alpha_extracted);
  put_opt(j, "relative_change", r.relative_change);
  put_opt(j, "relative_std_error", r.relative_std_error);
  j["windows"] = r.windows_scanned;
  j["no_run_windows"] = r.no_run_windows;
  return j;
}

FellerRow feller_row_from(const Json& j) {
  FellerRow r;
  r.k = j.at("k").get<unsigned>();
  r.alpha_ideal = j.at("alpha_ideal").get<double>();
  r.alpha_extracted = get_opt<double>(j, "alpha_extracted");
  r.relative_change = get_opt<double>(j, "relative_change");
  r.relative_std_error = get_opt<double>(j, "relative_std_error");
  r.windows_scanned = j.at("windows").get<std::uint64_t>();
  r.no_run_windows = j.at("no_run_windows").get<std::uint64_t>();
  return r;
}

EntropyKind kind_from(const std::string& s) { return parse_entropy_kind(s); }

BoundVariant variant_from(const std::string& s) {
  if (s == "one_flip_envelope") return BoundVariant::one_flip_envelope;
  if (s == "m_sigma_bound") return BoundVariant::m_sigma_bound;
  throw FormatError("unknown bound variant '" + s + "'", 0);
}

Json entropy_section_json(const EntropySection& e) {
  Json j;
  j["full_set"] = Json{{"shannon_uncond", entropy_json(e.full_shannon_uncond)},
                       {"shannon_cond", entropy_json(e.full_shannon_cond)},
                       {"min_cond", entropy_json(e.full_min_cond)}};
  j["epsilon"] = Json{{"epsilon", e.epsilon}, {"m_sigma", e.epsilon_sigma}};
  Json sizes = Json::array();
  for (const auto& s : e.sizes) {
    Json js{{"block_size", s.block_size},
            {"blocks", s.blocks},
            {"perfect", s.perfect},
            {"degenerate", s.degenerate},
            {"mean_shannon_cond", s.mean_shannon_cond},
            {"mean_min_cond", s.mean_min_cond},
            {"mean_deficit_shannon_cond", s.mean_deficit_shannon_cond},
            {"mean_deficit_min_cond", s.mean_deficit_min_cond},
            {"max_deficit_shannon_cond", s.max_deficit_shannon_cond},
            {"max_deficit_min_cond", s.max_deficit_min_cond}};
    put_opt(js, "envelope_shannon_cond", s.envelope_shannon_cond);
    put_opt(js, "envelope_min_cond", s.envelope_min_cond);
    js["forbidden_region_violations"] = s.forbidden_region_violations;
    Json bounds = Json::array();
    for (const auto& b : s.bounds) {
      Json jb{{"m_sigma", b.m_sigma}};
      put_opt(jb, "shannon_bound", b.shannon_bound);
      put_opt(jb, "min_bound", b.min_bound);
      jb["shannon_exceeding"] = b.shannon_exceeding;
      jb["min_exceeding"] = b.min_exceeding;
      bounds.push_back(std::move(jb));
    }
    js["bounds"] = std::move(bounds);
    sizes.push_back(std::move(js));
  }
  j["sizes"] = std::move(sizes);
  Json curves = Json::array();
  for (const auto& c : e.curves) {
    Json pts = Json::array();
    for (const auto& p : c.points) pts.push_back(Json{{"n", p.n}, {"deficit", p.deficit}});
    curves.push_back(Json{{"kind", std::string(to_string(c.kind))},
                          {"variant", std::string(to_string(c.variant))},
                          {"m_sigma", c.m_sigma},
                          {"points", std::move(pts)}});
  }
  j["curves"] = std::move(curves);
  return j;
}

EntropySection entropy_section_from(const Json& j) {
  EntropySection e;
  const auto& fs = j.at("full_set");
  e.full_shannon_uncond = entropy_from(fs.at("shannon_uncond"));
  e.full_shannon_cond = entropy_from(fs.at("shannon_cond"));
  e.full_min_cond = entropy_from(fs.at("min_cond"));
  e.epsilon = j.at("epsilon").at("epsilon").get<double>();
  e.epsilon_sigma = j.at("epsilon").at("m_sigma").get<double>();
  for (const auto& js : j.at("sizes")) {
    EntropySizeSummary s;
    s.block_size = js.at("block_size").get<std::uint64_t>();
    s.blocks = js.at("blocks").get<std::uint64_t>();
    s.perfect = js.at("perfect").get<std::uint64_t>();
    s.degenerate = js.at("degenerate").get<std::uint64_t>();
    s.mean_shannon_cond = js.at("mean_shannon_cond").get<double>();
    s.mean_min_cond = js.at("mean_min_cond").get<double>();
    s.mean_deficit_shannon_cond = js.at("mean_deficit_shannon_cond").get<double>();
    s.mean_deficit_min_cond = js.at("mean_deficit_min_cond").get<double>();
    s.max_deficit_shannon_cond = js.at("max_deficit_shannon_cond").get<double>();
    s.max_deficit_min_cond = js.at("max_deficit_min_cond").get<double>();
    s.envelope_shannon_cond = get_opt<double>(js, "envelope_shannon_cond");
    s.envelope_min_cond = get_opt<double>(js, "envelope_min_cond");
    s.forbidden_region_violations = js.at("forbidden_region_violations").get<std::uint64_t>();
    for (const auto& jb : js.at("bounds")) {
      BoundComparison b;
      b.m_sigma = jb.at("m_sigma").get<double>();
      b.shannon_bound = get_opt<double>(jb, "shannon_bound");
      b.min_bound = get_opt<double>(jb, "min_bound");
      b.shannon_exceeding = jb.at("shannon_exceeding").get<std::uint64_t>();
      b.min_exceeding = jb.at("min_exceeding").get<std::uint64_t>();
      s.bounds.push_back(b);
    }
    e.sizes.push_back(std::move(s));
  }
  for (const auto& jc : j.at("curves")) {
    BoundCurve c;
    c.kind = kind_from(jc.at("kind").get<std::string>());
    c.variant = variant_from(jc.at("variant").get<std::string>());
    c.m_sigma = jc.at("m_sigma").get<double>();
    for (const auto& p : jc.at("points")) c.points.push_back({p.at("n").get<std::uint64_t>(), p.at("deficit").get<double>()});
    e.curves.push_back(std::move(c));
  }
  return e;
}

Json report_json(const AuditReport& r) {
  Json j;
  Json meta{{"schema_version", r.metadata.schema_version},
            {"tool_version", r.metadata.tool_version},
            {"input", r.metadata.input},
            {"length", r.metadata.length}};
  put_opt(meta, "timestamp", r.metadata.timestamp);
  j["metadata"] = std::move(meta);
  j["config"] = config_json(r.config);

  if (r.balance) {
    j["balance"] = Json{{"n", r.balance->n}, {"ones", r.balance->ones}, {"p1", r.balance->p1},
                        {"sigma_single", r.balance->sigma_single}};
  }
  if (!r.block_balance.empty()) {
    Json arr = Json::array();
    for (const auto& b : r.block_balance) {
      arr.push_back(Json{{"block_size", b.block_size}, {"blocks", b.blocks}, {"mean_p1", b.mean_p1},
                         {"sample_stddev", b.sample_stddev}, {"predicted_sigma", b.predicted_sigma}});
    }
    j["block_balance"] = std::move(arr);
  }
  if (r.conditionals) {
    const auto& c = *r.conditionals;
    j["conditionals"] = Json{{"n", c.n},
                             {"p_0_given_0", c.p_0_given_0},
                             {"p_1_given_0", c.p_1_given_0},
                             {"p_0_given_1", c.p_0_given_1},
                             {"p_1_given_1", c.p_1_given_1},
                             {"sigma_cond", c.sigma_cond}};
  }
  if (r.tuples_overlapping || r.tuples_disjoint) {
    Json t;
    if (r.tuples_overlapping) t["overlapping"] = tuples_json(*r.tuples_overlapping);
    if (r.tuples_disjoint) t["disjoint"] = tuples_json(*r.tuples_disjoint);
    j["tuples"] = std::move(t);
  }
  if (!r.waiting_times.empty()) {
    Json arr = Json::array();
    for (const auto& w : r.waiting_times) {
      Json jw{{"pattern", w.pattern},
              {"theoretical_exact", w.theoretical_exact},
              {"theoretical_mean", w.theoretical_mean},
              {"theoretical_variance", w.theoretical_variance}};
      if (w.empirical) {
        jw["empirical"] = Json{{"occurrences", w.empirical->occurrences},
                               {"first_match", w.empirical->first_match},
                               {"mean_distance", w.empirical->mean_distance},
                               {"distance_count", w.empirical->distance_count}};
      }
      arr.push_back(std::move(jw));
    }
    j["waiting_times"] = std::move(arr);
  }
  if (!r.feller.empty()) {
    Json arr = Json::array();
    for (const auto& row : r.feller) arr.push_back(feller_row_json(row));
    j["feller"] = std::move(arr);
  }
  if (!r.borel.empty()) {
    Json arr = Json::array();
    for (const auto& b : r.borel) {
      arr.push_back(Json{{"m", b.m},
                         {"blocks", b.blocks},
                         {"counts", b.counts},
                         {"frequencies", b.frequencies},
                         {"max_deviation", b.max_deviation},
                         {"threshold", b.threshold}});
    }
    j["borel"] = std::move(arr);
  }
  if (!r.autocorrelation.empty()) j["autocorrelation"] = r.autocorrelation;
  if (r.entropy) j["entropy"] = entropy_section_json(*r.entropy);

  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(flag_json(c));
  j["checks"] = std::move(checks);
  Json flags = Json::array();
  for (const auto& f : r.flags) flags.push_back(flag_json(f));
  j["flags"] = std::move(flags);
  return j;
}

// nlohmann's dump uses shortest round-trip formatting; the report pins 17
// significant digits instead, so this writer mirrors dump(2) except for
// floats.
void write_json(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        out += Json(it.key()).dump();
        out += ": ";
        write_json(it.value(), out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        write_json(v, out, indent + 2);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string s(buf);
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      out += s;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string report_to_json(const AuditReport& report) {
  std::string out;
  write_json(report_json(report), out, 0);
  out += '\n';
  return out;
}

AuditReport report_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("report JSON: ") + e.what(), e.byte);
  }
  try {
    AuditReport r;
    const auto& meta = j.at("metadata");
    r.metadata.schema_version = meta.at("schema_version").get<int>();
    if (r.metadata.schema_version != kReportSchemaVersion) {
      throw FormatError("unsupported report schema version " + std::to_string(r.metadata.schema_version), 0);
    }
    r.metadata.tool_version = meta.at("tool_version").get<std::string>();
    r.metadata.input = meta.at("input").get<std::string>();
    r.metadata.length = meta.at("length").get<std::uint64_t>();
    r.metadata.timestamp = get_opt<std::string>(meta, "timestamp");
    r.config = config_from(j.at("config"));

    if (j.contains("balance")) {
      const auto& b = j["balance"];
      r.balance = BalanceStats{b.at("n").get<std::uint64_t>(), b.at("ones").get<std::uint64_t>(),
                               b.at("p1").get<double>(), b.at("sigma_single").get<double>()};
    }
    if (j.contains("block_balance")) {
      for (const auto& b : j["block_balance"]) {
        r.block_balance.push_back({b.at("block_size").get<std::uint64_t>(), b.at("blocks").get<std::uint64_t>(),
                                   b.at("mean_p1").get<double>(), b.at("sample_stddev").get<double>(),
                                   b.at("predicted_sigma").get<double>()});
      }
    }
    if (j.contains("conditionals")) {
      const auto& c = j["conditionals"];
      r.conditionals = ConditionalProbs{c.at("n").get<std::uint64_t>(),       c.at("p_0_given_0").get<double>(),
                                        c.at("p_1_given_0").get<double>(),    c.at("p_0_given_1").get<double>(),
                                        c.at("p_1_given_1").get<double>(),    c.at("sigma_cond").get<double>()};
    }
    if (j.contains("tuples")) {
      const auto& t = j["tuples"];
      if (t.contains("overlapping")) r.tuples_overlapping = tuples_from(t["overlapping"]);
      if (t.contains("disjoint")) r.tuples_disjoint = tuples_from(t["disjoint"]);
    }
    if (j.contains("waiting_times")) {
      for (const auto& jw : j["waiting_times"]) {
        WaitingTimeEntry w;
        w.pattern = jw.at("pattern").get<std::string>();
        w.theoretical_exact = jw.at("theoretical_exact").get<std::string>();
        w.theoretical_mean = jw.at("theoretical_mean").get<double>();
        w.theoretical_variance = jw.at("theoretical_variance").get<double>();
        if (jw.contains("empirical")) {
          const auto& e = jw["empirical"];
          w.empirical = WaitingTimeEmpirical{e.at("occurrences").get<std::uint64_t>(),
                                             e.at("first_match").get<std::uint64_t>(),
                                             e.at("mean_distance").get<double>(),
                                             e.at("distance_count").get<std::uint64_t>()};
        }
        r.waiting_times.push_back(std::move(w));
      }
    }
    if (j.contains("feller")) {
      for (const auto& jr : j["feller"]) r.feller.push_back(feller_row_from(jr));
    }
    if (j.contains("borel")) {
      for (const auto& jb : j["borel"]) {
        BorelResult b;
        b.m = jb.at("m").get<unsigned>();
        b.blocks = jb.at("blocks").get<std::uint64_t>();
        b.counts = jb.at("counts").get<std::vector<std::uint64_t>>();
        b.frequencies = jb.at("frequencies").get<std::vector<double>>();
        b.max_deviation = jb.at("max_deviation").get<double>();
        b.threshold = jb.at("threshold").get<double>();
        r.borel.push_back(std::move(b));
      }
    }
    if (j.contains("autocorrelation")) r.autocorrelation = j["autocorrelation"].get<std::vector<double>>();
    if (j.contains("entropy")) r.entropy = entropy_section_from(j["entropy"]);
    for (const auto& c : j.at("checks")) r.checks.push_back(flag_from(c));
    for (const auto& f : j.at("flags")) r.flags.push_back(flag_from(f));
    return r;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("report JSON: ") + e.what(), 0);
  }
}

}  // namespace rngaudit
