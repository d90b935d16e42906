#pragma once

// Command implementations behind the gzh executable. Each returns an
// OutputRecord; JSON is the canonical rendering, CSV projects the rows with
// nested keys flattened by '_'.

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gzh/arith.hpp"
#include "gzh/asymptotics.hpp"
#include "gzh/error.hpp"
#include "gzh/gzheight.hpp"
#include "gzh/heegner.hpp"
#include "gzh/lfunc.hpp"
#include "gzh/quadfield.hpp"

namespace gzh::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

enum class Format { kJson, kCsv };

struct OutputRecord {
  std::string command;
  Json params = Json::object();
  std::vector<Json> rows;
  Json metadata = Json::object();

  Json to_json() const {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["params"] = params;
    j["rows"] = Json::array();
    for (const auto& r : rows) j["rows"].push_back(r);
    j["metadata"] = metadata;
    return j;
  }
};

inline Json to_json(const RealWithError& x) {
  Json j;
  j["value"] = x.value;
  j["abs_error"] = x.abs_error;
  j["kind"] = to_string(x.kind);
  return j;
}

// ---------------------------------------------------------------------------
// CSV projection

namespace detail {

inline void flatten(const Json& j, const std::string& prefix, Json& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "_" + it.key(), out);
  } else if (j.is_array()) {
    std::string joined;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) joined += ';';
      joined += j[i].is_string() ? j[i].get<std::string>() : j[i].dump();
    }
    out[prefix] = joined;
  } else {
    out[prefix] = j;
  }
}

inline std::string csv_cell(const Json& v) {
  std::string s;
  if (v.is_null()) return "";
  if (v.is_string()) {
    s = v.get<std::string>();
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return s;
}

}  // namespace detail

inline Json flatten_row(const Json& row) {
  Json flat = Json::object();
  detail::flatten(row, "", flat);
  return flat;
}

inline std::string csv_header(const Json& flat) {
  std::string line;
  bool first = true;
  for (auto it = flat.begin(); it != flat.end(); ++it) {
    if (!first) line += ',';
    first = false;
    line += it.key();
  }
  return line;
}

inline std::string csv_line(const Json& flat) {
  std::string line;
  bool first = true;
  for (auto it = flat.begin(); it != flat.end(); ++it) {
    if (!first) line += ',';
    first = false;
    line += detail::csv_cell(it.value());
  }
  return line;
}

inline void write_csv(std::ostream& os, const std::vector<Json>& rows) {
  if (rows.empty()) return;
  os << csv_header(flatten_row(rows.front())) << '\n';
  for (const auto& r : rows) os << csv_line(flatten_row(r)) << '\n';
}

// Writes a record incrementally: header, then rows as they arrive, then
// metadata. JSON output is one row per line and parses back to to_json().
class StreamWriter {
 public:
  StreamWriter(std::ostream& os, Format fmt) : os_(os), fmt_(fmt) {}

  void begin(const OutputRecord& rec) {
    if (fmt_ != Format::kJson) return;
    os_ << "{\"schema_version\":" << Json(kSchemaVersion).dump() << ",\"command\":" << Json(rec.command).dump()
        << ",\"params\":" << rec.params.dump() << ",\n\"rows\":[";
  }

  void row(const Json& r) {
    if (fmt_ == Format::kJson) {
      os_ << (rows_ ? ",\n" : "\n") << r.dump();
    } else {
      const Json flat = flatten_row(r);
      if (rows_ == 0) os_ << csv_header(flat) << '\n';
      os_ << csv_line(flat) << '\n';
    }
    ++rows_;
    os_.flush();
  }

  void end(const Json& metadata) {
    if (fmt_ != Format::kJson) return;
    os_ << (rows_ ? "\n" : "") << "],\n\"metadata\":" << metadata.dump() << "}\n";
  }

 private:
  std::ostream& os_;
  Format fmt_;
  std::size_t rows_ = 0;
};

inline void write(std::ostream& os, const OutputRecord& rec, Format fmt) {
  StreamWriter w(os, fmt);
  w.begin(rec);
  for (const auto& r : rec.rows) w.row(r);
  w.end(rec.metadata);
}

// ---------------------------------------------------------------------------
// Row builders

inline Json level_row(const HeegnerLevel& hl) {
  Json r;
  r["N"] = hl.N();
  r["betas"] = hl.betas;
  r["genus"] = hl.level.genus;
  r["kappa"] = hl.level.kappa.str();
  return r;
}

inline Json height_row(const HeightBreakdown& b, const std::optional<RealWithError>& direct) {
  Json r;
  r["D"] = b.disc.D;
  r["N"] = b.level.N();
  r["m"] = b.m;
  r["beta"] = b.level.beta();
  Json terms;
  terms["term_i"] = to_json(b.term_i);
  terms["term_ii"] = to_json(b.term_ii);
  terms["term_iii"] = to_json(b.term_iii);
  terms["term_iv"] = to_json(b.term_iv);
  r["terms"] = terms;
  r["total"] = to_json(b.total);
  r["hu_log_N"] = static_cast<double>(b.disc.h * b.disc.u) * std::log(static_cast<double>(b.level.N()));
  if (direct) r["term_i_at_s1"] = to_json(*direct);
  r["warnings"] = b.warnings;
  return r;
}

inline Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json scan_row(const ScanRow& s) {
  Json r;
  r["N"] = s.N;
  r["h_hat"] = std::isfinite(s.h_hat) ? Json(s.h_hat) : Json(nullptr);
  r["h_hat_error"] = s.h_hat_error;
  r["hu_log_N"] = s.hu_log_N;
  r["ratio"] = std::isfinite(s.ratio) ? Json(s.ratio) : Json(nullptr);
  r["excess"] = std::isfinite(s.excess) ? Json(s.excess) : Json(nullptr);
  r["genus"] = s.genus;
  r["hst_surrogate"] = s.hst_surrogate;
  r["ls_ratio"] = optional_number(s.ls_ratio);
  r["ls_bound"] = optional_number(s.ls_bound);
  r["ls_bound_h"] = optional_number(s.ls_bound_h);
  r["term_i"] = s.term_i;
  r["term_ii"] = s.term_ii;
  r["term_iii"] = s.term_iii;
  r["term_iv"] = s.term_iv;
  r["error"] = s.error ? Json(*s.error) : Json(nullptr);
  return r;
}

inline Json config_json(const SpectralEvalConfig& c) {
  Json j;
  j["s_grid"] = c.s_grid;
  j["truncation"] = c.truncation;
  j["extrapolation_degree"] = c.extrapolation_degree;
  j["tail_model"] = to_string(c.tail_model);
  j["tail_exponent"] = c.tail_exponent;
  j["quad_tol"] = c.quad_tol;
  j["convention"] = to_string(c.convention);
  return j;
}

// ---------------------------------------------------------------------------
// Commands

struct RunInfo {
  bool with_meta = true;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

inline void finish_metadata(OutputRecord& rec, const RunInfo& info, const SpectralCache* cache) {
  if (!info.with_meta) return;
  rec.metadata["elapsed_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - info.start).count();
  if (cache) {
    Json c;
    c["path"] = cache->path().string();
    c["hits"] = cache->hits();
    c["misses"] = cache->misses();
    c["entries"] = cache->size();
    rec.metadata["cache"] = c;
  }
}

inline OutputRecord cmd_levels(i64 D, i64 N_max) {
  const auto disc = make_discriminant(D);
  OutputRecord rec;
  rec.command = "levels";
  rec.params["D"] = D;
  rec.params["max"] = N_max;
  for (i64 N : enum_levels(disc, N_max)) rec.rows.push_back(level_row(make_heegner_level(disc, N)));
  return rec;
}

inline OutputRecord cmd_classgroup(i64 D) {
  const auto disc = make_discriminant(D);
  const auto cg = reduced_forms(disc);
  OutputRecord rec;
  rec.command = "classgroup";
  rec.params["D"] = D;
  rec.metadata["h"] = disc.h;
  rec.metadata["u"] = disc.u;
  for (std::size_t i = 0; i < cg.forms.size(); ++i) {
    Json r;
    r["a"] = cg.forms[i].a;
    r["b"] = cg.forms[i].b;
    r["c"] = cg.forms[i].c;
    r["principal"] = i == cg.principal_index;
    rec.rows.push_back(r);
  }
  return rec;
}

inline OutputRecord cmd_height(i64 D, i64 N, const SpectralEvalConfig& config, bool with_direct = true) {
  const auto disc = make_discriminant(D);
  const auto hl = make_heegner_level(disc, N);
  OutputRecord rec;
  rec.command = "height";
  rec.params["D"] = D;
  rec.params["N"] = N;
  rec.params["spectral"] = config_json(config);
  const HeightBreakdown b = height(disc, hl, config);
  std::optional<RealWithError> direct;
  if (with_direct) {
    const SpectralSeries series(disc, hl.level, 1, config.truncation, config.convention);
    direct = term_i_direct(series, config.tail_exponent, config.threads);
  }
  rec.rows.push_back(height_row(b, direct));
  rec.metadata["error_kind"] = to_string(b.total.kind);
  rec.metadata["warnings"] = b.warnings;
  return rec;
}

inline OutputRecord scan_record_header(i64 D, i64 N_min, i64 N_max, std::size_t sample,
                                       const SpectralEvalConfig& config) {
  OutputRecord rec;
  rec.command = "scan";
  rec.params["D"] = D;
  rec.params["min"] = N_min;
  rec.params["max"] = N_max;
  rec.params["sample"] = sample;
  rec.params["spectral"] = config_json(config);
  return rec;
}

inline void scan_metadata(OutputRecord& rec, const std::vector<ScanRow>& rows) {
  std::size_t failed = 0, warned = 0;
  for (const auto& r : rows) {
    if (r.error) ++failed;
    if (!r.warnings.empty()) ++warned;
  }
  rec.metadata["rows"] = rows.size();
  rec.metadata["failed_rows"] = failed;
  rec.metadata["nonpositive_rows"] = warned;
  rec.metadata["error_kind"] = "heuristic";
  rec.metadata["note"] = "stable height represented by its leading term g log N / 3";
}

inline OutputRecord cmd_scan(i64 D, i64 N_min, i64 N_max, std::size_t sample, const SpectralEvalConfig& config,
                             const std::function<void(const Json&)>& on_row = {}) {
  const auto disc = make_discriminant(D);
  OutputRecord rec = scan_record_header(D, N_min, N_max, sample, config);
  const auto rows = scan(disc, N_min, N_max, config, sample, [&](const ScanRow& r) {
    if (on_row) on_row(scan_row(r));
  });
  for (const auto& r : rows) rec.rows.push_back(scan_row(r));
  scan_metadata(rec, rows);
  return rec;
}

inline OutputRecord cmd_genus(i64 N) {
  if (N < 1 || !is_squarefree(N)) throw InvalidArgument("genus: N squarefree violated (N = " + std::to_string(N) + ")");
  OutputRecord rec;
  rec.command = "genus";
  rec.params["N"] = N;
  Json r;
  r["N"] = N;
  r["genus"] = genus_X0(N);
  r["kappa"] = kappa(N).str();
  r["index_factor"] = index_factor(N);
  rec.rows.push_back(r);
  return rec;
}

inline OutputRecord cmd_bound(i64 D, i64 N) {
  const auto disc = make_discriminant(D);
  const Level level = make_level(disc, N);
  const auto b = lang_silverman_bound(disc, level);
  OutputRecord rec;
  rec.command = "bound";
  rec.params["D"] = D;
  rec.params["N"] = N;
  Json r;
  r["D"] = D;
  r["N"] = N;
  r["h"] = disc.h;
  r["u"] = disc.u;
  r["genus"] = level.genus;
  r["bound"] = b.bound;
  r["bound_hu"] = b.bound_hu;
  r["hst_surrogate"] = hst_surrogate(level.genus, N);
  r["heegner_level"] = is_heegner_level(disc, N);
  r["watkins_degree_bound"] = watkins_degree_lower_bound(N, 0.0);
  rec.rows.push_back(r);
  return rec;
}

inline OutputRecord cmd_scaling(double base_height, i64 g_base, double hst_base, const std::vector<i64>& degrees) {
  OutputRecord rec;
  rec.command = "scaling";
  rec.params["base_height"] = base_height;
  rec.params["g"] = g_base;
  rec.params["hst"] = hst_base;
  rec.params["degrees"] = degrees;
  for (const auto& s : weil_scaling(base_height, g_base, hst_base, degrees)) {
    Json r;
    r["N"] = s.step;
    r["height_factor"] = s.height_factor.str();
    r["point_height"] = s.point_height;
    r["degree"] = s.degree;
    r["dim"] = s.dim;
    r["hst"] = s.hst;
    r["zariski_closure_dim"] = s.zariski_closure_dim;
    rec.rows.push_back(r);
  }
  return rec;
}

}  // namespace gzh::cli
