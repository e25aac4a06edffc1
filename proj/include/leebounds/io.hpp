#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "leebounds/effects.hpp"
#include "leebounds/inference.hpp"
#include "leebounds/raw_data.hpp"

namespace lee {

// ---------------------------------------------------------------------------
// Number formatting. CSV uses shortest round-trip so write-then-read is exact;
// JSON reports use fixed %.12g so reruns are byte-identical.
// ---------------------------------------------------------------------------

inline std::string fmt_shortest(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline std::string fmt_g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// Dataset CSV schemas (one per space):
//   compositional:        unit_id,D,S[,x],y1..yk       outcome cells empty when S=0
//   distribution (long):  unit_id,D,S[,x],value        one row per draw
//   interval:             unit_id,D,S[,x],lower,upper
//   network / spd:        unit_id,D,S[,x],m,e1..e{m*m} row-major
//   scalar:               unit_id,D,S[,x],y
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

inline double parse_double(const std::string& s, int row) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  require(res.ec == std::errc() && res.ptr == s.data() + s.size(), errc::schema_error,
          "bad number '" + s + "' at row " + std::to_string(row));
  return v;
}

inline bool parse_flag(const std::string& s, const char* name, int row) {
  require(s == "0" || s == "1", errc::schema_error,
          std::string(name) + " must be 0 or 1 at row " + std::to_string(row));
  return s == "1";
}

inline std::vector<std::string> value_columns(Space space, int k) {
  std::vector<std::string> cols;
  switch (space) {
    case Space::compositional:
    case Space::compositional_zeros:
      for (int j = 1; j <= k; ++j) cols.push_back("y" + std::to_string(j));
      break;
    case Space::distribution: cols.push_back("value"); break;
    case Space::interval:
      cols.push_back("lower");
      cols.push_back("upper");
      break;
    case Space::network:
    case Space::spd:
      cols.push_back("m");
      for (int j = 1; j <= k * k; ++j) cols.push_back("e" + std::to_string(j));
      break;
    case Space::scalar: cols.push_back("y"); break;
  }
  return cols;
}

}  // namespace detail

inline void write_dataset_csv(const RawDataset& raw, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), errc::config_error, "cannot open '" + path + "' for writing");
  std::string header = "unit_id,D,S";
  if (raw.has_covariate) header += ",x";
  for (const auto& c : detail::value_columns(raw.space, raw.k)) header += "," + c;
  f << header << "\n";
  for (const RawUnit& u : raw.units) {
    const std::string prefix = u.id + "," + (u.treated ? "1" : "0") + "," +
                               (u.selected ? "1" : "0") +
                               (raw.has_covariate ? "," + u.covariate : "");
    if (raw.space == Space::distribution) {
      if (!u.selected) {
        f << prefix << ",\n";
      } else {
        for (double v : u.values) f << prefix << "," << fmt_shortest(v) << "\n";
      }
      continue;
    }
    f << prefix;
    if (raw.space == Space::network || raw.space == Space::spd)
      f << "," << raw.k;
    const std::size_t n_cells = [&]() -> std::size_t {
      switch (raw.space) {
        case Space::compositional:
        case Space::compositional_zeros: return static_cast<std::size_t>(raw.k);
        case Space::interval: return 2;
        case Space::network:
        case Space::spd: return static_cast<std::size_t>(raw.k) * raw.k;
        case Space::scalar: return 1;
        default: return 0;
      }
    }();
    for (std::size_t j = 0; j < n_cells; ++j)
      f << "," << (u.selected ? fmt_shortest(u.values[j]) : "");
    f << "\n";
  }
  require(f.good(), errc::config_error, "write to '" + path + "' failed");
}

inline RawDataset read_dataset_csv(const std::string& path, Space space,
                                   bool expect_covariate = false) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), errc::config_error, "cannot open '" + path + "'");
  std::string line;
  require(static_cast<bool>(std::getline(f, line)), errc::schema_error, "empty file");
  auto header = detail::split_csv(line);
  std::size_t col = 0;
  auto expect = [&](const std::string& name) {
    require(col < header.size() && header[col] == name, errc::schema_error,
            "expected header column '" + name + "', got '" +
                (col < header.size() ? header[col] : "<none>") + "'");
    ++col;
  };
  expect("unit_id");
  expect("D");
  expect("S");
  if (expect_covariate) expect("x");

  RawDataset raw;
  raw.space = space;
  raw.has_covariate = expect_covariate;
  const std::size_t fixed = col;
  const std::size_t value_cols = header.size() - fixed;
  switch (space) {
    case Space::compositional:
    case Space::compositional_zeros:
      require(value_cols >= 2, errc::schema_error, "composition needs >= 2 part columns");
      raw.k = static_cast<int>(value_cols);
      break;
    case Space::distribution:
      require(value_cols == 1 && header[fixed] == "value", errc::schema_error,
              "distribution schema needs a single 'value' column");
      break;
    case Space::interval:
      require(value_cols == 2 && header[fixed] == "lower" && header[fixed + 1] == "upper",
              errc::schema_error, "interval schema needs lower,upper");
      break;
    case Space::network:
    case Space::spd: {
      require(value_cols >= 2 && header[fixed] == "m", errc::schema_error,
              "matrix schema needs m,e1..e{m*m}");
      const auto m2 = static_cast<int>(value_cols - 1);
      const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m2))));
      require(m * m == m2, errc::schema_error, "entry columns must form a square matrix");
      raw.k = m;
      break;
    }
    case Space::scalar:
      require(value_cols == 1 && header[fixed] == "y", errc::schema_error,
              "scalar schema needs a single 'y' column");
      break;
  }

  int row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    auto cells = detail::split_csv(line);
    require(cells.size() == header.size(), errc::schema_error,
            "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                " cells, expected " + std::to_string(header.size()));
    RawUnit u;
    u.id = cells[0];
    u.treated = detail::parse_flag(cells[1], "D", row);
    u.selected = detail::parse_flag(cells[2], "S", row);
    if (expect_covariate) u.covariate = cells[3];

    if (space == Space::distribution) {
      const std::string& v = cells[fixed];
      if (!raw.units.empty() && raw.units.back().id == u.id) {
        RawUnit& prev = raw.units.back();
        require(prev.treated == u.treated && prev.selected == u.selected &&
                    prev.covariate == u.covariate,
                errc::schema_error, "unit '" + u.id + "' changes flags at row " +
                    std::to_string(row));
        require(u.selected, errc::schema_error,
                "unselected unit '" + u.id + "' has multiple rows at row " + std::to_string(row));
        require(!v.empty(), errc::schema_error,
                "selected unit missing value at row " + std::to_string(row));
        prev.values.push_back(detail::parse_double(v, row));
        continue;
      }
      if (u.selected) {
        require(!v.empty(), errc::schema_error,
                "selected unit missing value at row " + std::to_string(row));
        u.values.push_back(detail::parse_double(v, row));
      } else {
        require(v.empty(), errc::schema_error,
                "outcome present for unselected unit at row " + std::to_string(row));
      }
      raw.units.push_back(std::move(u));
      continue;
    }

    std::size_t c = fixed;
    if (space == Space::network || space == Space::spd) {
      require(!cells[c].empty(), errc::schema_error,
              "missing matrix size at row " + std::to_string(row));
      const int m = static_cast<int>(detail::parse_double(cells[c], row));
      require(m == raw.k, errc::schema_error,
              "matrix size differs from header at row " + std::to_string(row));
      ++c;
    }
    bool any_present = false, all_present = true;
    for (std::size_t j = c; j < cells.size(); ++j) {
      if (cells[j].empty()) all_present = false;
      else any_present = true;
    }
    if (u.selected) {
      require(all_present, errc::schema_error,
              "selected unit missing outcome cells at row " + std::to_string(row));
      for (std::size_t j = c; j < cells.size(); ++j)
        u.values.push_back(detail::parse_double(cells[j], row));
    } else {
      require(!any_present, errc::schema_error,
              "outcome present for unselected unit at row " + std::to_string(row));
    }
    raw.units.push_back(std::move(u));
  }
  return raw;
}

// ---------------------------------------------------------------------------
// Report JSON. Hand-rolled writer: fixed key order and %.12g floats make the
// output a pure function of the inputs, byte for byte.
// ---------------------------------------------------------------------------

struct JsonReport {
  std::string space;
  int n = 0;
  double p_hat = 1.0;
  bool p_clipped = false;
  double alpha = 0.0;
  int B = 0;
  std::uint64_t seed = 0;
  std::string grid_scheme;
  Mat directions;
  Vec sigma;
  Vec variance;  // empty -> null
  double critical_value = 0.0;
  Vec offsets;
  Vec mu0;  // empty -> null
  struct Joint {
    Vec xi;
    Vec halfwidth;
    double critical_value = 0.0;
    Vec offsets;
  };
  std::optional<Joint> joint;
};

namespace detail {

inline void append_vec(std::string& out, const Vec& v) {
  out += "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt_g12(v(i));
  }
  out += "]";
}

}  // namespace detail

inline std::string render_report_json(const JsonReport& r) {
  std::string out = "{\n";
  out += "  \"space\": \"" + r.space + "\",\n";
  out += "  \"n\": " + std::to_string(r.n) + ",\n";
  out += "  \"p_hat\": " + fmt_g12(r.p_hat) + ",\n";
  out += std::string("  \"p_clipped\": ") + (r.p_clipped ? "true" : "false") + ",\n";
  out += "  \"alpha\": " + fmt_g12(r.alpha) + ",\n";
  out += "  \"B\": " + std::to_string(r.B) + ",\n";
  out += "  \"seed\": " + std::to_string(r.seed) + ",\n";
  out += "  \"grid_scheme\": \"" + r.grid_scheme + "\",\n";
  out += "  \"directions\": [";
  for (Eigen::Index i = 0; i < r.directions.rows(); ++i) {
    if (i) out += ",";
    detail::append_vec(out, r.directions.row(i).transpose());
  }
  out += "],\n";
  out += "  \"sigma\": ";
  detail::append_vec(out, r.sigma);
  out += ",\n  \"variance\": ";
  if (r.variance.size() == 0) out += "null";
  else detail::append_vec(out, r.variance);
  out += ",\n  \"critical_value\": " + fmt_g12(r.critical_value);
  out += ",\n  \"offsets\": ";
  detail::append_vec(out, r.offsets);
  out += ",\n  \"mu0\": ";
  if (r.mu0.size() == 0) out += "null";
  else detail::append_vec(out, r.mu0);
  out += ",\n  \"joint\": ";
  if (!r.joint) {
    out += "null";
  } else {
    out += "{\"xi\": ";
    detail::append_vec(out, r.joint->xi);
    out += ", \"halfwidth\": ";
    detail::append_vec(out, r.joint->halfwidth);
    out += ", \"critical_value\": " + fmt_g12(r.joint->critical_value);
    out += ", \"offsets\": ";
    detail::append_vec(out, r.joint->offsets);
    out += "}";
  }
  out += "\n}\n";
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), errc::config_error, "cannot open '" + path + "' for writing");
  f << content;
  require(f.good(), errc::config_error, "write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Plot-data CSVs.
// ---------------------------------------------------------------------------

// x,y rows, closed ring (first vertex repeated at the end).
inline void write_polygon_csv(const Polygon2D& poly, const std::string& path) {
  std::string out = "x,y\n";
  auto add = [&](const Eigen::Vector2d& v) {
    out += fmt_shortest(v.x()) + "," + fmt_shortest(v.y()) + "\n";
  };
  for (const auto& v : poly.vertices) add(v);
  if (!poly.vertices.empty()) add(poly.vertices.front());
  write_text_file(path, out);
}

// Decoded ring (e.g. ternary shares for k = 3 compositions), closed.
inline void write_ring_csv(const std::vector<Vec>& ring, const std::vector<std::string>& labels,
                           const std::string& path) {
  std::string out;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (j) out += ",";
    out += labels[j];
  }
  out += "\n";
  auto add = [&](const Vec& v) {
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (j) out += ",";
      out += fmt_shortest(v(j));
    }
    out += "\n";
  };
  for (const auto& v : ring) add(v);
  if (!ring.empty()) add(ring.front());
  write_text_file(path, out);
}

inline void write_band_csv(const QuantileBand& band, const std::string& path) {
  std::string out = "q,lower,upper\n";
  for (Eigen::Index j = 0; j < band.grid.size(); ++j)
    out += fmt_shortest(band.grid(j)) + "," + fmt_shortest(band.lower(j)) + "," +
           fmt_shortest(band.upper(j)) + "\n";
  write_text_file(path, out);
}

// Long format: sample,t,<component columns>.
inline void write_geodesics_csv(const std::vector<GeodesicSample>& samples,
                                const std::vector<std::string>& labels, const std::string& path) {
  std::string out = "sample,t";
  for (const auto& l : labels) out += "," + l;
  out += "\n";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& g = samples[s];
    for (Eigen::Index i = 0; i < g.t.size(); ++i) {
      out += std::to_string(s + 1) + "," + fmt_shortest(g.t(i));
      const Vec& p = g.points[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < p.size(); ++j) out += "," + fmt_shortest(p(j));
      out += "\n";
    }
  }
  write_text_file(path, out);
}

inline void write_table_csv(const std::string& header,
                            const std::vector<std::vector<std::string>>& rows,
                            const std::string& path) {
  std::string out = header + "\n";
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out += ",";
      out += r[j];
    }
    out += "\n";
  }
  write_text_file(path, out);
}

}  // namespace lee
