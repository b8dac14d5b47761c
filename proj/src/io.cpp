#include "zitterdyn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zitterdyn/errors.hpp"
#include "zitterdyn/retardation.hpp"
#include "zitterdyn/selfforce.hpp"

namespace zitterdyn {
namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::size_t export_csv(const std::vector<std::vector<double>>& records, const std::vector<std::string>& schema,
                       const std::string& path) {
  if (schema.empty()) throw InvalidArgument("CSV schema is empty");
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].size() != schema.size()) {
      throw InvalidArgument("record " + std::to_string(i) + " has " + std::to_string(records[i].size()) +
                            " fields, schema has " + std::to_string(schema.size()));
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path);
  for (std::size_t j = 0; j < schema.size(); ++j) out << (j ? "," : "") << quote_field(schema[j]);
  out << "\r\n";
  for (const auto& rec : records) {
    for (std::size_t j = 0; j < rec.size(); ++j) out << (j ? "," : "") << format_number(rec[j]);
    out << "\r\n";
  }
  out.flush();
  if (!out) throw InvalidArgument("failed writing " + path);
  return records.size();
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_record(line);
    if (first) {
      t.header = std::move(fields);
      first = false;
      continue;
    }
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(std::strtod(f.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<std::string> trajectory_schema() { return {"t", "x", "v", "a", "r", "residual"}; }

std::vector<std::string> energy_schema(int n_terms) {
  return {"beta", "bdot", "E_exact", "E_rel", "Q_closed", "Q_series_" + std::to_string(n_terms), "defect"};
}

std::vector<std::vector<double>> trajectory_records(const TrajectoryHistory& tr, const ModelParams& p) {
  std::vector<std::vector<double>> rows;
  rows.reserve(tr.size());
  for (const auto& s : tr.samples()) {
    double r = std::nan("");
    double res = std::nan("");
    try {
      const DelayResult dr = solve_retarded_time(tr, s.t, p);
      r = dr.r;
      res = eom_residual(tr.at(dr.t_r), s.x, dr.r, p);
    } catch (const NumericalFailure&) {
    }
    rows.push_back({s.t, s.x, s.v, s.a, r, res});
  }
  return rows;
}

std::vector<std::vector<double>> energy_records(const std::vector<double>& betas, const std::vector<double>& bdots,
                                                const ModelParams& p, int n_terms) {
  std::vector<std::vector<double>> rows;
  rows.reserve(betas.size() * bdots.size());
  for (double b : betas) {
    for (double bd : bdots) {
      const EnergyBreakdown e = energy_decomposition(b, bd, p, n_terms);
      rows.push_back({b, bd, e.E_exact, e.E_rel, e.Q_closed, e.Q_series, e.identity_defect});
    }
  }
  return rows;
}

nlohmann::json to_json(const RootSet& rs, const ModelParams& p) {
  const double g = lorentz_gamma(rs.beta);
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& r : rs.roots) {
    roots.push_back({{"re", r.mu.real()},
                     {"im", r.mu.imag()},
                     {"residual", r.residual},
                     {"eta_n", r.mu.imag()},
                     {"omega", r.mu.imag() * p.c / (g * p.d)},
                     {"multiplicity", r.multiplicity},
                     {"conjugate_partner", r.is_conjugate_partner}});
  }
  return {{"beta", rs.beta},
          {"box", {rs.search_box.re_min, rs.search_box.re_max, rs.search_box.im_min, rs.search_box.im_max}},
          {"certified_count", rs.certified_count},
          {"roots", roots}};
}

RootSet rootset_from_json(const nlohmann::json& j) {
  try {
    RootSet rs;
    rs.beta = j.at("beta").get<double>();
    const auto& b = j.at("box");
    rs.search_box = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()};
    rs.certified_count = j.at("certified_count").get<int>();
    for (const auto& r : j.at("roots")) {
      Root root;
      root.mu = cplx(r.at("re").get<double>(), r.at("im").get<double>());
      root.residual = r.value("residual", 0.0);
      root.multiplicity = r.value("multiplicity", 1);
      root.is_conjugate_partner = r.value("conjugate_partner", false);
      rs.roots.push_back(root);
    }
    return rs;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed root set JSON: ") + e.what());
  }
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw InvalidArgument("failed writing " + path);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("invalid JSON in " + path + ": " + e.what());
  }
}

}  // namespace zitterdyn
