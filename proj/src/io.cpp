#include "ssf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ssf/common.hpp"

namespace ssf {

std::string num_str(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string fixed_str(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

namespace {

struct Csv {
  std::filesystem::path path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // data rows (line = index + 2)

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw InputError(path.string() + ": missing column " + name);
  }
  std::optional<std::size_t> find_column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

Csv read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  Csv csv;
  csv.path = path;
  std::string line;
  if (!std::getline(in, line)) {
    throw InputError(path.string() + ": empty file (header required)");
  }
  csv.header = split_line(line);
  for (std::string& h : csv.header) {
    std::transform(h.begin(), h.end(), h.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
  }
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    csv.rows.push_back(split_line(line));
  }
  return csv;
}

double parse_num(const Csv& csv, std::size_t row, std::size_t col) {
  if (col >= csv.rows[row].size() || csv.rows[row][col].empty()) {
    throw InputError(csv.path.string() + ":" + std::to_string(row + 2) +
                     ": missing value in column " + csv.header[col]);
  }
  const std::string& field = csv.rows[row][col];
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw InputError(csv.path.string() + ":" + std::to_string(row + 2) +
                     ": '" + field + "' is not a number (column " +
                     csv.header[col] + ", '.' decimal separator required)");
  }
  return v;
}

int parse_age(const Csv& csv, std::size_t row, std::size_t col) {
  const double v = parse_num(csv, row, col);
  const int age = static_cast<int>(std::lround(v));
  if (std::abs(v - age) > 1e-9 || age < 0) {
    throw InputError(csv.path.string() + ":" + std::to_string(row + 2) +
                     ": age must be a non-negative integer, got '" +
                     csv.rows[row][col] + "'");
  }
  return age;
}

}  // namespace

bool csv_has_column(const std::filesystem::path& path,
                    const std::string& column) {
  return read_csv(path).find_column(column).has_value();
}

LifeTable read_lifetable_csv(const std::filesystem::path& path,
                             std::optional<double> terminal_m) {
  const Csv csv = read_csv(path);
  const std::size_t age_col = csv.column("age");
  const std::size_t lx_col = csv.column("lx");
  const auto ex_col = csv.find_column("ex");
  if (csv.rows.empty()) throw InputError(path.string() + ": no data rows");

  std::vector<double> lx;
  int first_age = 0;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const int age = parse_age(csv, r, age_col);
    if (r == 0) {
      first_age = age;
    } else if (age != first_age + static_cast<int>(r)) {
      throw InputError(path.string() + ":" + std::to_string(r + 2) +
                       ": ages must be contiguous and ascending (expected " +
                       std::to_string(first_age + static_cast<int>(r)) +
                       ", got " + std::to_string(age) + ")");
    }
    lx.push_back(parse_num(csv, r, lx_col));
  }
  const int open_age = first_age + static_cast<int>(csv.rows.size()) - 1;

  double m_inf;
  if (terminal_m) {
    m_inf = *terminal_m;
  } else {
    if (!ex_col) {
      throw InputError(path.string() +
                       ": terminal closing requires either an ex value on "
                       "the last row or --terminal-m");
    }
    const double e_open = parse_num(csv, csv.rows.size() - 1, *ex_col);
    if (!(e_open > 0.0)) {
      throw InputError(path.string() + ":" + std::to_string(csv.rows.size() + 1) +
                       ": terminal ex must be positive");
    }
    m_inf = 1.0 / e_open;
  }
  return rebuild_from_lx(std::move(lx), open_age, m_inf, path.stem().string());
}

MortalityData read_mortality_csv(const std::filesystem::path& path) {
  const Csv csv = read_csv(path);
  const std::size_t age_col = csv.column("age");
  const std::size_t d_col = csv.column("deaths");
  const auto e_named = csv.find_column("exposure");
  const std::size_t e_col =
      e_named ? *e_named : csv.column("exposures");

  std::vector<int> ages;
  std::vector<double> deaths, exposures;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    ages.push_back(parse_age(csv, r, age_col));
    deaths.push_back(parse_num(csv, r, d_col));
    exposures.push_back(parse_num(csv, r, e_col));
  }
  return MortalityData::make(std::move(ages), std::move(deaths),
                             std::move(exposures));
}

EVector read_evector_csv(const std::filesystem::path& path) {
  const Csv csv = read_csv(path);
  const std::size_t age_col = csv.column("age");
  const std::size_t ex_col = csv.column("ex");
  EVector v;
  v.label = path.stem().string();
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const int age = parse_age(csv, r, age_col);
    if (!v.e_by_age.emplace(age, parse_num(csv, r, ex_col)).second) {
      throw InputError(path.string() + ":" + std::to_string(r + 2) +
                       ": duplicate age " + std::to_string(age));
    }
  }
  if (v.e_by_age.empty()) throw InputError(path.string() + ": no data rows");
  return v;
}

void write_lifetable_csv(const std::filesystem::path& path,
                         const LifeTable& t) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "age,lx,dx,px,qx,ax,Lx,mx,Tx,ex\n";
  for (int age = t.start_age(); age <= t.open_age(); ++age) {
    const bool open = age == t.open_age();
    out << age << ',' << num_str(t.lx_at(age)) << ',' << num_str(t.dx_at(age))
        << ',' << (open ? "" : num_str(t.survival_prob(age))) << ','
        << (open ? "" : num_str(t.death_prob(age))) << ','
        << num_str(t.avg_years_in_interval(age)) << ','
        << num_str(t.Lx_at(age)) << ',' << num_str(t.mx_at(age)) << ','
        << num_str(t.person_years_above(age)) << ',' << num_str(t.ex_at(age))
        << '\n';
  }
}

void write_factor_matrix_csv(const std::filesystem::path& path,
                             const FactorMatrix& m, const std::string& corner,
                             int decimals) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << corner;
  for (int age = m.grid.age_min; age <= m.grid.age_max; ++age) {
    out << ',' << age;
  }
  out << '\n';
  for (int row = m.grid.row_min; row <= m.grid.row_max; ++row) {
    out << row;
    for (int age = m.grid.age_min; age <= m.grid.age_max; ++age) {
      const double v = m.at(row, age);
      out << ',';
      if (!std::isnan(v)) out << fixed_str(v, decimals);
    }
    out << '\n';
  }
}

void write_fit_csv(const std::filesystem::path& path, const FitResult& fit) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "a,b,c,sigma2,loglik,converged,age_min,age_max\n";
  out << num_str(fit.params.a) << ',' << num_str(fit.params.b) << ','
      << num_str(fit.params.c) << ',' << num_str(fit.params.sigma2) << ','
      << num_str(fit.loglik) << ',' << (fit.converged ? "true" : "false")
      << ',' << fit.age_min << ',' << fit.age_max << '\n';
}

void write_evector_csv(const std::filesystem::path& path,
                       const GgmParams& params, double age_min, double age_max,
                       double step) {
  if (!(step > 0.0)) throw InputError("e-vector step must be positive");
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  const MortalitySource source(params);
  out << "age,e,e_ssf\n";
  const long n = std::lround((age_max - age_min) / step);
  for (long i = 0; i <= n; ++i) {
    const double age = age_min + static_cast<double>(i) * step;
    const double e = remaining_life_expectancy(params, age);
    const double e_ssf = rounded_e_for_ssf(source, age, EMode::floor_rounded);
    out << num_str(age) << ',' << num_str(e) << ',' << fixed_str(e_ssf, 1)
        << '\n';
  }
}

RuleConfig load_rule_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config " + path.string() + ": " + e.what());
  }

  RuleConfig cfg;
  try {
    if (j.contains("A")) cfg.A = j["A"].get<double>();
    if (j.contains("teacher_point_bonus")) {
      cfg.teacher_point_bonus = j["teacher_point_bonus"].get<double>();
    }
    if (j.contains("ceiling")) cfg.ceiling = j["ceiling"].get<double>();
    if (j.contains("floor")) cfg.floor_wage = j["floor"].get<double>();
    if (j.contains("min_entry_age")) {
      cfg.min_entry_age = j["min_entry_age"].get<double>();
    }
    if (j.contains("bonuses")) {
      for (const auto& [name, v] : j["bonuses"].items()) {
        cfg.bonuses[static_cast<std::size_t>(worker_class_from_string(name))] =
            v.get<double>();
      }
    }
    if (j.contains("min_ect")) {
      for (const auto& [name, v] : j["min_ect"].items()) {
        cfg.min_ect_years[static_cast<std::size_t>(
            worker_class_from_string(name))] = v.get<double>();
      }
    }
    if (j.contains("points")) {
      cfg.points.clear();
      for (const auto& [year, v] : j["points"].items()) {
        cfg.points[std::stoi(year)] = {v.at(0).get<double>(),
                                       v.at(1).get<double>()};
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config " + path.string() + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["tool_version"] = m.tool_version;
  j["seed"] = m.seed;
  j["out_dir"] = m.out_dir;
  j["inputs"] = m.inputs;
  j["options"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.options) j["options"][k] = v;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace ssf
