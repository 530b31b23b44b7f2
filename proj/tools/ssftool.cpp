// Batch front end: life-table rebuilding, GGM fitting, SSF tables and
// derived retirement metrics, official-vs-model comparisons and
// multi-year sweeps. One subcommand per analysis; every run writes a
// manifest beside its outputs and is byte-reproducible from it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssf/common.hpp"
#include "ssf/ggm.hpp"
#include "ssf/io.hpp"
#include "ssf/lifetable.hpp"
#include "ssf/metrics.hpp"
#include "ssf/rules.hpp"
#include "ssf/sources.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
};

std::pair<int, int> parse_range(const std::string& s, const char* what) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    const int lo = std::stoi(s.substr(0, colon));
    const int hi = std::stoi(s.substr(colon + 1));
    if (lo > hi) throw std::invalid_argument("lo > hi");
    return {lo, hi};
  } catch (const std::exception&) {
    throw ssf::InputError(std::string(what) + " range '" + s +
                          "' is not LO:HI or a single integer");
  }
}

ssf::GgmParams parse_params(const std::string& s) {
  std::vector<double> v;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, ',')) {
    try {
      v.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw ssf::InputError("cannot parse --params value '" + field + "'");
    }
  }
  if (v.size() != 4) {
    throw ssf::InputError("--params expects a,b,c,sigma2 (4 values)");
  }
  ssf::GgmParams p{v[0], v[1], v[2], v[3]};
  p.validate();
  return p;
}

/// Flags shared by every command that needs a mortality source.
struct SourceFlags {
  std::string evector_path;
  std::string table_path;
  std::string params_csv;
  double terminal_m = 0.0;

  void add_to(CLI::App* cmd, const std::string& prefix = "") {
    cmd->add_option("--" + prefix + "evector", evector_path,
                    "e-vector CSV (age,ex)");
    cmd->add_option("--" + prefix + "table", table_path,
                    "life-table CSV (age,lx[,ex])");
    cmd->add_option("--" + prefix + "params", params_csv,
                    "GGM parameters a,b,c,sigma2");
    if (prefix.empty()) {
      cmd->add_option("--terminal-m", terminal_m,
                      "terminal closing rate for life-table inputs");
    }
  }

  bool any() const {
    return !evector_path.empty() || !table_path.empty() || !params_csv.empty();
  }

  ssf::MortalitySource resolve(const char* role) const {
    const int given = static_cast<int>(!evector_path.empty()) +
                      static_cast<int>(!table_path.empty()) +
                      static_cast<int>(!params_csv.empty());
    if (given != 1) {
      throw ssf::InputError(std::string("exactly one ") + role +
                            " source is required (an e-vector, a life table "
                            "or GGM parameters)");
    }
    if (!evector_path.empty()) {
      return ssf::MortalitySource(ssf::read_evector_csv(evector_path));
    }
    if (!table_path.empty()) {
      std::optional<double> m;
      if (terminal_m > 0.0) m = terminal_m;
      return ssf::MortalitySource(ssf::read_lifetable_csv(table_path, m));
    }
    return ssf::MortalitySource(parse_params(params_csv));
  }

  void record(std::map<std::string, std::string>& opts,
              const std::string& prefix = "") const {
    if (!evector_path.empty()) opts[prefix + "evector"] = evector_path;
    if (!table_path.empty()) opts[prefix + "table"] = table_path;
    if (!params_csv.empty()) opts[prefix + "params"] = params_csv;
    if (terminal_m > 0.0) opts["terminal_m"] = ssf::num_str(terminal_m);
  }
};

ssf::RuleConfig load_config(const GlobalOpts& g, double a_override) {
  ssf::RuleConfig cfg = g.config_path.empty()
                            ? ssf::RuleConfig{}
                            : ssf::load_rule_config(g.config_path);
  if (a_override > 0.0) cfg.A = a_override;
  cfg.validate();
  return cfg;
}

fs::path ensure_out_dir(const GlobalOpts& g) {
  fs::path dir(g.out_dir);
  fs::create_directories(dir);
  return dir;
}

void finish_manifest(const GlobalOpts& g, ssf::RunManifest m) {
  m.seed = g.seed;
  m.out_dir = g.out_dir;
  if (!g.config_path.empty()) m.options["config"] = g.config_path;
  ssf::write_manifest(fs::path(g.out_dir) / "manifest.json", m);
}

// ---- lifetable ------------------------------------------------------------

struct LifetableCmd {
  std::vector<std::string> inputs;
  double terminal_m = 0.0;

  int run(const GlobalOpts& g) {
    const fs::path dir = ensure_out_dir(g);
    std::ofstream summary(dir / "summary.csv");
    summary << "table,age,ex\n";
    for (const std::string& input : inputs) {
      std::optional<double> m;
      if (terminal_m > 0.0) m = terminal_m;
      const ssf::LifeTable t = ssf::read_lifetable_csv(input, m);
      ssf::write_lifetable_csv(
          dir / (fs::path(input).stem().string() + "_rebuilt.csv"), t);
      for (int age : {50, 65, 80}) {
        if (age < t.start_age() || age > t.open_age()) continue;
        summary << t.label() << ',' << age << ','
                << ssf::num_str(t.ex_at(age)) << '\n';
      }
    }
    summary.close();

    ssf::RunManifest m;
    m.command = "lifetable";
    m.inputs = inputs;
    if (terminal_m > 0.0) m.options["terminal_m"] = ssf::num_str(terminal_m);
    finish_manifest(g, std::move(m));
    return 0;
  }
};

// ---- fit -------------------------------------------------------------------

struct FitCmd {
  std::string input;
  double terminal_m = 0.0;
  int min_age = 30;
  int restarts = 32;
  double tol = 1e-10;
  bool sequential = false;
  double e_min = 30.0;
  double e_max = 110.0;
  double e_step = 1.0;

  int run(const GlobalOpts& g) {
    const fs::path dir = ensure_out_dir(g);
    ssf::MortalityData data = [&] {
      if (ssf::csv_has_column(input, "lx")) {
        std::optional<double> m;
        if (terminal_m > 0.0) m = terminal_m;
        const ssf::LifeTable t = ssf::read_lifetable_csv(input, m);
        return ssf::mortality_data_from_lifetable(t, min_age);
      }
      return ssf::read_mortality_csv(input);
    }();

    ssf::FitOptions opt;
    opt.min_age = min_age;
    opt.restarts = restarts;
    opt.seed = g.seed;
    opt.tol = tol;
    opt.parallel = !sequential;
    const ssf::FitResult fit = ssf::fit(data, opt);

    ssf::write_fit_csv(dir / "fit.csv", fit);
    ssf::write_evector_csv(dir / "evector.csv", fit.params, e_min, e_max,
                           e_step);
    std::cout << "a=" << ssf::num_str(fit.params.a)
              << " b=" << ssf::num_str(fit.params.b)
              << " c=" << ssf::num_str(fit.params.c)
              << " sigma2=" << ssf::num_str(fit.params.sigma2)
              << " loglik=" << ssf::num_str(fit.loglik)
              << " converged=" << (fit.converged ? "true" : "false") << '\n';

    ssf::RunManifest m;
    m.command = "fit";
    m.inputs = {input};
    m.options["min_age"] = std::to_string(min_age);
    m.options["restarts"] = std::to_string(restarts);
    m.options["tol"] = ssf::num_str(tol);
    m.options["parallel"] = sequential ? "false" : "true";
    m.options["e_grid"] = ssf::num_str(e_min) + ":" + ssf::num_str(e_max) +
                          ":" + ssf::num_str(e_step);
    if (terminal_m > 0.0) m.options["terminal_m"] = ssf::num_str(terminal_m);
    finish_manifest(g, std::move(m));
    return 0;
  }
};

// ---- shared grid/rule flags -------------------------------------------------

struct GridFlags {
  std::string ages = "43:60";
  std::string ct;
  std::string ect;
  std::string worker = "female_worker";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--ages", ages, "age columns LO:HI (default 43:60)");
    cmd->add_option("--ct", ct, "contribution-time rows LO:HI");
    cmd->add_option("--ect", ect,
                    "effective-contribution-time rows LO:HI (per class)");
    cmd->add_option("--class", worker,
                    "worker class for ECT rows / combined rule");
  }

  ssf::FactorGrid resolve(ssf::FactorRule rule) const {
    if (!ct.empty() && !ect.empty()) {
      throw ssf::InputError("--ct and --ect are mutually exclusive");
    }
    ssf::FactorGrid grid;
    const auto [alo, ahi] = parse_range(ages, "--ages");
    grid.age_min = alo;
    grid.age_max = ahi;
    grid.worker = ssf::worker_class_from_string(worker);
    grid.rows_are_ect = !ect.empty() || rule == ssf::FactorRule::combined;
    const std::string& rows =
        !ect.empty() ? ect : (!ct.empty() ? ct : std::string());
    if (!rows.empty()) {
      const auto [rlo, rhi] = parse_range(rows, !ect.empty() ? "--ect" : "--ct");
      grid.row_min = rlo;
      grid.row_max = rhi;
    } else if (grid.rows_are_ect) {
      grid.row_min = 30;
      grid.row_max = 47;
    }  // else keep the CT defaults 35:52
    return grid;
  }

  void record(std::map<std::string, std::string>& opts) const {
    opts["ages"] = ages;
    if (!ct.empty()) opts["ct"] = ct;
    if (!ect.empty()) opts["ect"] = ect;
    opts["class"] = worker;
  }
};

std::vector<ssf::FactorRule> parse_rules(const std::string& rule) {
  if (rule == "ssf") return {ssf::FactorRule::ssf_only};
  if (rule == "combined") return {ssf::FactorRule::combined};
  if (rule == "both") {
    return {ssf::FactorRule::ssf_only, ssf::FactorRule::combined};
  }
  throw ssf::InputError("--rule must be ssf, combined or both, got '" + rule +
                        "'");
}

const char* rule_name(ssf::FactorRule r) {
  return r == ssf::FactorRule::ssf_only ? "ssf" : "combined";
}

// ---- ssf-table --------------------------------------------------------------

struct SsfTableCmd {
  SourceFlags source;
  GridFlags grid;
  int year = 0;
  std::string rule = "ssf";
  double a_override = 0.0;
  bool exact_age = false;

  int run(const GlobalOpts& g) {
    const fs::path dir = ensure_out_dir(g);
    const ssf::RuleConfig cfg = load_config(g, a_override);
    const ssf::MortalitySource src = source.resolve("mortality");
    const ssf::EMode mode =
        exact_age ? ssf::EMode::exact_age : ssf::EMode::floor_rounded;
    if (exact_age && !src.is_model()) {
      throw ssf::InputError("--exact-age needs a fitted-model source");
    }
    for (ssf::FactorRule r : parse_rules(rule)) {
      const ssf::FactorGrid fg = grid.resolve(r);
      const ssf::FactorMatrix m =
          ssf::build_factor_matrix(src, year, r, fg, cfg, mode);
      const std::string corner = fg.rows_are_ect ? "ECT/Age" : "CT/Age";
      ssf::write_factor_matrix_csv(
          dir / ("ssf_" + std::to_string(year) + "_" + rule_name(r) + ".csv"),
          m, corner);
    }

    ssf::RunManifest m;
    m.command = "ssf-table";
    source.record(m.options);
    grid.record(m.options);
    m.options["year"] = std::to_string(year);
    m.options["rule"] = rule;
    m.options["A"] = ssf::num_str(cfg.A);
    if (exact_age) m.options["exact_age"] = "true";
    finish_manifest(g, std::move(m));
    return 0;
  }
};

// ---- nra --------------------------------------------------------------------

struct NraCmd {
  SourceFlags source;
  std::string rule = "ssf";
  std::string worker;
  double entry_age = 18.0;
  int year = 0;
  double a_override = 0.0;

  int run(const GlobalOpts& g) {
    const fs::path dir = ensure_out_dir(g);
    const ssf::RuleConfig cfg = load_config(g, a_override);
    const ssf::WorkerClass c = ssf::worker_class_from_string(worker);

    ssf::NraRule nr;
    if (rule == "ssf") {
      nr = ssf::NraRule::ssf_crossing;
    } else if (rule == "points") {
      nr = ssf::NraRule::points;
    } else {
      throw ssf::InputError("--rule must be ssf or points, got '" + rule + "'");
    }

    // The points rule needs no mortality source.
    ssf::MortalitySource src =
        nr == ssf::NraRule::ssf_crossing
            ? source.resolve("mortality")
            : (source.any() ? source.resolve("mortality")
                            : ssf::MortalitySource(
                                  ssf::EVector{{{0, 1.0}}, "unused"}));
    ssf::Scenario scenario{year, std::move(src), cfg};
    const ssf::NraResult r = ssf::nra(c, entry_age, scenario, nr);

    std::ofstream out(dir / "nra.csv");
    out << "class,entry_age,rule,year,nra,ect\n";
    out << ssf::to_string(c) << ',' << ssf::num_str(entry_age) << ',' << rule
        << ',' << year << ',' << ssf::fixed_str(r.nra, 2) << ','
        << ssf::fixed_str(r.ect_at_nra, 2) << '\n';
    out.close();
    std::cout << "nra=" << ssf::fixed_str(r.nra, 2)
              << " ect=" << ssf::fixed_str(r.ect_at_nra, 2) << '\n';

    ssf::RunManifest m;
    m.command = "nra";
    source.record(m.options);
    m.options["rule"] = rule;
    m.options["class"] = worker;
    m.options["entry_age"] = ssf::num_str(entry_age);
    m.options["year"] = std::to_string(year);
    m.options["A"] = ssf::num_str(cfg.A);
    finish_manifest(g, std::move(m));
    return 0;
  }
};

// ---- ct1 --------------------------------------------------------------------

struct Ct1Cmd {
  SourceFlags source;
  double e_value = 0.0;
  int age = 0;
  std::string ages;
  std::string worker;
  double a_override = 0.0;

  int run(const GlobalOpts& g) {
    const fs::path dir = ensure_out_dir(g);
    const ssf::RuleConfig cfg = load_config(g, a_override);
    std::optional<ssf::WorkerClass> c;
    if (!worker.empty()) c = ssf::worker_class_from_string(worker);

    std::ofstream out(dir / "ct1.csv");
    out << "age,e,ct1";
    if (c) out << ",max_ct,min_ct_line,feasible";
    out << '\n';

    const auto emit = [&](int x, double e) {
      const double v = ssf::ct1(x, e, cfg.A);
      out << x << ',' << ssf::fixed_str(e, 1) << ',' << ssf::fixed_str(v, 2);
      if (c) {
        const ssf::Ct1Feasibility f = ssf::ct1_feasibility(x, v, *c, cfg);
        out << ',' << ssf::fixed_str(f.max_ct, 2) << ','
            << ssf::fixed_str(f.min_ct_line, 2) << ','
            << (f.feasible ? "true" : "false");
      }
      out << '\n';
      return v;
    };

    if (e_value > 0.0) {
      if (age <= 0) throw ssf::InputError("--e needs --age");
      const double v = emit(age, e_value);
      std::cout << "ct1=" << ssf::fixed_str(v, 2) << '\n';
    } else {
      if (ages.empty()) {
        throw ssf::InputError("ct1 needs either --e with --age or a source "
                              "with --ages");
      }
      const ssf::MortalitySource src = source.resolve("mortality");
      const auto [lo, hi] = parse_range(ages, "--ages");
      for (int x = lo; x <= hi; ++x) {
        emit(x, ssf::rounded_e_for_ssf(src, x));
      }
    }
    out.close();

    ssf::RunManifest m;
    m.command = "ct1";
    source.record(m.options);
    if (e_value > 0.0) {
      m.options["e"] = ssf::num_str(e_value);
      m.options["age"] = std::to_string(age);
    }
    if (!ages.empty()) m.options["ages"] = ages;
    if (!worker.empty()) m.options["class"] = worker;
    m.options["A"] = ssf::num_str(cfg.A);
    finish_manifest(g, std::move(m));
    return 0;
  }
};

// ---- compare ----------------------------------------------------------------

struct CompareCmd {
  SourceFlags official;
  SourceFlags counterfactual;
  GridFlags grid;
  int year = 0;
  std::string rule = "ssf";
  bool fit_counterfactual = false;
  int min_age = 30;
  int restarts = 32;
  double tol = 1e-10;
  double a_override = 0.0;

  int run(const GlobalOpts& g) {
    const fs::path dir = ensure_out_dir(g);
    const ssf::RuleConfig cfg = load_config(g, a_override);
    const ssf::MortalitySource off = official.resolve("official");

    std::optional<ssf::FitResult> fit;
    const ssf::MortalitySource cf = [&] {
      if (!fit_counterfactual) return counterfactual.resolve("counterfactual");
      const ssf::LifeTable* t = off.table();
      if (!t) {
        throw ssf::InputError("--fit needs the official source to be a life "
                              "table");
      }
      ssf::FitOptions opt;
      opt.min_age = min_age;
      opt.restarts = restarts;
      opt.seed = g.seed;
      opt.tol = tol;
      fit = ssf::fit(ssf::mortality_data_from_lifetable(*t, min_age), opt);
      return ssf::MortalitySource(fit->params, t->label() + "_ggm");
    }();
    if (fit) ssf::write_fit_csv(dir / "fit.csv", *fit);

    for (ssf::FactorRule r : parse_rules(rule)) {
      const ssf::FactorGrid fg = grid.resolve(r);
      const ssf::ScenarioComparison cmp =
          ssf::compare_sources(off, cf, year, r, fg, cfg);
      const std::string corner = fg.rows_are_ect ? "ECT/Age" : "CT/Age";
      const std::string tag = std::string("_") + rule_name(r) + ".csv";
      ssf::write_factor_matrix_csv(dir / ("official" + tag), cmp.official,
                                   corner);
      ssf::write_factor_matrix_csv(dir / ("counterfactual" + tag),
                                   cmp.counterfactual, corner);
      ssf::write_factor_matrix_csv(dir / ("discrepancy" + tag),
                                   cmp.discrepancy, corner);
    }

    ssf::RunManifest m;
    m.command = "compare";
    official.record(m.options);
    counterfactual.record(m.options, "cf-");
    grid.record(m.options);
    m.options["year"] = std::to_string(year);
    m.options["rule"] = rule;
    m.options["A"] = ssf::num_str(cfg.A);
    if (fit_counterfactual) {
      m.options["fit"] = "true";
      m.options["min_age"] = std::to_string(min_age);
      m.options["restarts"] = std::to_string(restarts);
      m.options["tol"] = ssf::num_str(tol);
    }
    finish_manifest(g, std::move(m));
    return 0;
  }
};

// ---- sweep ------------------------------------------------------------------

struct SweepCmd {
  std::string years = "2000:2019";
  std::string tables_dir;
  std::string cf_tables_dir;
  bool fit_counterfactual = false;
  GridFlags grid;
  double terminal_m = 0.0;
  int min_age = 30;
  int restarts = 32;
  double tol = 1e-10;
  double a_override = 0.0;

  ssf::MortalitySource load_table(const fs::path& file) const {
    std::optional<double> m;
    if (terminal_m > 0.0) m = terminal_m;
    return ssf::MortalitySource(ssf::read_lifetable_csv(file, m));
  }

  int run(const GlobalOpts& g) {
    if (tables_dir.empty()) throw ssf::InputError("sweep needs --tables DIR");
    if (fit_counterfactual && !cf_tables_dir.empty()) {
      throw ssf::InputError("--fit and --cf-tables are mutually exclusive");
    }
    if (!fit_counterfactual && cf_tables_dir.empty()) {
      throw ssf::InputError("sweep needs --fit or --cf-tables DIR");
    }
    const fs::path dir = ensure_out_dir(g);
    const ssf::RuleConfig cfg = load_config(g, a_override);
    const auto [ylo, yhi] = parse_range(years, "--years");

    ssf::SweepSources sources;
    std::ofstream series(dir / "series.csv");
    series << "ssf_year,table_year,source,metric,value\n";
    std::ofstream errors(dir / "errors.csv");
    errors << "ssf_year,message\n";

    std::vector<int> resolved_years;
    for (int year = ylo; year <= yhi; ++year) {
      const int ty = ssf::table_year_for(year);
      const fs::path file = fs::path(tables_dir) / (std::to_string(ty) + ".csv");
      if (!fs::exists(file)) {
        errors << year << ",missing table vintage " << ty << " ("
               << file.string() << ")\n";
        resolved_years.push_back(year);  // sweep() emits the error entry
        continue;
      }
      if (!sources.official.count(ty)) {
        ssf::MortalitySource off = load_table(file);
        if (fit_counterfactual) {
          ssf::FitOptions opt;
          opt.min_age = min_age;
          opt.restarts = restarts;
          opt.seed = g.seed;
          opt.tol = tol;
          const ssf::FitResult fr =
              ssf::fit(ssf::mortality_data_from_lifetable(*off.table(), min_age),
                       opt);
          ssf::write_fit_csv(dir / ("fit_" + std::to_string(ty) + ".csv"), fr);
          sources.counterfactual.emplace(
              ty, ssf::MortalitySource(fr.params,
                                       std::to_string(ty) + "_ggm"));
        } else {
          const fs::path cf_file =
              fs::path(cf_tables_dir) / (std::to_string(ty) + ".csv");
          if (!fs::exists(cf_file)) {
            errors << year << ",missing counterfactual vintage " << ty << " ("
                   << cf_file.string() << ")\n";
            resolved_years.push_back(year);
            continue;
          }
          sources.counterfactual.emplace(ty, load_table(cf_file));
        }
        sources.official.emplace(ty, std::move(off));
      }
      resolved_years.push_back(year);

      const ssf::LifeTable* t = sources.official.at(ty).table();
      const ssf::MortalitySource& cf = sources.counterfactual.at(ty);
      for (int age : {50, 65, 80}) {
        if (age >= t->start_age() && age <= t->open_age()) {
          series << year << ',' << ty << ",official,e" << age << ','
                 << ssf::num_str(t->ex_at(age)) << '\n';
        }
        if (const ssf::GgmParams* p = cf.params()) {
          series << year << ',' << ty << ",counterfactual,e" << age << ','
                 << ssf::num_str(ssf::remaining_life_expectancy(*p, age))
                 << '\n';
        } else if (const ssf::LifeTable* ct = cf.table()) {
          if (age >= ct->start_age() && age <= ct->open_age()) {
            series << year << ',' << ty << ",counterfactual,e" << age << ','
                   << ssf::num_str(ct->ex_at(age)) << '\n';
          }
        }
      }
    }

    const ssf::FactorGrid fg = grid.resolve(ssf::FactorRule::ssf_only);
    const auto comparisons = ssf::sweep(resolved_years, sources, fg, cfg);
    for (const auto& cmp : comparisons) {
      if (!cmp.error.empty()) continue;  // already in errors.csv
      const std::string base =
          std::to_string(cmp.ssf_year) + "_" + rule_name(cmp.rule);
      const std::string corner = fg.rows_are_ect ? "ECT/Age" : "CT/Age";
      ssf::write_factor_matrix_csv(dir / (base + "_official.csv"),
                                   cmp.official, corner);
      ssf::write_factor_matrix_csv(dir / (base + "_counterfactual.csv"),
                                   cmp.counterfactual, corner);
      ssf::write_factor_matrix_csv(dir / (base + "_discrepancy.csv"),
                                   cmp.discrepancy, corner);
    }
    series.close();
    errors.close();

    ssf::RunManifest m;
    m.command = "sweep";
    m.options["years"] = years;
    m.options["tables"] = tables_dir;
    if (!cf_tables_dir.empty()) m.options["cf_tables"] = cf_tables_dir;
    grid.record(m.options);
    m.options["A"] = ssf::num_str(cfg.A);
    if (terminal_m > 0.0) m.options["terminal_m"] = ssf::num_str(terminal_m);
    if (fit_counterfactual) {
      m.options["fit"] = "true";
      m.options["min_age"] = std::to_string(min_age);
      m.options["restarts"] = std::to_string(restarts);
      m.options["tol"] = ssf::num_str(tol);
    }
    finish_manifest(g, std::move(m));
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Life tables, gamma-Gompertz-Makeham fitting and Brazilian "
               "Social Security Factor metrics"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "rule-config JSON file");
  app.add_option("--out-dir", g.out_dir, "output directory (default: out)");
  app.add_option("--seed", g.seed, "seed for fitting (default: 1)");

  LifetableCmd lifetable;
  auto* lt = app.add_subcommand("lifetable",
                                "rebuild life tables from survivor columns");
  lt->add_option("inputs", lifetable.inputs, "life-table CSV files")
      ->required();
  lt->add_option("--terminal-m", lifetable.terminal_m,
                 "terminal closing rate (overrides last-row ex)");

  FitCmd fitc;
  auto* ft = app.add_subcommand("fit", "fit GGM parameters by Poisson ML");
  ft->add_option("input", fitc.input,
                 "deaths/exposures CSV (age,deaths,exposure) or life-table CSV")
      ->required();
  ft->add_option("--terminal-m", fitc.terminal_m,
                 "terminal closing rate for life-table inputs");
  ft->add_option("--min-age", fitc.min_age, "lowest age cell (default 30)");
  ft->add_option("--restarts", fitc.restarts, "multi-start count (default 32)");
  ft->add_option("--tol", fitc.tol, "optimizer tolerance (default 1e-10)");
  ft->add_flag("--sequential", fitc.sequential, "disable parallel starts");
  ft->add_option("--e-min", fitc.e_min, "fitted e-vector start age");
  ft->add_option("--e-max", fitc.e_max, "fitted e-vector end age");
  ft->add_option("--e-step", fitc.e_step, "fitted e-vector age step");

  SsfTableCmd table;
  auto* st = app.add_subcommand("ssf-table", "factor table over an age/CT grid");
  table.source.add_to(st);
  table.grid.add_to(st);
  st->add_option("--year", table.year, "SSF calendar year")->required();
  st->add_option("--rule", table.rule, "ssf, combined or both (default ssf)");
  st->add_option("--A", table.a_override, "contribution-rate constant");
  st->add_flag("--exact-age", table.exact_age,
               "evaluate model e at exact ages (no floor)");

  NraCmd nrac;
  auto* nr = app.add_subcommand("nra", "normal retirement age");
  nrac.source.add_to(nr);
  nr->add_option("--rule", nrac.rule, "ssf or points (default ssf)");
  nr->add_option("--class", nrac.worker, "worker class")->required();
  nr->add_option("--entry-age", nrac.entry_age, "labor-market entry age");
  nr->add_option("--year", nrac.year, "SSF calendar year")->required();
  nr->add_option("--A", nrac.a_override, "contribution-rate constant");

  Ct1Cmd ct1c;
  auto* ct = app.add_subcommand("ct1",
                                "contribution time that makes the factor 1");
  ct1c.source.add_to(ct);
  ct->add_option("--e", ct1c.e_value, "life expectancy (single-shot mode)");
  ct->add_option("--age", ct1c.age, "age for --e mode");
  ct->add_option("--ages", ct1c.ages, "age range LO:HI (source mode)");
  ct->add_option("--class", ct1c.worker, "worker class for feasibility flags");
  ct->add_option("--A", ct1c.a_override, "contribution-rate constant");

  CompareCmd cmp;
  auto* cp = app.add_subcommand("compare",
                                "official vs counterfactual factor tables");
  cmp.official.add_to(cp);
  cmp.counterfactual.add_to(cp, "cf-");
  cmp.grid.add_to(cp);
  cp->add_option("--year", cmp.year, "SSF calendar year")->required();
  cp->add_option("--rule", cmp.rule, "ssf, combined or both (default ssf)");
  cp->add_flag("--fit", cmp.fit_counterfactual,
               "fit the counterfactual GGM from the official table");
  cp->add_option("--min-age", cmp.min_age, "fit lower age bound");
  cp->add_option("--restarts", cmp.restarts, "fit multi-start count");
  cp->add_option("--tol", cmp.tol, "fit tolerance");
  cp->add_option("--A", cmp.a_override, "contribution-rate constant");

  SweepCmd sweep;
  auto* sw = app.add_subcommand("sweep", "multi-year comparison sweep");
  sw->add_option("--years", sweep.years, "SSF years LO:HI (default 2000:2019)");
  sw->add_option("--tables", sweep.tables_dir,
                 "directory of official tables named <year>.csv");
  sw->add_option("--cf-tables", sweep.cf_tables_dir,
                 "directory of counterfactual tables named <year>.csv");
  sw->add_flag("--fit", sweep.fit_counterfactual,
               "fit the counterfactual GGM per table year");
  sweep.grid.add_to(sw);
  sw->add_option("--terminal-m", sweep.terminal_m, "terminal closing rate");
  sw->add_option("--min-age", sweep.min_age, "fit lower age bound");
  sw->add_option("--restarts", sweep.restarts, "fit multi-start count");
  sw->add_option("--tol", sweep.tol, "fit tolerance");
  sw->add_option("--A", sweep.a_override, "contribution-rate constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (*lt) return lifetable.run(g);
    if (*ft) return fitc.run(g);
    if (*st) return table.run(g);
    if (*nr) return nrac.run(g);
    if (*ct) return ct1c.run(g);
    if (*cp) return cmp.run(g);
    if (*sw) return sweep.run(g);
  } catch (const ssf::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const ssf::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
