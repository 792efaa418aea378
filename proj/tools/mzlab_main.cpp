// mzlab — command-line front end for the interferometric error-disturbance
// laboratory.  Subcommands:
//
//   scan-chi    sweep the interferometer phase χ and emit the reconstructed
//               exit-port probability, path-presence estimates, standard
//               deviation Δ(σ_x), rms error ε, and the two sides of the
//               error-disturbance budget, with theory columns alongside
//   scan-beta   sweep the compensation angle β at fixed χ for both exit
//               ports and emit intensities plus the fitted optimum
//   verify      evaluate lhs = ε·Δ(σ_x) against the commutator bound on a χ
//               grid; exit 0 when the relation is tight (analytic) or
//               satisfied within 3σ at every point (montecarlo), 3 otherwise
//   calibrate   run the symmetric and working-beam interferograms, extract
//               the instrument contrast, beam ratio, and path populations
//
// All angles on the command line are in units of π (so --chi 0.04 means
// 0.04π), and angle-valued output columns use the same convention.  Output is
// deterministic: a fixed seed reproduces every file byte for byte.
//
// Exit codes: 0 success, 1 invalid configuration, 2 runtime failure
// (I/O, degenerate fit, zero-amplitude fringe), 3 verification failure.

#include <clocale>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <mzlab/mzlab.hpp>

namespace {

struct Options {
  double a1 = 2.0 / std::sqrt(5.0);
  double chi_start = 0.0;   // π units
  double chi_stop = 2.0;    // π units
  double chi_step = 0.02;   // π units
  double chi = 0.04;        // π units, scan-beta working point
  double beta_start = -1.0; // π units
  double beta_stop = 1.0;   // π units
  double beta_step = 0.125; // π units
  double alpha = 0.125;     // π units
  double contrast = 1.0;
  double exposure = 10000.0;
  std::uint64_t seed = 42;
  std::string mode = "analytic";
  std::string format = "csv";
  std::string out;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

mzlab::RunMode run_mode(const Options& o) {
  return o.mode == "montecarlo" ? mzlab::RunMode::MonteCarlo
                                : mzlab::RunMode::Analytic;
}

// Inclusive grid in π units; values are returned in π units (multiply by π
// for the physics).  Endpoint inclusion tolerates rounding in start + k·step.
std::vector<double> grid_pi_units(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw mzlab::OutOfRange("grid: step must be finite and > 0");
  if (!(stop >= start) || !std::isfinite(start) || !std::isfinite(stop))
    throw mzlab::OutOfRange("grid: need finite stop >= start");
  std::vector<double> g;
  for (int k = 0;; ++k) {
    const double u = start + k * step;
    if (u > stop + 1e-9 * step) break;
    g.push_back(u);
  }
  return g;
}

std::vector<double> radians(const std::vector<double>& pi_units) {
  std::vector<double> r;
  r.reserve(pi_units.size());
  for (const double u : pi_units) r.push_back(u * M_PI);
  return r;
}

std::string resolve_out(const Options& o, const std::string& default_name) {
  if (!o.out.empty()) return o.out;
  const char* dir = std::getenv("MZLAB_OUT_DIR");
  std::string d = dir == nullptr ? std::string() : std::string(dir);
  if (d.empty()) return default_name;
  if (d.back() != '/') d += '/';
  return d + default_name;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs) throw mzlab::IOFailure("cannot open output file: " + path);
  ofs << content;
  ofs.flush();
  if (!ofs) throw mzlab::IOFailure("short write to output file: " + path);
}

void validate_common(const Options& o) {
  if (!(o.a1 > 0.0) || !(o.a1 < 1.0))
    throw mzlab::OutOfRange("--a1 must lie strictly between 0 and 1");
  if (!(o.contrast >= 0.0) || !(o.contrast <= 1.0))
    throw mzlab::OutOfRange("--contrast must lie in [0,1]");
  if (!(o.exposure > 0.0))
    throw mzlab::OutOfRange("--exposure must be > 0");
}

mzlab::InterferometerConfig config_at(const Options& o, double chi_rad) {
  return mzlab::make_config(o.a1, chi_rad, o.alpha * M_PI, 0.0, 0.0,
                            o.contrast);
}

// Shared "# key=value" metadata block; every emitted file starts with the
// fully resolved run configuration so a rerun can reproduce it exactly.
std::string meta_common(const Options& o, const std::string& command) {
  std::string m;
  m += "# mzlab " + command + "\n";
  m += "# a1=" + fmt17(o.a1) + " a2=" + fmt17(std::sqrt(1.0 - o.a1 * o.a1)) +
       " alpha=" + fmt17(o.alpha) + " contrast=" + fmt17(o.contrast) + "\n";
  m += "# exposure=" + fmt17(o.exposure) + " seed=" + std::to_string(o.seed) +
       " mode=" + o.mode + " format=" + o.format + "\n";
  m += "# angles in units of pi\n";
  return m;
}

nlohmann::json json_config(const Options& o, const std::string& command) {
  nlohmann::json j;
  j["command"] = command;
  j["a1"] = o.a1;
  j["a2"] = std::sqrt(1.0 - o.a1 * o.a1);
  j["alpha"] = o.alpha;
  j["contrast"] = o.contrast;
  j["exposure"] = o.exposure;
  j["seed"] = o.seed;
  j["mode"] = o.mode;
  j["angles_in_units_of_pi"] = true;
  return j;
}

int cmd_scan_chi(const Options& o) {
  validate_common(o);
  const auto grid_pi = grid_pi_units(o.chi_start, o.chi_stop, o.chi_step);
  const auto grid_rad = radians(grid_pi);
  const mzlab::InterferometerConfig cfg = config_at(o, 0.0);
  const mzlab::UncertaintyScan scan = mzlab::run_uncertainty_scan(
      cfg, grid_rad, o.exposure, o.seed, run_mode(o));

  const std::string path =
      resolve_out(o, o.format == "json" ? "scan_chi.json" : "scan_chi.csv");
  if (o.format == "json") {
    nlohmann::json j;
    j["config"] = json_config(o, "scan-chi");
    j["config"]["chi_start"] = o.chi_start;
    j["config"]["chi_stop"] = o.chi_stop;
    j["config"]["chi_step"] = o.chi_step;
    j["calibration"] = {
        {"contrast_1to1", scan.calibration.contrast_symmetric},
        {"contrast_2to1", scan.calibration.contrast_absorber},
        {"ratio", scan.calibration.ratio},
        {"p1", scan.calibration.p1},
        {"p2", scan.calibration.p2}};
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
      const mzlab::UncertaintyPoint& p = scan.points[i];
      pts.push_back({{"chi", grid_pi[i]},
                     {"p_plus", p.p_plus},
                     {"p_plus_err", p.p_plus_err},
                     {"p_plus_theory", p.p_plus_theory},
                     {"A_opt_plus", p.a_plus},
                     {"A_opt_plus_err", p.a_plus_err},
                     {"A_opt_plus_theory", p.a_plus_theory},
                     {"A_opt_minus", p.a_minus},
                     {"A_opt_minus_err", p.a_minus_err},
                     {"A_opt_minus_theory", p.a_minus_theory},
                     {"delta_B", p.delta_b},
                     {"delta_B_theory", p.delta_b_theory},
                     {"epsilon", p.epsilon},
                     {"epsilon_sq", p.epsilon_sq},
                     {"epsilon_theory", p.epsilon_theory},
                     {"lhs", p.lhs},
                     {"lhs_err", p.lhs_err},
                     {"rhs", p.rhs},
                     {"rhs_err", p.rhs_err},
                     {"gap", p.gap},
                     {"gap_err", p.gap_err},
                     {"bound_theory", p.bound_theory}});
    }
    j["points"] = pts;
    write_file(path, j.dump(2) + "\n");
  } else {
    std::string s = meta_common(o, "scan-chi");
    s += "# chi_start=" + fmt17(o.chi_start) + " chi_stop=" +
         fmt17(o.chi_stop) + " chi_step=" + fmt17(o.chi_step) + "\n";
    s += "# calibration: contrast_1to1=" +
         fmt17(scan.calibration.contrast_symmetric) + " contrast_2to1=" +
         fmt17(scan.calibration.contrast_absorber) + " ratio=" +
         fmt17(scan.calibration.ratio) + " p1=" + fmt17(scan.calibration.p1) +
         " p2=" + fmt17(scan.calibration.p2) + "\n";
    s += "chi,p_plus,p_plus_err,p_plus_theory,"
         "A_opt_plus,A_opt_plus_err,A_opt_plus_theory,"
         "A_opt_minus,A_opt_minus_err,A_opt_minus_theory,"
         "delta_B,delta_B_theory,epsilon,epsilon_sq,epsilon_theory,"
         "lhs,lhs_err,rhs,rhs_err,gap,gap_err,bound_theory\n";
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
      const mzlab::UncertaintyPoint& p = scan.points[i];
      const double row[] = {grid_pi[i],      p.p_plus,       p.p_plus_err,
                            p.p_plus_theory, p.a_plus,       p.a_plus_err,
                            p.a_plus_theory, p.a_minus,      p.a_minus_err,
                            p.a_minus_theory, p.delta_b,     p.delta_b_theory,
                            p.epsilon,       p.epsilon_sq,   p.epsilon_theory,
                            p.lhs,           p.lhs_err,      p.rhs,
                            p.rhs_err,       p.gap,          p.gap_err,
                            p.bound_theory};
      for (std::size_t c = 0; c < std::size(row); ++c)
        s += (c == 0 ? "" : ",") + fmt17(row[c]);
      s += "\n";
    }
    write_file(path, s);
  }
  std::cout << "scan-chi: wrote " << path << " (" << scan.points.size()
            << " points)\n";
  return 0;
}

int cmd_scan_beta(const Options& o) {
  validate_common(o);
  const auto grid_pi = grid_pi_units(o.beta_start, o.beta_stop, o.beta_step);
  const auto grid_rad = radians(grid_pi);
  const mzlab::InterferometerConfig cfg = config_at(o, o.chi * M_PI);
  const mzlab::RunMode mode = run_mode(o);

  struct PortResult {
    std::string name;
    std::vector<mzlab::CountRecord> records;
    mzlab::BetaScanAnalysis analysis;
  };
  std::vector<PortResult> ports;
  for (const mzlab::ExitPort port :
       {mzlab::ExitPort::Plus, mzlab::ExitPort::Minus}) {
    PortResult r;
    r.name = port == mzlab::ExitPort::Plus ? "plus" : "minus";
    const std::uint32_t scan_id =
        port == mzlab::ExitPort::Plus ? mzlab::kScanBetaBase
                                      : mzlab::kScanBetaBase + 1;
    r.records = mzlab::run_beta_scan(cfg, port, grid_rad, o.exposure, o.seed,
                                     mode, scan_id);
    r.analysis = mzlab::analyze_beta_scan(cfg, port, r.records, mode);
    ports.push_back(std::move(r));
  }

  const std::string path =
      resolve_out(o, o.format == "json" ? "scan_beta.json" : "scan_beta.csv");
  const auto intensity = [&](const mzlab::CountRecord& rec) {
    return mode == mzlab::RunMode::MonteCarlo
               ? static_cast<double>(rec.counts) / rec.exposure
               : rec.expected / rec.exposure;
  };
  const auto counts_value = [&](const mzlab::CountRecord& rec) {
    return mode == mzlab::RunMode::MonteCarlo
               ? static_cast<double>(rec.counts)
               : rec.expected;
  };

  if (o.format == "json") {
    nlohmann::json j;
    j["config"] = json_config(o, "scan-beta");
    j["config"]["chi"] = o.chi;
    j["config"]["beta_start"] = o.beta_start;
    j["config"]["beta_stop"] = o.beta_stop;
    j["config"]["beta_step"] = o.beta_step;
    for (const PortResult& r : ports) {
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t i = 0; i < r.records.size(); ++i)
        rows.push_back({{"beta", grid_pi[i]},
                        {"intensity_up_x", intensity(r.records[i])},
                        {"expected_intensity",
                         r.records[i].expected / r.records[i].exposure},
                        {"counts", counts_value(r.records[i])}});
      const mzlab::BetaScanAnalysis& a = r.analysis;
      j["ports"][r.name] = {
          {"fit",
           {{"offset", a.fit.offset},
            {"a", a.fit.a},
            {"b", a.fit.b},
            {"amplitude", a.fit.amplitude},
            {"residual_rms", a.fit.residual_rms}}},
          {"beta_opt", a.beta_fit / M_PI},
          {"beta_opt_err", std::sqrt(a.beta_var) / M_PI},
          {"beta_corrected", a.beta_corrected / M_PI},
          {"beta_opt_exact", a.theory.exact / M_PI},
          {"beta_opt_weak_limit", a.theory.weak_limit / M_PI},
          {"A_estimate", a.a_estimate},
          {"A_estimate_err", std::sqrt(a.a_estimate_var)},
          {"points", rows}};
    }
    write_file(path, j.dump(2) + "\n");
  } else {
    std::string s = meta_common(o, "scan-beta");
    s += "# chi=" + fmt17(o.chi) + " beta_start=" + fmt17(o.beta_start) +
         " beta_stop=" + fmt17(o.beta_stop) + " beta_step=" +
         fmt17(o.beta_step) + "\n";
    for (const PortResult& r : ports) {
      const mzlab::BetaScanAnalysis& a = r.analysis;
      s += "# port=" + r.name + " fit_offset=" + fmt17(a.fit.offset) +
           " fit_a=" + fmt17(a.fit.a) + " fit_b=" + fmt17(a.fit.b) +
           " amplitude=" + fmt17(a.fit.amplitude) + "\n";
      s += "# port=" + r.name + " beta_opt=" + fmt17(a.beta_fit / M_PI) +
           " beta_opt_err=" + fmt17(std::sqrt(a.beta_var) / M_PI) +
           " beta_corrected=" + fmt17(a.beta_corrected / M_PI) +
           " beta_opt_exact=" + fmt17(a.theory.exact / M_PI) +
           " beta_opt_weak_limit=" + fmt17(a.theory.weak_limit / M_PI) +
           " A_estimate=" + fmt17(a.a_estimate) + " A_estimate_err=" +
           fmt17(std::sqrt(a.a_estimate_var)) + "\n";
    }
    s += "port,beta,intensity_up_x,expected_intensity,counts\n";
    for (const PortResult& r : ports)
      for (std::size_t i = 0; i < r.records.size(); ++i)
        s += r.name + "," + fmt17(grid_pi[i]) + "," +
             fmt17(intensity(r.records[i])) + "," +
             fmt17(r.records[i].expected / r.records[i].exposure) + "," +
             fmt17(counts_value(r.records[i])) + "\n";
    write_file(path, s);
  }
  std::cout << "scan-beta: wrote " << path << "\n";
  for (const PortResult& r : ports) {
    char line[160];
    std::snprintf(line, sizeof line,
                  "scan-beta: port %-5s beta_opt = %+.6f pi (exact %+.6f pi, "
                  "weak limit %+.6f pi)",
                  r.name.c_str(), r.analysis.beta_fit / M_PI,
                  r.analysis.theory.exact / M_PI,
                  r.analysis.theory.weak_limit / M_PI);
    std::cout << line << "\n";
  }
  return 0;
}

int cmd_verify(const Options& o) {
  validate_common(o);
  const auto grid_pi = grid_pi_units(o.chi_start, o.chi_stop, o.chi_step);
  const auto grid_rad = radians(grid_pi);
  const mzlab::InterferometerConfig cfg = config_at(o, 0.0);

  bool pass = true;
  double max_abs_gap = 0.0;
  std::string s = meta_common(o, "verify");
  s += "# chi_start=" + fmt17(o.chi_start) + " chi_stop=" + fmt17(o.chi_stop) +
       " chi_step=" + fmt17(o.chi_step) + "\n";
  nlohmann::json pts = nlohmann::json::array();

  if (run_mode(o) == mzlab::RunMode::Analytic) {
    const auto table = mzlab::verify_tightness(cfg, grid_rad);
    s += "chi,lhs,rhs,gap\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
      const mzlab::TightnessReport& r = table[i];
      max_abs_gap = std::max(max_abs_gap, std::abs(r.gap));
      s += fmt17(grid_pi[i]) + "," + fmt17(r.lhs) + "," + fmt17(r.rhs) + "," +
           fmt17(r.gap) + "\n";
      pts.push_back({{"chi", grid_pi[i]},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"gap", r.gap}});
    }
    pass = max_abs_gap < 1e-10;
  } else {
    const mzlab::UncertaintyScan scan = mzlab::run_uncertainty_scan(
        cfg, grid_rad, o.exposure, o.seed, mzlab::RunMode::MonteCarlo);
    s += "chi,lhs,lhs_err,rhs,rhs_err,gap,gap_err\n";
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
      const mzlab::UncertaintyPoint& p = scan.points[i];
      max_abs_gap = std::max(max_abs_gap, std::abs(p.gap));
      if (!(p.lhs >= p.rhs - 3.0 * p.gap_err)) pass = false;
      s += fmt17(grid_pi[i]) + "," + fmt17(p.lhs) + "," + fmt17(p.lhs_err) +
           "," + fmt17(p.rhs) + "," + fmt17(p.rhs_err) + "," + fmt17(p.gap) +
           "," + fmt17(p.gap_err) + "\n";
      pts.push_back({{"chi", grid_pi[i]},
                     {"lhs", p.lhs},
                     {"lhs_err", p.lhs_err},
                     {"rhs", p.rhs},
                     {"rhs_err", p.rhs_err},
                     {"gap", p.gap},
                     {"gap_err", p.gap_err}});
    }
  }

  const std::string path =
      resolve_out(o, o.format == "json" ? "verify.json" : "verify.csv");
  if (o.format == "json") {
    nlohmann::json j;
    j["config"] = json_config(o, "verify");
    j["config"]["chi_start"] = o.chi_start;
    j["config"]["chi_stop"] = o.chi_stop;
    j["config"]["chi_step"] = o.chi_step;
    j["points"] = pts;
    j["max_abs_gap"] = max_abs_gap;
    j["pass"] = pass;
    write_file(path, j.dump(2) + "\n");
  } else {
    s += "# max_abs_gap=" + fmt17(max_abs_gap) + " pass=" +
         (pass ? std::string("true") : std::string("false")) + "\n";
    write_file(path, s);
  }

  char line[120];
  std::snprintf(line, sizeof line, "verify: %s (max |gap| = %.3e, %zu points)",
                pass ? "PASS" : "FAIL", max_abs_gap, grid_pi.size());
  std::cout << line << "\n" << "verify: wrote " << path << "\n";
  return pass ? 0 : 3;
}

int cmd_calibrate(const Options& o) {
  validate_common(o);
  const mzlab::RunMode mode = run_mode(o);
  std::vector<double> grid;
  for (int k = 0; k < 33; ++k) grid.push_back(k * (2.0 * M_PI / 32.0));

  mzlab::InterferometerConfig sym = config_at(o, 0.0);
  sym.a1 = std::sqrt(0.5);
  sym.a2 = std::sqrt(0.5);
  const auto ig_sym = mzlab::simulate_interferogram(
      sym, grid, o.exposure, o.seed, mode, mzlab::kScanInterferogramSym);
  const auto ig_abs = mzlab::simulate_interferogram(
      config_at(o, 0.0), grid, o.exposure, o.seed, mode,
      mzlab::kScanInterferogramAbs);
  const mzlab::CalibrationResult cal =
      mzlab::calibrate_contrast(ig_sym, ig_abs, mode);
  const auto ww = mzlab::which_way(config_at(o, 0.0), o.exposure, o.seed, mode);

  nlohmann::json j;
  j["config"] = json_config(o, "calibrate");
  j["contrast_1to1"] = cal.contrast_symmetric;
  j["contrast_1to1_err"] = std::sqrt(cal.contrast_symmetric_var);
  j["contrast_2to1"] = cal.contrast_absorber;
  j["contrast_2to1_err"] = std::sqrt(cal.contrast_absorber_var);
  j["ratio"] = cal.ratio;
  j["p1"] = cal.p1;
  j["p2"] = cal.p2;
  j["which_way"] = {{"p1", ww.first}, {"p2", ww.second}};

  const std::string path = resolve_out(o, "calibrate.json");
  write_file(path, j.dump(2) + "\n");
  char line[120];
  std::snprintf(line, sizeof line,
                "calibrate: C(1:1) = %.6f, C(2:1) = %.6f, ratio = %.6f, "
                "p1 = %.6f, p2 = %.6f",
                cal.contrast_symmetric, cal.contrast_absorber, cal.ratio,
                cal.p1, cal.p2);
  std::cout << line << "\n" << "calibrate: wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");
  Options o;

  CLI::App app{
      "mzlab — simulated neutron-interferometric test of the "
      "error-disturbance uncertainty relation"};
  app.require_subcommand(1);

  app.add_option("--a1", o.a1, "path-1 amplitude (a2 = sqrt(1-a1^2))")
      ->capture_default_str();
  app.add_option("--chi-start", o.chi_start, "phase grid start / pi")
      ->capture_default_str();
  app.add_option("--chi-stop", o.chi_stop, "phase grid stop / pi")
      ->capture_default_str();
  app.add_option("--chi-step", o.chi_step, "phase grid step / pi")
      ->capture_default_str();
  app.add_option("--chi", o.chi, "working phase / pi (scan-beta)")
      ->capture_default_str();
  app.add_option("--beta-start", o.beta_start, "compensation grid start / pi")
      ->capture_default_str();
  app.add_option("--beta-stop", o.beta_stop, "compensation grid stop / pi")
      ->capture_default_str();
  app.add_option("--beta-step", o.beta_step, "compensation grid step / pi")
      ->capture_default_str();
  app.add_option("--alpha", o.alpha, "probe coupling angle / pi")
      ->capture_default_str();
  app.add_option("--contrast", o.contrast, "instrument contrast multiplier")
      ->capture_default_str();
  app.add_option("--exposure", o.exposure, "expected counts per grid point")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "master seed for the count streams")
      ->capture_default_str();
  app.add_option("--mode", o.mode, "analytic | montecarlo")
      ->check(CLI::IsMember({"analytic", "montecarlo"}))
      ->capture_default_str();
  app.add_option("--format", o.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", o.out,
                 "output file (default: per-command name inside "
                 "$MZLAB_OUT_DIR, or the working directory)");

  CLI::App* scan_chi = app.add_subcommand(
      "scan-chi", "sweep the phase and reconstruct the uncertainty budget");
  CLI::App* scan_beta = app.add_subcommand(
      "scan-beta", "sweep the compensation angle at fixed phase, both ports");
  CLI::App* verify = app.add_subcommand(
      "verify", "check the error-disturbance relation on a phase grid");
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "extract contrast, beam ratio, and path populations");
  for (CLI::App* sub : {scan_chi, scan_beta, verify, calibrate})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (scan_chi->parsed()) return cmd_scan_chi(o);
    if (scan_beta->parsed()) return cmd_scan_beta(o);
    if (verify->parsed()) return cmd_verify(o);
    if (calibrate->parsed()) return cmd_calibrate(o);
    std::cerr << "error: no subcommand selected\n";
    return 1;
  } catch (const mzlab::OutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mzlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
