// Command-line surface for the homodyne detection library.
//
// Conventions (also see README): the photon difference is auxiliary minus
// signal, outcomes live on the lattice k / (sqrt2 r), and the beam-splitter
// phase is fixed to zero with the oscillator phase theta folded onto the
// signal state. HD_MAX_DIM caps the per-mode truncation dimension.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "homodyne/convergence.hpp"
#include "homodyne/state_spec.hpp"

namespace {

using namespace homodyne;

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitDiagnostic = 4;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Complex parse_complex_pair(const std::string& s) {
  std::istringstream in(s);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw CLI::ValidationError("expected re,im pair: " + s);
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw CLI::ValidationError("expected re,im pair: " + s);
  }
  return {re, im};
}

std::vector<double> parse_r_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw CLI::ValidationError("empty r list");
  return out;
}

void write_or_stdout(const std::optional<std::string>& path, const std::string& content) {
  if (path) {
    std::ofstream out(*path);
    if (!out) throw std::runtime_error("cannot open output file: " + *path);
    out << content;
  } else {
    std::cout << content;
  }
}

std::string distribution_csv(const LatticeDistribution& d) {
  std::ostringstream out;
  out << "k,x,p\n";
  for (Eigen::Index k = d.kmin; k <= d.kmax; ++k)
    out << k << "," << fmt(d.atom_position(k)) << "," << fmt(d.weight_at(k)) << "\n";
  out << "# deficit=" << fmt(d.deficit) << "\n";
  return out.str();
}

json verdict_json(const MomentLimitVerdict& v) {
  return {{"k", v.k},           {"empirical", v.empirical}, {"target", v.target},
          {"gaps", v.gaps},     {"tolerance", v.tolerance}, {"pass", v.pass}};
}

json report_json(const ConvergenceReport& rep) {
  json out;
  out["r_list"] = rep.r_list;
  out["theta"] = rep.theta;
  out["kmax"] = rep.kmax;
  out["tolerance_schedule"] =
      "tol_k = max(1e-6, 2 * target_scale * <N> * k^2 / r_max^2); KS tolerances are "
      "empirical (lattice-spacing heuristic)";
  json states = json::array();
  for (const auto& s : rep.states) {
    json sj;
    sj["label"] = s.label;
    json ml = json::array();
    for (const auto& v : s.moment_limits) ml.push_back(verdict_json(v));
    sj["moment_limits"] = ml;
    sj["ks_per_r"] = s.ks_per_r;
    sj["interval_cdf_gaps_per_r"] = s.interval_gaps_per_r;
    sj["bounded_fn_gaps_per_r"] = s.bounded_fn_gaps_per_r;
    sj["limit_moments_determinacy"] = {
        {"statistic", s.limit_determinacy.statistic},
        {"consistent_with_determinacy", s.limit_determinacy.consistent_with_determinacy}};
    json fr = json::array();
    for (const auto& p : s.finite_r_probes)
      fr.push_back({{"statistic", p.statistic},
                    {"consistent_with_determinacy", p.consistent_with_determinacy}});
    sj["finite_r_determinacy"] = fr;
    sj["all_pass"] = s.all_pass;
    states.push_back(sj);
  }
  out["states"] = states;
  if (!rep.mixed_gaps_per_r.empty()) out["mixed_state_gaps_per_r"] = rep.mixed_gaps_per_r;
  out["counterexample"] = {{"lattice_mass_E", rep.lattice_mass_detector},
                           {"lattice_mass_Q", rep.lattice_mass_quadrature},
                           {"converges_on_lattice", rep.converges_on_lattice},
                           {"converges_on_intervals", rep.converges_on_intervals}};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced homodyne detection statistics on truncated Fock spaces"};
  app.require_subcommand(1);

  std::string state_text = R"({"type":"fock","n":0})";
  std::string states_path;
  std::string r_text, r_list_text = "2,4,8";
  double theta = 0.0;
  long kmax = 6;
  bool kmax_override = false;
  std::optional<std::string> output;
  double exp_a = 0.0;
  std::string beta_text = "0,0";
  double t_single = std::numeric_limits<double>::quiet_NaN();

  auto add_common = [&](CLI::App* cmd, bool needs_r) {
    if (needs_r) cmd->add_option("--r", r_text, "oscillator amplitude r > 0")->required();
    cmd->add_option("--theta", theta, "oscillator phase in [0, 2pi)");
    cmd->add_option("--output,-o", output, "output path (default stdout)");
  };

  auto* sim = app.add_subcommand("simulate", "exact E^z lattice statistics for a state");
  sim->add_option("--state", state_text, "inline JSON state description");
  add_common(sim, true);

  auto* mom = app.add_subcommand("moments", "empirical vs operator moments of E^z");
  mom->add_option("--state", state_text, "inline JSON state description");
  mom->add_option("--kmax", kmax, "highest moment order (cap 8 unless --force-kmax)");
  mom->add_flag("--force-kmax", kmax_override, "allow kmax above the default cap");
  mom->add_option("--exp-a", exp_a, "also evaluate the exponential moment bound at this a > 0");
  add_common(mom, true);

  auto* conv = app.add_subcommand("converge", "four weak-convergence diagnostics over an r sweep");
  conv->add_option("--state", state_text, "inline JSON state description");
  conv->add_option("--r-list", r_list_text, "comma-separated increasing r values");
  conv->add_option("--theta", theta, "oscillator phase");
  conv->add_option("--output,-o", output, "output path (default stdout)");

  auto* cal = app.add_subcommand("calibrate", "full asymptotic-measurement calibration harness");
  cal->add_option("--states", states_path, "JSON file: array of state descriptions")->required();
  cal->add_option("--r-list", r_list_text, "comma-separated increasing r values");
  cal->add_option("--theta", theta, "oscillator phase");
  cal->add_option("--kmax", kmax, "highest moment order");
  cal->add_option("--output,-o", output, "output path (default stdout)");
  std::optional<std::string> moments_csv;
  cal->add_option("--moments-csv", moments_csv, "also write flat moment table CSV here");

  auto* chf = app.add_subcommand("charfunc", "closed-form vs empirical characteristic function");
  chf->add_option("--beta", beta_text, "coherent amplitude as re,im");
  chf->add_option("--t", t_single, "single evaluation point (default: CSV over [-5,5])");
  add_common(chf, true);

  auto* ctr = app.add_subcommand("counterexample", "lattice-mass counterexample at fixed r");
  add_common(ctr, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sim->parsed()) {
      const double r = std::stod(r_text);
      const SignalStateSpec state = parse_state_spec(state_text);
      const LatticeDistribution d = homodyne_distribution(state, r, theta);
      std::string csv = distribution_csv(d);
      json summary = {{"r", r},
                      {"theta", theta},
                      {"mean", lattice_mean(d)},
                      {"variance", lattice_variance(d)},
                      {"deficit", d.deficit}};
      if (output) {
        write_or_stdout(output, csv);
        std::cout << summary.dump(2) << "\n";
      } else {
        std::cout << csv << summary.dump(2) << "\n";
      }
    } else if (mom->parsed()) {
      if (kmax > 8 && !kmax_override) {
        std::cerr << "moments: kmax > 8 requires --force-kmax\n";
        return kExitConfig;
      }
      const double r = std::stod(r_text);
      const SignalStateSpec state = parse_state_spec(state_text);
      const LatticeDistribution d = homodyne_distribution(state, r, theta);
      json rep;
      rep["r"] = r;
      rep["theta"] = theta;
      rep["deficit"] = d.deficit;
      std::vector<double> empirical, op;
      for (Eigen::Index k = 1; k <= kmax; ++k) {
        empirical.push_back(empirical_moment(d, k));
        double val = 0.0;
        for (const auto& c : state.components) {
          const Matrix mk = moment_operator_matrix(r, theta, k, c.state.dim());
          val += c.weight * c.state.amps.dot(mk * c.state.amps).real();
        }
        op.push_back(val);
      }
      rep["moments"] = {{"empirical", empirical}, {"operator", op}};
      if (exp_a > 0.0) {
        // coherent-family bound with |beta|^2 read off as the mean photon number
        double lhs = 0.0;
        for (Eigen::Index k = d.kmin; k <= d.kmax; ++k)
          lhs += d.weight_at(k) * std::exp(exp_a * std::abs(d.atom_position(k)));
        const double rhs = std::exp((state.mean_photon_number() + r * r) *
                                    (std::exp(exp_a / (std::sqrt(2.0) * r)) - 1.0));
        rep["exp_bound"] = {
            {"a", exp_a}, {"lhs", lhs}, {"rhs", rhs}, {"holds", lhs <= rhs + 1e-9}};
      }
      write_or_stdout(output, rep.dump(2) + "\n");
    } else if (conv->parsed()) {
      const std::vector<double> r_list = parse_r_list(r_list_text);
      const SignalStateSpec state = parse_state_spec(state_text);
      const auto intervals = standard_interval_battery();
      json rep;
      rep["r_list"] = r_list;
      rep["theta"] = theta;
      json per_r = json::array();
      for (double r : r_list) {
        per_r.push_back({{"r", r},
                         {"ks", ks_distance(state, theta, r)},
                         {"interval_gaps", cdf_interval_diagnostic(state, theta, r, intervals)},
                         {"bounded_fn_gaps", bounded_function_diagnostic(state, theta, r)}});
      }
      rep["diagnostics"] = per_r;
      write_or_stdout(output, rep.dump(2) + "\n");
    } else if (cal->parsed()) {
      const std::vector<double> r_list = parse_r_list(r_list_text);
      std::ifstream in(states_path);
      if (!in) {
        std::cerr << "calibrate: cannot open states file " << states_path << "\n";
        return kExitConfig;
      }
      json jstates = json::parse(in);
      std::vector<std::pair<std::string, SignalStateSpec>> states;
      for (std::size_t i = 0; i < jstates.size(); ++i)
        states.push_back({"state" + std::to_string(i), parse_state_spec(jstates[i])});
      const ConvergenceReport rep = calibrate(states, theta, r_list, kmax);
      write_or_stdout(output, report_json(rep).dump(2) + "\n");
      if (moments_csv) {
        std::ostringstream csv;
        csv << "state,r,k,empirical,target,gap\n";
        for (const auto& s : rep.states)
          for (const auto& v : s.moment_limits)
            for (std::size_t i = 0; i < rep.r_list.size(); ++i)
              csv << s.label << "," << fmt(rep.r_list[i]) << "," << v.k << ","
                  << fmt(v.empirical[i]) << "," << fmt(v.target) << "," << fmt(v.gaps[i]) << "\n";
        std::ofstream out(*moments_csv);
        out << csv.str();
      }
      bool all = rep.converges_on_intervals && !rep.converges_on_lattice;
      for (const auto& s : rep.states) all = all && s.all_pass;
      if (!all) return kExitDiagnostic;
    } else if (chf->parsed()) {
      const double r = std::stod(r_text);
      const Complex beta = parse_complex_pair(beta_text);
      const SignalStateSpec state =
          SignalStateSpec::pure(coherent_state(beta, auto_dim(std::norm(beta))));
      const LatticeDistribution d = homodyne_distribution(state, r, theta);
      std::ostringstream out;
      out << "t,re_closed,im_closed,re_empirical,im_empirical\n";
      const auto emit = [&](double t) {
        const Complex closed = characteristic_function(beta, r, theta, t);
        const Complex emp = empirical_cf(d, t);
        out << fmt(t) << "," << fmt(closed.real()) << "," << fmt(closed.imag()) << ","
            << fmt(emp.real()) << "," << fmt(emp.imag()) << "\n";
      };
      if (std::isfinite(t_single)) {
        emit(t_single);
      } else {
        for (int i = 0; i <= 200; ++i) emit(-5.0 + 10.0 * i / 200.0);
      }
      write_or_stdout(output, out.str());
    } else if (ctr->parsed()) {
      const double r = std::stod(r_text);
      const SignalStateSpec vac = SignalStateSpec::pure(fock_state(0, 1));
      const double mass_e = lattice_mass(vac, r, theta);
      json rep = {{"r", r},
                  {"lattice_mass_E", mass_e},
                  {"lattice_mass_Q", gaussian_lattice_mass()},
                  {"converges_on_lattice", std::abs(mass_e - gaussian_lattice_mass()) < 1e-9}};
      write_or_stdout(output, rep.dump(2) + "\n");
    }
  } catch (const TruncationBudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
