// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracles.hpp"
#include "tamech/analytic.hpp"
#include "tamech/errors.hpp"
#include "tamech/montecarlo.hpp"
#include "tamech/solver.hpp"

using namespace tamech;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Outcome exact_constants() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto bench = analytic::myerson_benchmark();
  const auto check = [&](const char* name, double got, double want) {
    o.require(std::abs(got - want) <= 1e-12,
              std::string(name) + " off by " + fmt_double(std::abs(got - want)));
  };
  check("seller initial payoff", analytic::seller_expected_payoff(1.0, 0.0), 1.0 / 3.0);
  check("benchmark seller revenue", bench.seller_revenue, 5.0 / 12.0);
  check("benchmark bidder payment", bench.bidder_expected_payment, 5.0 / 24.0);
  check("benchmark bidder payoff", bench.bidder_expected_payoff, 13.0 / 24.0);
  check("winner expectation", analytic::winner_expectation_oracle(), 2.0 / 3.0);
  const double elapsed = seconds_since(start);
  o.require(elapsed < 0.1, "took " + fmt_double(elapsed) + " s");
  if (o.pass) o.detail = "all five within 1e-12, reserve " + fmt_double(bench.optimal_reserve);
  return o;
}

Outcome optimal_control() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  double worst_c = 0.0;
  double worst_value = 0.0;
  for (const double beta : {0.5, 1.0, 2.0, 4.0, 6.0}) {
    const auto opt = solver::maximize_control(solver::seller_payoff_function(beta), 0.0,
                                              solver::default_control_upper(beta), 1e-8);
    const double dc = std::abs(opt.c_star - beta * beta / 36.0);
    const double dv = std::abs(opt.value - (1.0 / 3.0) * (1.0 + beta * beta / 12.0));
    worst_c = std::max(worst_c, dc);
    worst_value = std::max(worst_value, dv);
    o.require(dc < 1e-7, "c* off at beta " + fmt_double(beta));
    o.require(dv < 1e-10, "payoff off at beta " + fmt_double(beta));
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 1.0, "took " + fmt_double(elapsed) + " s");
  if (o.pass) {
    o.detail = "max |c*-b^2/36|=" + fmt_double(worst_c) + " max |u-u*|=" + fmt_double(worst_value);
  }
  return o;
}

Outcome thresholds() {
  Outcome o;
  const double s = std::sqrt(3.0);
  const double b = std::sqrt(27.0 / 2.0);
  o.require(std::abs(analytic::seller_payoff_at_optimum(s) - 5.0 / 12.0) <= 1e-12,
            "seller payoff at sqrt(3)");
  o.require(std::abs(analytic::bidder_payoff_at_optimum(b) - 13.0 / 24.0) <= 1e-12,
            "bidder payoff at sqrt(27/2)");
  o.require(!analytic::pareto_compare(s).seller_improves, "seller improves at equality");
  o.require(analytic::pareto_compare(std::nextafter(s, 10.0) * (1 + 1e-12)).seller_improves,
            "seller does not improve just above sqrt(3)");
  o.require(!analytic::pareto_compare(b).bidder_improves, "bidder improves at equality");
  o.require(analytic::pareto_compare(b * (1 + 1e-12)).bidder_improves,
            "bidder does not improve just above sqrt(27/2)");
  o.require(!analytic::pareto_compare(b * (1 - 1e-12)).bidder_improves,
            "bidder improves just below sqrt(27/2)");
  if (o.pass) o.detail = "strict flips at sqrt(3) and sqrt(27/2)";
  return o;
}

Outcome monte_carlo_agreement() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto run = [](double c) {
    return montecarlo::estimate_payoffs(
        {AuctionScenario::standard_setting(2.0, c), 200000, 20240601}, 0);
  };
  const auto zero = run(0.0);
  const auto opt = run(1.0 / 9.0);
  const auto z = [](const Estimate& e, double truth) {
    return std::abs(e.value - truth) / e.std_error;
  };
  const double z0 = z(zero.seller_payoff, 1.0 / 3.0);
  const double z1 = z(opt.seller_payoff, 4.0 / 9.0);
  const double z2 = z(opt.bidder_payoffs[0], 5.0 / 18.0);
  const double z3 = z(opt.bidder_payoffs[1], 5.0 / 18.0);
  o.require(z0 < 4.0, "seller at c=0: z=" + fmt_double(z0));
  o.require(z1 < 4.0, "seller at c*: z=" + fmt_double(z1));
  o.require(z2 < 4.0, "bidder 1 at c*: z=" + fmt_double(z2));
  o.require(z3 < 4.0, "bidder 2 at c*: z=" + fmt_double(z3));
  const double elapsed = seconds_since(start);
  o.require(elapsed < 10.0, "took " + fmt_double(elapsed) + " s");
  if (o.pass) {
    o.detail = "z-scores " + fmt_double(z0) + ", " + fmt_double(z1) + ", " + fmt_double(z2) +
               ", " + fmt_double(z3) + " in " + fmt_double(elapsed) + " s";
  }
  return o;
}

Outcome equilibrium_recovery() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  for (const auto& [beta, c] : {std::pair{0.0, 0.0}, {2.0, 1.0 / 9.0}, {4.0, 4.0 / 9.0}}) {
    try {
      const auto grid = solver::best_response_iteration(AuctionScenario::standard_setting(beta, c),
                                                        {512, 1e-6, 100});
      const double d = grid.sup_distance([](double t) { return t / 2.0; });
      o.require(grid.residual < 1e-6, "residual at beta " + fmt_double(beta));
      o.require(d < 2e-3, "sup distance " + fmt_double(d) + " at beta " + fmt_double(beta));
      detail += "sup=" + fmt_double(d) + " ";
    } catch (const ConvergenceError& e) {
      o.require(false, "no convergence at beta " + fmt_double(beta));
    }
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 30.0, "took " + fmt_double(elapsed) + " s");
  if (o.pass) o.detail = detail + "in " + fmt_double(elapsed) + " s";
  return o;
}

Outcome incentive_compatibility() {
  Outcome o;
  double worst = -1.0;
  for (const double beta : {0.0, 1.0, 2.0, 4.0}) {
    for (const double c : {0.0, beta * beta / 36.0}) {
      const auto r = solver::ic_regret_search(AuctionScenario::standard_setting(beta, c), 101, 101);
      worst = std::max(worst, r.max_regret);
      o.require(r.max_regret <= 1e-12, "regret " + fmt_double(r.max_regret));
    }
  }
  const auto perturbed = solver::ic_regret_search(AuctionScenario::standard_setting(2.0, 1.0 / 9.0),
                                                  101, 101, solver::kFullReportScf);
  o.require(perturbed.max_regret > 0.0, "full-report payment shows no regret");
  if (o.pass) {
    o.detail = "max regret " + fmt_double(worst) + ", full-report control " +
               fmt_double(perturbed.max_regret);
  }
  return o;
}

Outcome revelation() {
  Outcome o;
  const auto s = AuctionScenario::standard_setting(2.0, 1.0 / 9.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<> u(0.0, 1.0);
  std::vector<std::vector<double>> profiles(1000);
  for (auto& p : profiles) p = {u(rng), u(rng)};
  const auto eq = solver::check_revelation(s, profiles, solver::BidStrategy::equilibrium(s));
  const auto truthful = solver::check_revelation(s, profiles, solver::BidStrategy::truthful());
  o.require(eq.consistent, std::to_string(eq.mismatches) + " equilibrium mismatches");
  o.require(!truthful.consistent, "b = theta_c control matched the SCF");
  if (o.pass) {
    o.detail = "1000 profiles consistent (gap " + fmt_double(eq.max_transfer_gap) +
               "), control mismatches " + std::to_string(truthful.mismatches);
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "tamech_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "scenario.cfg";
  std::ofstream(cfg) << "beta = 2\ncontrol_value = optimal\nn_bidders = 2\n"
                        "replications = 200000\nseed = 7\noutput_path = "
                     << (dir / "report").string() << "\n";
  std::vector<std::pair<std::string, std::string>> outputs;
  for (const unsigned workers : {1u, 1u, 4u}) {
    std::ostringstream out, err;
    const int rc = cli::cmd_simulate(cfg, workers, out, err);
    o.require(rc == 0, "simulate exit " + std::to_string(rc) + ": " + err.str());
    outputs.emplace_back(slurp(dir / "report.csv"), slurp(dir / "report.json"));
  }
  for (std::size_t i = 1; i < outputs.size(); ++i) {
    o.require(outputs[i].first == outputs[0].first, "CSV differs on run " + std::to_string(i));
    o.require(outputs[i].second == outputs[0].second, "JSON differs on run " + std::to_string(i));
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = "byte-identical CSV/JSON over 2 runs x workers {1, 4}";
  return o;
}

// Condensed versions of every module's invariants, at least 100 cases each.
Outcome property_suites() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<> u(0.0, 1.0);
  int checked = 0;
  const auto property = [&](const std::string& name, int cases, const std::function<bool()>& f) {
    int failures = 0;
    for (int i = 0; i < cases; ++i) failures += f() ? 0 : 1;
    o.require(failures == 0, name + " failed " + std::to_string(failures) + "x");
    ++checked;
  };

  // model
  property("identity at zero control", 100, [&] {
    const double t = u(rng);
    return apply_type_function(TypeFunction(10 * u(rng)), t, 0.0) == t;
  });
  property("argmax invariance", 100, [&] {
    std::vector<double> v(2 + rng() % 6);
    for (auto& x : v) x = std::round(u(rng) * 8) / 8;
    return scf_outcome(v).winner() == oracle::brute_force_argmax(v);
  });
  property("budget balance", 100, [&] {
    std::vector<double> v(2 + rng() % 6);
    for (auto& x : v) x = u(rng);
    const auto out = scf_outcome(v);
    double total = out.seller_transfer;
    for (double t : out.transfers) total += t;
    return total == 0.0;
  });
  property("monotone adjustment", 100, [&] {
    const TypeFunction tf(5 * u(rng));
    const double t = u(rng);
    const double c1 = u(rng);
    return tf(t, c1) <= tf(t, c1 + u(rng));
  });

  // analytic
  property("composition identity", 100, [&] {
    const double b = 8 * u(rng);
    return std::abs(analytic::seller_payoff_at_optimum(b) -
                    analytic::seller_expected_payoff(b, analytic::optimal_control(b))) <= 1e-12;
  });
  property("first-order condition", 100, [&] {
    const double b = 0.5 + 3.5 * u(rng);
    const double slope = oracle::central_difference(
        [b](double c) { return analytic::seller_expected_payoff(b, c); },
        analytic::optimal_control(b), 1e-5);
    return std::abs(slope) < 1e-6;
  });
  property("quadrature vs closed form", 100, [&] {
    const double r = u(rng);
    return std::abs(analytic::myerson_expected_payment_quadrature(
                        r, ValuationDistribution::uniform(0, 1), 2) -
                    analytic::myerson_expected_payment(r)) <= 1e-9;
  });
  property("benchmark consistency", 1, [&] {
    const auto b = analytic::myerson_benchmark();
    return b.seller_revenue == 2.0 * b.bidder_expected_payment;
  });

  // solver
  property("golden-section bracket", 100, [&] {
    const double peak = u(rng);
    const auto r = golden_section_maximize([peak](double x) { return -(x - peak) * (x - peak); },
                                           0.0, 1.0, 1e-8);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (std::size_t k = 1; k < r.widths.size(); ++k) {
      if (std::abs(r.widths[k] / r.widths[k - 1] - inv_phi) > 1e-6) return false;
    }
    return r.widths.back() < 1e-8;
  });
  property("optimizer vs closed form", 100, [&] {
    const double b = 0.1 + 6 * u(rng);
    const auto opt = solver::maximize_control(solver::seller_payoff_function(b), 0.0,
                                              solver::default_control_upper(b));
    return std::abs(opt.c_star - b * b / 36.0) < 1e-7;
  });
  property("regret nonpositive", 1, [&] {
    for (const double b : {0.0, 1.0, 2.0, 4.0}) {
      for (const double c : {0.0, b * b / 36.0, 1.0}) {
        if (solver::ic_regret_search(AuctionScenario::standard_setting(b, c), 101, 101).max_regret >
            1e-12) {
          return false;
        }
      }
    }
    return true;
  });
  {
    const auto s = AuctionScenario::standard_setting(2.0, 0.25);
    const auto grid = solver::best_response_iteration(s);
    const auto base = solver::best_response_iteration(s.with_control(0.0));
    property("best response deviation scan", 5, [&] {
      std::vector<double> types(20);
      for (auto& t : types) t = s.adjust(u(rng));
      return solver::deviation_scan(s, grid, types).max_gain <= 10.0 * grid.spacing();
    });
    property("equilibrium scaling", 1, [&] {
      const double k = s.type_scale();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid.bids[i] - k * base.bids[i]) > 1e-6 * k) return false;
      }
      return true;
    });
  }

  // montecarlo
  property("determinism across workers", 100, [&] {
    const montecarlo::SimulationConfig cfg{AuctionScenario::standard_setting(4 * u(rng), u(rng)),
                                           1 + rng() % 10000, rng()};
    const auto a = montecarlo::estimate_payoffs(cfg, 1);
    const auto b = montecarlo::estimate_payoffs(cfg, 3);
    return a.seller_payoff.value == b.seller_payoff.value &&
           a.bidder_payoffs[1].std_error == b.bidder_payoffs[1].std_error &&
           a.seller_payoff.value == a.winning_bid.value - cfg.scenario.control_value();
  });
  property("winner utility nonnegative", 100, [&] {
    const auto s = AuctionScenario::standard_setting(4 * u(rng), u(rng));
    const auto r = montecarlo::run_auction_once(s, solver::BidStrategy::equilibrium(s), rng(), 0);
    return r.utilities[r.outcome.winner()] >= 0.0;
  });
  {
    int hits = 0;
    for (int t = 0; t < 100; ++t) {
      const montecarlo::SimulationConfig cfg{AuctionScenario::standard_setting(2.0, 1.0 / 9.0), 5000,
                                             static_cast<std::uint64_t>(t)};
      const auto e = montecarlo::estimate_payoffs(cfg).seller_payoff;
      hits += std::abs(e.value - 4.0 / 9.0) < 4.0 * e.std_error ? 1 : 0;
    }
    o.require(hits >= 95, "estimator consistency " + std::to_string(hits) + "/100");
    ++checked;
  }

  // cli
  property("CSV round trip", 100, [&] {
    PayoffReport r;
    r.control_value = u(rng);
    r.seller_payoff = {u(rng) - 0.5, u(rng) * 1e-3};
    r.winning_bid = {u(rng), u(rng)};
    r.bidder_payoffs = {{u(rng), u(rng)}, {u(rng), u(rng)}};
    r.replications = rng();
    r.seed = rng();
    const auto q = cli::report_quantities(r);
    const auto back = cli::parse_csv(cli::render_csv(q));
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (back[k].estimate != q[k].estimate || back[k].std_error != q[k].std_error) return false;
    }
    return back.size() == q.size();
  });

  if (o.pass) o.detail = std::to_string(checked) + " properties held";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"AC1 exact constants", exact_constants},
      {"AC2 optimal control", optimal_control},
      {"AC3 thresholds", thresholds},
      {"AC4 Monte Carlo agreement", monte_carlo_agreement},
      {"AC5 equilibrium recovery", equilibrium_recovery},
      {"AC6 incentive compatibility", incentive_compatibility},
      {"AC7 revelation consistency", revelation},
      {"AC8 determinism", determinism},
      {"AC9 property suites", property_suites},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %-30s %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
