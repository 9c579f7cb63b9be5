// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any
// criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/airy.hpp>
#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qwalk/airy.hpp"
#include "qwalk/cli.hpp"
#include "qwalk/edge.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/fronts.hpp"
#include "qwalk/hydro.hpp"

using namespace qwalk;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// ------------------------------------------------------------------ 1
void moments(Outcome& o) {
  struct Case {
    double g, phi, t;
  };
  double worst_mu1 = 0.0, worst_rel = 0.0;
  for (const Case& c : {Case{0.0, kPi / 2, 50}, Case{1.0 / 16, kPi / 2, 100}, Case{0.25, kPi / 2, 10},
                        Case{0.25, 0.0, 50}}) {
    const auto prob = probability_density(evolve({c.g, c.phi}, c.t));
    const double g = c.g, t = c.t;
    const double mu2 = 2 * (1 + 4 * g * g) * t * t;
    const double mu3 = 12 * g * t * t * t * std::sin(c.phi);
    const double mu4 = 6 * (1 + 16 * g * g + 16 * g * g * g * g) * std::pow(t, 4) + 2 * (1 + 16 * g * g) * t * t;
    worst_mu1 = std::max(worst_mu1, std::abs(position_moment(prob, 1)));
    worst_rel = std::max(worst_rel, std::abs(position_moment(prob, 2) / mu2 - 1));
    // A vanishing mu3 is measured relative to mu2^{3/2}.
    const double scale3 = mu3 != 0.0 ? std::abs(mu3) : std::pow(mu2, 1.5);
    worst_rel = std::max(worst_rel, std::abs(position_moment(prob, 3) - mu3) / scale3);
    worst_rel = std::max(worst_rel, std::abs(position_moment(prob, 4) / mu4 - 1));
  }
  o.detail << "max|mu1|=" << fmt(worst_mu1) << " max rel err mu2..mu4=" << fmt(worst_rel);
  o.require(worst_mu1 < 1e-8, "mu1 < 1e-8");
  o.require(worst_rel < 1e-6, "relative error < 1e-6");
}

// ------------------------------------------------------------------ 2
double numeric_skewness(double g, double t) { return skewness(probability_density(evolve({g, kPi / 2}, t))); }

void skewness_check(Outcome& o) {
  double worst = 0.0, spread = 0.0;
  for (double g : {0.1, 0.25, 0.35, 0.6}) {
    const double expected = 3 * std::sqrt(2.0) * g / std::pow(1 + 4 * g * g, 1.5);
    double lo = 1e9, hi = -1e9;
    for (double t = 10; t <= 100; t += 10) {
      const double gamma = numeric_skewness(g, t);
      worst = std::max(worst, std::abs(gamma - expected));
      lo = std::min(lo, gamma);
      hi = std::max(hi, gamma);
    }
    spread = std::max(spread, hi - lo);
  }
  // Golden-section search for the maximizing coupling.
  const double r = (std::sqrt(5.0) - 1) / 2;
  double a = 0.1, b = 1.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = numeric_skewness(c, 10), fd = numeric_skewness(d, 10);
  while (b - a > 1e-6) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a), fc = numeric_skewness(c, 10);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a), fd = numeric_skewness(d, 10);
    }
  }
  const double argmax = 0.5 * (a + b);
  o.detail << "max|gamma - closed form|=" << fmt(worst) << " t-spread=" << fmt(spread) << " argmax g="
           << fmt(argmax, 6);
  o.require(worst < 1e-6, "closed form within 1e-6");
  o.require(spread < 1e-6, "t-independent within 1e-6");
  o.require(std::abs(argmax - 1 / (2 * std::sqrt(2.0))) < 1e-3, "argmax 1/(2 sqrt 2) within 1e-3");
}

// ------------------------------------------------------------------ 3
void critical(Outcome& o) {
  const double phis[] = {0.0, kPi / 6, kPi / 4, kPi / 3, 5 * kPi / 12, kPi / 2};
  const double expected[] = {0.25, 0.239, 0.225, 0.204, 0.176, 0.125};
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double gc = critical_coupling(phis[i], 1e-9);
    worst = std::max(worst, std::abs(gc - expected[i]));
    o.detail << fmt(gc, 5) << (i < 5 ? "," : "");
  }
  const double exact = std::abs(critical_coupling(kPi / 2, 1e-11) - 0.125);
  o.detail << " max dev=" << fmt(worst) << " |g_c(pi/2)-1/8|=" << fmt(exact);
  o.require(worst < 1e-3, "table within 1e-3");
  o.require(exact < 1e-9, "pi/2 value within 1e-9");
}

// ------------------------------------------------------------------ 4
void closed_forms(Outcome& o) {
  double worst_v = 0.0, worst_extra = 0.0;
  std::string orders;
  for (double g : {1.0 / 16, 1.0 / 8, 0.25, 0.5}) {
    const auto fronts = find_extremal_fronts({g, kPi / 2});
    std::vector<int> expect;
    for (const auto& f : fronts) {
      if (std::abs(f.q_star - kPi / 2) < 1e-9) worst_v = std::max(worst_v, std::abs(f.velocity - (-2 + 4 * g)));
      if (std::abs(f.q_star + kPi / 2) < 1e-9) worst_v = std::max(worst_v, std::abs(f.velocity - (2 + 4 * g)));
      if (std::abs(std::abs(f.q_star) - kPi / 2) >= 1e-9) {
        worst_extra = std::max(worst_extra, std::abs(std::sin(f.q_star) - 1 / (8 * g)));
        worst_extra = std::max(worst_extra, std::abs(f.velocity - (-4 * g - 1 / (8 * g))));
      }
    }
    std::string o_str;
    // Orders listed from q = pi/2, then -pi/2, then the extra pair.
    std::vector<const ExtremalFront*> ordered;
    for (const auto& f : fronts) if (std::abs(f.q_star - kPi / 2) < 1e-9) ordered.push_back(&f);
    for (const auto& f : fronts) if (std::abs(f.q_star + kPi / 2) < 1e-9) ordered.push_back(&f);
    for (const auto& f : fronts) if (std::abs(std::abs(f.q_star) - kPi / 2) >= 1e-9) ordered.push_back(&f);
    for (const auto* f : ordered) o_str += std::to_string(f->order);
    orders += (orders.empty() ? "" : ",") + o_str;
    const std::string want = g < 0.125 ? "11" : g == 0.125 ? "31" : "1111";
    o.require(o_str == want, "orders at g=" + fmt(g) + " expected " + want + " got " + o_str);
    if (ordered.size() != fronts.size() || fronts.size() < 2) o.require(false, "fronts at +-pi/2 missing");
  }
  o.detail << "velocity err=" << fmt(worst_v) << " extra-root err=" << fmt(worst_extra) << " orders=" << orders;
  o.require(worst_v <= 1e-12, "v(+-pi/2) within 1e-12");
  o.require(worst_extra <= 1e-10, "extra roots within 1e-10");
}

// ------------------------------------------------------------------ 5
void bulk(Outcome& o) {
  for (double g : {0.0, 1.0 / 16, 1.0 / 8, 0.25}) {
    const auto r = compare_bulk({g, kPi / 2}, 2000.0);
    o.detail << "g=" << fmt(g) << ":Phi " << fmt(r.phi.sup_outside, 2) << "/" << fmt(r.phi.sup_inside, 2) << " J "
             << fmt(r.j.sup_outside, 2) << "/" << fmt(r.j.sup_inside, 2) << "; ";
    o.require(r.phi.sup_outside < 0.01 && r.j.sup_outside < 0.01, "outside < 0.01 at g=" + fmt(g));
    o.require(r.phi.sup_inside > r.phi.sup_outside && r.j.sup_inside > r.j.sup_outside,
              "inside > outside at g=" + fmt(g));
  }
}

// ------------------------------------------------------------------ 6
void hierarchy(Outcome& o) {
  double worst = 0.0;
  for (const WalkParams& p : {WalkParams{0.0, 0.0}, WalkParams{1.0 / 16, kPi / 2}, WalkParams{0.25, kPi / 2},
                              WalkParams{0.3, 0.5}}) {
    const HydroModel model(p);
    auto M = [&](int k, double x) { return k == 0 ? model.cpd(x) : model.moment(x, k); };
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> nu(model.diagram().v_lm, model.diagram().v_rm);
    for (int tested = 0; tested < 30;) {
      const double x = nu(rng);
      bool near = false;
      for (const auto& f : model.diagram().fronts) near |= std::abs(f.velocity - x) < 0.05;
      if (near) continue;
      ++tested;
      const double h = 1e-4;
      for (int k = 0; k <= 2; ++k) {
        const double lhs = (M(k + 1, x + h) - M(k + 1, x - h)) / (2 * h);
        const double rhs = x * (M(k, x + h) - M(k, x - h)) / (2 * h);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  BulkOptions bo;
  bo.keep_rows = true;
  const auto r = compare_bulk({1.0 / 16, kPi / 2}, 5000.0, bo);
  double m1 = 0.0;
  for (const auto& row : r.rows) {
    if (!row.excluded) m1 = std::max(m1, std::abs(row.m_num[0] - row.j_num));
  }
  o.detail << "hierarchy residual=" << fmt(worst) << " max|M1/t - J|=" << fmt(m1);
  o.require(worst < 1e-4, "hierarchy within 1e-4");
  o.require(m1 < 0.01, "M1/t = J within 0.01");
}

// ------------------------------------------------------------------ 7
double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  const auto it = std::lower_bound(x.begin(), x.end(), at);
  if (it == x.begin()) return y.front();
  if (it == x.end()) return y.back();
  const auto i = static_cast<std::size_t>(it - x.begin());
  const double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return (1 - w) * y[i - 1] + w * y[i];
}

double sup_against_prediction(const EdgeProfile& num, double lo, double hi) {
  const auto pred = predict_edge(num.front, num.t, num.xi, num.multiplicity);
  double sup = 0.0;
  for (std::size_t i = 0; i < num.xi.size(); ++i) {
    if (num.xi[i] >= lo && num.xi[i] <= hi) sup = std::max(sup, std::abs(num.dphi_scaled[i] - pred.dphi_scaled[i]));
  }
  return sup;
}

struct EdgeRun {
  FrontDiagram diagram;
  CumulativeFields fields;
};

EdgeRun run_edge(double g, double t) {
  const WalkParams p{g, kPi / 2};
  return {cone_topology(p), CumulativeFields::from(evolve(p, t))};
}

EdgeProfile edge_of(const EdgeRun& run, const ExtremalFront& f) {
  const long window = static_cast<long>(std::ceil(14 * edge_scale(f, run.fields.cpd.t)));
  return measure_edge(run.fields, run.diagram, f, window);
}

bool areas_match(Outcome& o, const std::string& label, const std::vector<StaircaseStep>& steps,
                 const std::vector<double>& expected, double divisor, double tol) {
  std::ostringstream got;
  bool ok = steps.size() >= expected.size();
  for (std::size_t m = 0; m < expected.size() && m < steps.size(); ++m) {
    const double a = steps[m].area / divisor;
    got << fmt(a, 4) << (m + 1 < expected.size() ? " " : "");
    ok = ok && std::abs(a - expected[m]) <= tol;
  }
  o.detail << label << "[" << got.str() << "] ";
  o.require(ok, label + " within " + fmt(tol));
  return ok;
}

void edges(Outcome& o) {
  const double t = 1e4;

  // (a) first-order left front below the critical coupling
  const auto r16 = run_edge(1.0 / 16, t);
  const auto left16 = edge_of(r16, r16.diagram.fronts.front());
  const double sup_a = sup_against_prediction(left16, 0.0, 6.0);
  o.detail << "(a) sup=" << fmt(sup_a) << "; ";
  o.require(sup_a < 0.02, "(a) sup < 0.02");

  // (b) third-order left front at the critical coupling, t and 2t
  const auto r8 = run_edge(0.125, t);
  const auto& third = r8.diagram.fronts.front();
  o.require(third.order == 3, "(b) left front is third order");
  const auto e1 = edge_of(r8, third);
  const auto r8b = run_edge(0.125, 2 * t);
  const auto e2 = edge_of(r8b, r8b.diagram.fronts.front());
  double collapse = 0.0;
  for (std::size_t i = 0; i < e1.xi.size(); ++i) {
    if (e1.xi[i] < 0.0 || e1.xi[i] > 8.0) continue;
    collapse = std::max(collapse, std::abs(e1.dphi_scaled[i] - interpolate(e2.xi, e2.dphi_scaled, e1.xi[i])));
  }
  const double sup_b = std::max(sup_against_prediction(e1, 0.0, 6.0), sup_against_prediction(e2, 0.0, 6.0));
  o.detail << "(b) collapse=" << fmt(collapse) << " sup=" << fmt(sup_b) << "; ";
  o.require(collapse < 0.03, "(b) t/2t overlay < 0.03");
  o.require(sup_b < 0.03, "(b) match to A3 integral < 0.03");

  // (c) degenerate left pair above the critical coupling
  const auto r4 = run_edge(0.25, t);
  const auto deg = edge_of(r4, r4.diagram.fronts.front());
  const double sup_c = sup_against_prediction(deg, 0.0, 6.0);
  o.detail << "(c) multiplicity=" << deg.multiplicity << " sup=" << fmt(sup_c) << "; ";
  o.require(deg.multiplicity == 2, "(c) two degenerate fronts");
  o.require(sup_c < 0.04, "(c) match to twice the single-front curve < 0.04");

  // (d) step areas
  const auto right8 = edge_of(r8, r8.diagram.fronts.back());
  areas_match(o, "g1/16 L CPD", extract_staircase(left16, StaircaseSource::probability),
              {0.9383, 0.8997, 0.9103, 0.9165, 0.9138}, 1.0, 0.05);
  areas_match(o, "g1/16 L CCD", extract_staircase(left16, StaircaseSource::current),
              {0.9450, 0.9064, 0.9086, 0.9186, 0.9239}, 1.0, 0.05);
  areas_match(o, "g1/8 L CPD", extract_staircase(e1, StaircaseSource::probability),
              {0.8218, 0.7543, 0.7704, 0.7914, 0.7905}, 1.0, 0.05);
  areas_match(o, "g1/8 L CCD", extract_staircase(e1, StaircaseSource::current),
              {0.8540, 0.7755, 0.7781, 0.8043, 0.8183}, 1.0, 0.05);
  areas_match(o, "g1/8 R CPD", extract_staircase(right8, StaircaseSource::probability),
              {0.9519, 0.9140, 0.9187, 0.9249, 0.9302}, 1.0, 0.05);
  areas_match(o, "g1/8 R CCD", extract_staircase(right8, StaircaseSource::current),
              {0.9450, 0.9064, 0.9130, 0.9192, 0.9238}, 1.0, 0.05);
  const std::vector<double> single = {0.9468, 0.9086, 0.9155, 0.9220, 0.9270};
  areas_match(o, "g1/4 L CPD/2", extract_staircase(deg, StaircaseSource::probability), single, 2.0, 0.08);
  areas_match(o, "g1/4 L CCD/2", extract_staircase(deg, StaircaseSource::current), single, 2.0, 0.08);
}

// ------------------------------------------------------------------ 8
void dense_oracle(Outcome& o) {
  using C = std::complex<double>;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> gd(0.0, 1.0), pd(-kPi, kPi), td(0.5, 5.0);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const WalkParams p{gd(rng), pd(rng)};
    const double t = td(rng);
    const int L = 64;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(L, L);
    const C hop2 = p.g * std::exp(C(0.0, p.phi));
    for (int i = 0; i < L; ++i) {
      H(i, (i + 1) % L) += 1.0;
      H((i + 1) % L, i) += 1.0;
      H(i, (i + 2) % L) += hop2;
      H((i + 2) % L, i) += std::conj(hop2);
    }
    const Eigen::MatrixXcd U = (C(0.0, -t) * H).exp();
    EvolveOptions eo;
    eo.lattice = L;
    eo.enforce_guard = false;
    const auto wf = evolve(p, t, eo);
    for (int i = 0; i < L; ++i) worst = std::max(worst, std::abs(wf.amps[static_cast<std::size_t>(i)] - U(i, L / 2)));
  }
  o.detail << "max amplitude difference=" << fmt(worst);
  o.require(worst < 1e-8, "per-amplitude 1e-8");
}

// ------------------------------------------------------------------ 9
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int call_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qwalk");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

void properties(Outcome& o) {
  double norm = 0.0, current = 0.0;
  bool monotone = true;
  for (const WalkParams& p : {WalkParams{0.0, 0.0}, WalkParams{1.0 / 16, kPi / 2}, WalkParams{0.25, kPi / 2},
                              WalkParams{0.7, 0.4}}) {
    for (double t : {10.0, 200.0, 1000.0}) {
      const auto wf = evolve(p, t);
      const auto prob = probability_density(wf);
      norm = std::max(norm, std::abs(position_moment(prob, 0) - 1));
      double total = 0.0;
      for (double x : current_density(wf).values) total += x;
      current = std::max(current, std::abs(total));
      const auto cpd = cumulative(prob);
      for (std::size_t i = 1; i < cpd.values.size(); ++i) monotone = monotone && cpd.values[i] >= cpd.values[i - 1];
    }
    const auto curve = scaling_curve(p);
    for (std::size_t i = 1; i < curve.nu.size(); ++i) monotone = monotone && curve.phi_scaled[i] >= curve.phi_scaled[i - 1];
  }
  double airy = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = -10.0 + 15.0 * i / 99.0;
    airy = std::max(airy, std::abs(generalized_airy(1, x) - boost::math::airy_ai(x)));
  }
  double ode = 0.0;
  for (int k : {1, 3}) {
    for (double x = -8.0; x <= 4.0 + 1e-12; x += 0.25) ode = std::max(ode, airy_ode_residual(k, x));
  }

  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "qwalk-acceptance";
  bool identical = true;
  std::vector<std::string> outputs[2];
  for (int run = 0; run < 2; ++run) {
    const std::string jobs = run == 0 ? "1" : "4";
    const fs::path dir = base / ("jobs" + jobs);
    fs::remove_all(dir);
    identical = identical && call_cli({"fronts", "--phi-list", "0,pi/4,pi/2", "--g-min", "0", "--g-max", "0.5",
                                       "--g-steps", "41", "--jobs", jobs, "--out", dir.string()}) == 0;
    identical = identical && call_cli({"scaling", "--g", "0.25", "--times", "200,400,800", "--jobs", jobs,
                                       "--out", dir.string()}) == 0;
    for (const char* f : {"fronts.csv", "gc.json", "bulk.csv", "bulk_report.json"}) outputs[run].push_back(slurp(dir / f));
  }
  identical = identical && outputs[0] == outputs[1];
  fs::remove_all(base);

  o.detail << "norm=" << fmt(norm) << " current=" << fmt(current) << " monotone=" << (monotone ? "yes" : "no")
           << " |A1-Ai|=" << fmt(airy) << " ode=" << fmt(ode) << " deterministic=" << (identical ? "yes" : "no");
  o.require(norm < 1e-12, "normalization 1e-12");
  o.require(current < 1e-8, "total current 1e-8");
  o.require(monotone, "Phi monotone");
  o.require(airy < 1e-9, "A1 = Ai within 1e-9");
  o.require(ode < 1e-5, "ODE residual < 1e-5");
  o.require(identical, "byte-identical CSV across worker counts");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"moment closed forms", moments},
      {"skewness", skewness_check},
      {"critical couplings", critical},
      {"front closed forms", closed_forms},
      {"bulk hydrodynamic collapse", bulk},
      {"conservation hierarchy", hierarchy},
      {"edge scaling and staircase", edges},
      {"dense oracle equivalence", dense_oracle},
      {"property suite", properties},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d %s: %s | %s\n", index, name, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
