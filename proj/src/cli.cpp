#include "qwalk/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwalk/airy.hpp"
#include "qwalk/edge.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/fronts.hpp"
#include "qwalk/hydro.hpp"

namespace qwalk::cli {

using nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(what + ": cannot parse '" + text + "' as a number");
  }
  return x;
}

// Output files are written in binary mode so line endings stay LF.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw ConfigError("cannot open " + path.string() + " for writing");
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

std::string num(double x) { return format_number(x); }
std::string num(std::int64_t x) { return std::to_string(x); }

// JSON numbers go through the same formatter as the CSV cells.
ordered_json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return ordered_json::parse(format_number(x));
}

struct Common {
  double g = 0.0;
  std::string phi = "pi/2";
  double t = 0.0;
  std::size_t lattice = 0;  // 0 = auto
  std::string out = ".";
  unsigned jobs = 0;        // 0 = hardware concurrency
  double tol_root = 1e-12;
  double tol_order = 1e-8;
  double tol_degen = 1e-9;
  double tol_g = 1e-9;

  [[nodiscard]] FrontOptions front_options() const {
    FrontOptions o;
    o.tol_root = tol_root;
    o.tol_order = tol_order;
    o.tol_degen = tol_degen;
    return o;
  }
  [[nodiscard]] unsigned workers() const {
    return jobs ? jobs : std::max(1u, std::thread::hardware_concurrency());
  }
  [[nodiscard]] std::optional<std::size_t> lattice_opt() const {
    return lattice ? std::optional<std::size_t>(lattice) : std::nullopt;
  }
  void validate() const {
    if (!(std::isfinite(g) && g >= 0.0)) throw ConfigError("g: must be finite and >= 0, got " + num(g));
    if (!(std::isfinite(t) && t >= 0.0)) throw ConfigError("t: must be finite and >= 0, got " + num(t));
    for (auto [name, v] : {std::pair{"tol-root", tol_root}, {"tol-order", tol_order},
                           {"tol-degen", tol_degen}, {"tol-g", tol_g}}) {
      if (!(v > 0.0)) throw ConfigError(std::string(name) + ": must be > 0");
    }
    if (lattice != 0 && lattice % 2 != 0) throw ConfigError("lattice: must be even");
  }
  [[nodiscard]] std::filesystem::path out_dir() const {
    std::filesystem::path dir(out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!std::filesystem::is_directory(dir)) throw ConfigError("out: cannot create directory " + out);
    return dir;
  }
};

void add_common(CLI::App* cmd, Common& c, bool with_t = true) {
  cmd->add_option("--g", c.g, "NNN/NN coupling ratio (>= 0)");
  cmd->add_option("--phi", c.phi, "NNN phase: number or multiple of pi, e.g. pi/2");
  if (with_t) cmd->add_option("--t", c.t, "evolution time");
  cmd->add_option("--lattice", c.lattice, "ring size (0 = automatic)");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--jobs", c.jobs, "worker threads (0 = all cores)");
  cmd->add_option("--tol-root", c.tol_root, "|w''| bound at a front");
  cmd->add_option("--tol-order", c.tol_order, "derivative magnitude treated as zero");
  cmd->add_option("--tol-degen", c.tol_degen, "velocity tolerance for degenerate fronts");
  cmd->add_option("--tol-g", c.tol_g, "bisection tolerance for the critical coupling");
}

ordered_json front_json(const ExtremalFront& f, double t) {
  ordered_json j;
  j["q_star"] = jnum(f.q_star);
  j["velocity"] = jnum(f.velocity);
  j["order"] = f.order;
  j["kappa"] = jnum(f.kappa);
  j["chirality"] = std::string(to_string(f.chirality));
  j["position"] = jnum(f.velocity * t);
  return j;
}

// ---------------------------------------------------------------- evolve

int cmd_evolve(const Common& c) {
  c.validate();
  const WalkParams p{c.g, parse_angle(c.phi)};
  EvolveOptions eo;
  eo.lattice = c.lattice_opt();
  const auto wf = evolve(p, c.t, eo);
  const auto prob = probability_density(wf);
  const auto cur = current_density(wf);
  const auto cpd = cumulative(prob);
  const auto ccd = cumulative(cur);
  std::vector<ObservableField> m;
  for (int k = 1; k <= 3; ++k) m.push_back(cumulative_moment(prob, k));

  const auto dir = c.out_dir();
  CsvWriter csv(dir / "density.csv", {"n", "p", "j", "Phi", "J", "M1", "M2", "M3"});
  for (std::size_t i = 0; i < prob.values.size(); ++i) {
    csv.row({num(prob.site(i)), num(prob.values[i]), num(cur.values[i]), num(cpd.values[i]),
             num(ccd.values[i]), num(m[0].values[i]), num(m[1].values[i]), num(m[2].values[i])});
  }

  ordered_json s;
  s["g"] = jnum(p.g);
  s["phi"] = jnum(p.phi);
  s["t"] = jnum(c.t);
  s["lattice"] = wf.size();
  ordered_json mu = ordered_json::array();
  for (int k = 0; k <= 4; ++k) mu.push_back(jnum(position_moment(prob, k)));
  s["mu"] = mu;
  s["gamma"] = c.t > 0.0 ? jnum(skewness(prob)) : ordered_json(nullptr);
  const auto diagram = cone_topology(p, c.front_options());
  s["topology"] = std::string(to_string(diagram.topology));
  s["fronts"] = ordered_json::array();
  for (const auto& f : diagram.fronts) s["fronts"].push_back(front_json(f, c.t));
  write_json(dir / "summary.json", s);
  return 0;
}

// ---------------------------------------------------------------- fronts

struct FrontsArgs {
  double g_min = 0.0;
  double g_max = 0.5;
  int g_steps = 51;
  std::string phi_list;
};

int cmd_fronts(const Common& c, const FrontsArgs& a) {
  c.validate();
  if (a.g_steps < 1 || !(a.g_min <= a.g_max) || !(a.g_min >= 0.0) || !std::isfinite(a.g_max)) {
    throw ConfigError("g range: need 0 <= g-min <= g-max and g-steps >= 1");
  }
  const std::vector<double> phis = a.phi_list.empty() ? std::vector<double>{parse_angle(c.phi)}
                                                      : parse_angle_list(a.phi_list);
  const auto steps = static_cast<std::size_t>(a.g_steps);
  const FrontOptions fo = c.front_options();

  struct Point {
    double phi, g;
    std::vector<ExtremalFront> fronts;
    std::string topology;
    std::string status = "ok";
  };
  std::vector<Point> points(phis.size() * steps);
  parallel_for(points.size(), c.workers(), [&](std::size_t i) {
    Point& pt = points[i];
    pt.phi = phis[i / steps];
    pt.g = steps == 1 ? a.g_min
                      : a.g_min + (a.g_max - a.g_min) * static_cast<double>(i % steps) /
                                      static_cast<double>(steps - 1);
    try {
      const auto d = cone_topology(WalkParams{pt.g, pt.phi}, fo);
      pt.fronts = d.fronts;
      pt.topology = std::string(to_string(d.topology));
    } catch (const std::exception& e) {
      pt.status = std::string("error: ") + e.what();
      std::replace(pt.status.begin(), pt.status.end(), ',', ';');
    }
  });

  struct Gc {
    double phi;
    double canonical_phi;
    std::optional<double> g_c;
    std::string status = "ok";
  };
  std::vector<Gc> gcs(phis.size());
  parallel_for(gcs.size(), c.workers(), [&](std::size_t i) {
    gcs[i].phi = phis[i];
    gcs[i].canonical_phi = canonicalize(1.0, phis[i]).params.phi;
    try {
      gcs[i].g_c = critical_coupling(gcs[i].canonical_phi, c.tol_g, fo);
    } catch (const std::exception& e) {
      gcs[i].status = std::string("error: ") + e.what();
    }
  });

  const auto dir = c.out_dir();
  CsvWriter csv(dir / "fronts.csv", {"phi", "g", "front_count", "front_index", "q_star", "velocity",
                                     "order", "kappa", "chirality", "topology", "status"});
  for (const auto& pt : points) {
    if (pt.fronts.empty()) {
      csv.row({num(pt.phi), num(pt.g), "0", "", "", "", "", "", "", pt.topology, pt.status});
      continue;
    }
    for (std::size_t k = 0; k < pt.fronts.size(); ++k) {
      const auto& f = pt.fronts[k];
      csv.row({num(pt.phi), num(pt.g), std::to_string(pt.fronts.size()), std::to_string(k),
               num(f.q_star), num(f.velocity), std::to_string(f.order), num(f.kappa),
               std::string(to_string(f.chirality)), pt.topology, pt.status});
    }
  }

  ordered_json j;
  j["tol_g"] = jnum(c.tol_g);
  j["critical_couplings"] = ordered_json::array();
  for (const auto& gc : gcs) {
    ordered_json e;
    e["phi"] = jnum(gc.phi);
    e["canonical_phi"] = jnum(gc.canonical_phi);
    e["g_c"] = gc.g_c ? jnum(*gc.g_c) : ordered_json(nullptr);
    e["status"] = gc.status;
    j["critical_couplings"].push_back(e);
  }
  write_json(dir / "gc.json", j);
  return 0;
}

// ---------------------------------------------------------------- scaling

struct ScalingArgs {
  std::string times;  // comma-separated; falls back to --t
  double window_factor = 8.0;
};

ordered_json deviation_json(const Deviation& d) {
  ordered_json j;
  j["sup_outside"] = jnum(d.sup_outside);
  j["l1_outside"] = jnum(d.l1_outside);
  j["sup_inside"] = jnum(d.sup_inside);
  return j;
}

int cmd_scaling(const Common& c, const ScalingArgs& a) {
  c.validate();
  std::vector<double> times;
  if (a.times.empty()) {
    times.push_back(c.t);
  } else {
    std::stringstream ss(a.times);
    for (std::string item; std::getline(ss, item, ',');) times.push_back(parse_number(item, "times"));
  }
  for (double t : times) {
    if (!(t > 0.0)) throw ConfigError("t: scaling comparison needs t > 0");
  }
  if (!(a.window_factor > 0.0)) throw ConfigError("window-factor: must be > 0");

  const WalkParams p{c.g, parse_angle(c.phi)};
  BulkOptions bo;
  bo.window_factor = a.window_factor;
  bo.lattice = c.lattice_opt();
  bo.keep_rows = true;
  std::vector<BulkReport> reports(times.size());
  parallel_for(times.size(), c.workers(), [&](std::size_t i) { reports[i] = compare_bulk(p, times[i], bo); });

  const auto dir = c.out_dir();
  CsvWriter csv(dir / "bulk.csv",
                {"t", "n", "nu", "Phi_num", "Phi_hydro", "J_num", "J_hydro", "M1_num", "M1_hydro",
                 "M2_num", "M2_hydro", "M3_num", "M3_hydro", "excluded"});
  for (const auto& r : reports) {
    for (const auto& row : r.rows) {
      csv.row({num(r.t), num(row.n), num(row.nu), num(row.phi_num), num(row.phi_hydro), num(row.j_num),
               num(row.j_hydro), num(row.m_num[0]), num(row.m_hydro[0]), num(row.m_num[1]),
               num(row.m_hydro[1]), num(row.m_num[2]), num(row.m_hydro[2]), row.excluded ? "1" : "0"});
    }
  }

  ordered_json j;
  j["g"] = jnum(p.g);
  j["phi"] = jnum(p.phi);
  j["reports"] = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json e;
    e["t"] = jnum(r.t);
    e["lattice"] = r.lattice;
    e["window_factor"] = jnum(r.window_factor);
    e["windows"] = ordered_json::array();
    for (const auto& w : r.windows) {
      e["windows"].push_back({{"velocity", jnum(w.velocity)},
                              {"order", w.order},
                              {"center", jnum(w.center)},
                              {"half_width", jnum(w.half_width)}});
    }
    e["Phi"] = deviation_json(r.phi);
    e["J"] = deviation_json(r.j);
    for (int k = 0; k < 3; ++k) e["M" + std::to_string(k + 1)] = deviation_json(r.m[k]);
    e["kinks"] = ordered_json::array();
    for (const auto& k : r.kinks) {
      e["kinks"].push_back({{"nu", jnum(k.nu)},
                            {"slope_left_numeric", jnum(k.slope_left_numeric)},
                            {"slope_right_numeric", jnum(k.slope_right_numeric)},
                            {"slope_left_hydro", jnum(k.slope_left_hydro)},
                            {"slope_right_hydro", jnum(k.slope_right_hydro)}});
    }
    e["nu_half_hydro"] = jnum(r.nu_half_hydro);
    e["nu_half_numeric"] = jnum(r.nu_half_numeric);
    j["reports"].push_back(e);
  }
  write_json(dir / "bulk_report.json", j);
  return 0;
}

// ---------------------------------------------------------------- edge

struct EdgeArgs {
  std::string front = "left";  // left | right | all
  double window_factor = 14.0;
};

int cmd_edge(const Common& c, const EdgeArgs& a) {
  c.validate();
  if (!(c.t > 0.0)) throw ConfigError("t: edge profiles need t > 0");
  if (a.front != "left" && a.front != "right" && a.front != "all") {
    throw ConfigError("front: expected left, right or all, got '" + a.front + "'");
  }
  if (!(a.window_factor > 0.0)) throw ConfigError("window-factor: must be > 0");

  const WalkParams p{c.g, parse_angle(c.phi)};
  const auto diagram = cone_topology(p, c.front_options());

  // One entry per distinct velocity; degenerate partners collapse into it.
  std::vector<ExtremalFront> chosen;
  for (const auto& f : diagram.fronts) {
    const bool dup = std::any_of(chosen.begin(), chosen.end(), [&](const ExtremalFront& e) {
      return std::abs(e.velocity - f.velocity) <= c.tol_degen;
    });
    if (dup) continue;
    const bool left = std::abs(f.velocity - diagram.v_lm) <= c.tol_degen;
    const bool right = std::abs(f.velocity - diagram.v_rm) <= c.tol_degen;
    if (a.front == "all" || (a.front == "left" && left) || (a.front == "right" && right)) {
      chosen.push_back(f);
    }
  }

  std::optional<CumulativeFields> fields;
  if (std::any_of(chosen.begin(), chosen.end(), [](const ExtremalFront& f) { return f.order % 2 == 1; })) {
    EvolveOptions eo;
    eo.lattice = c.lattice_opt();
    fields = CumulativeFields::from(evolve(p, c.t, eo));
  }

  const auto dir = c.out_dir();
  CsvWriter edge_csv(dir / "edge.csv", {"front", "xi", "dPhi_scaled_num", "dPhi_scaled_pred",
                                        "dJ_scaled_num", "dJ_scaled_pred"});
  CsvWriter stair_csv(dir / "staircase.csv",
                      {"front", "source", "step", "position", "height", "width", "area", "status"});
  ordered_json summary;
  summary["g"] = jnum(p.g);
  summary["phi"] = jnum(p.phi);
  summary["t"] = jnum(c.t);
  summary["topology"] = std::string(to_string(diagram.topology));
  summary["fronts"] = ordered_json::array();

  for (std::size_t idx = 0; idx < chosen.size(); ++idx) {
    const auto& f = chosen[idx];
    const std::string label = std::to_string(idx);
    const int multiplicity = static_cast<int>(diagram.fronts_at(f.velocity, c.tol_degen).size());
    ordered_json e = front_json(f, c.t);
    e["front"] = idx;
    e["scaling_exponent"] = jnum(1.0 / (f.order + 2));
    e["degeneracy_factor"] = multiplicity;

    if (f.order % 2 == 0) {
      e["status"] = "no real staircase for even-order front";
      stair_csv.row({label, "", "", "", "", "", "", "even_order_no_staircase"});
      summary["fronts"].push_back(e);
      continue;
    }

    const double s = edge_scale(f, c.t);
    // Keep the window clear of every other front.
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& o : diagram.fronts) {
      const double dv = std::abs(o.velocity - f.velocity);
      if (dv > c.tol_degen) gap = std::min(gap, dv * c.t);
    }
    const long window = std::max(5L, static_cast<long>(std::min(std::ceil(a.window_factor * s), 0.5 * gap)));
    const auto num_profile = measure_edge(*fields, diagram, f, window);
    const auto pred = predict_edge(f, c.t, num_profile.xi, num_profile.multiplicity);

    double sup = 0.0;
    for (std::size_t i = 0; i < pred.xi.size(); ++i) {
      edge_csv.row({label, num(pred.xi[i]), num(num_profile.dphi_scaled[i]), num(pred.dphi_scaled[i]),
                    num(num_profile.dj_scaled[i]), num(pred.dj_scaled[i])});
      if (pred.xi[i] >= 0.0 && pred.xi[i] <= 6.0) {
        sup = std::max(sup, std::abs(num_profile.dphi_scaled[i] - pred.dphi_scaled[i]));
      }
    }

    e["scale"] = jnum(s);
    e["window"] = window;
    e["sup_deviation_0_6"] = jnum(sup);
    const std::pair<StaircaseSource, const char*> sources[] = {{StaircaseSource::probability, "cpd"},
                                                                {StaircaseSource::current, "ccd"}};
    for (const auto& [src, name] : sources) {
      const auto steps = extract_staircase(num_profile, src);
      ordered_json areas = ordered_json::array();
      if (steps.empty()) stair_csv.row({label, name, "", "", "", "", "", "fewer_than_two_steps"});
      for (const auto& st : steps) {
        stair_csv.row({label, name, std::to_string(st.index), num(st.position), num(st.height),
                       num(st.width), num(st.area), "ok"});
        areas.push_back(jnum(st.area));
      }
      e[std::string("areas_") + name] = areas;
    }
    e["status"] = "ok";
    summary["fronts"].push_back(e);
  }
  write_json(dir / "edge_summary.json", summary);
  return 0;
}

// Splices `--config FILE` entries in front of the command-line flags so that
// flags given explicitly take precedence (every option keeps its last value).
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> cfg_args;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("config: missing file name");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
    } else {
      continue;
    }
    for (const auto& [k, v] : read_config_file(path)) cfg_args.push_back("--" + k + "=" + v);
    --i;
  }
  // Config options belong to the subcommand, which is the first bare word.
  const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind("-", 0) != 0; });
  if (sub == args.end()) {
    if (!cfg_args.empty()) throw ConfigError("config: no subcommand given");
    return args;
  }
  args.insert(sub + 1, cfg_args.begin(), cfg_args.end());
  return args;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: " + path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw ConfigError("config: " + path + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

double parse_angle(const std::string& text) {
  std::string s = trim(text);
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return parse_number(s, "angle");
  std::string coeff = trim(s.substr(0, pos));
  std::string rest = trim(s.substr(pos + 2));
  double factor = 1.0;
  if (coeff == "-") {
    factor = -1.0;
  } else if (!coeff.empty() && coeff != "+") {
    if (coeff.back() == '*') coeff.pop_back();
    factor = parse_number(coeff, "angle");
  }
  if (!rest.empty()) {
    if (rest.front() != '/') throw ConfigError("angle: cannot parse '" + text + "'");
    const double d = parse_number(rest.substr(1), "angle");
    if (d == 0.0) throw ConfigError("angle: division by zero in '" + text + "'");
    factor /= d;
  }
  return factor * kPi;
}

std::vector<double> parse_angle_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_angle(item));
  if (out.empty()) throw ConfigError("angle list: empty");
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

int run(int argc, char** argv) {
  CLI::App app{"Continuous-time quantum walk with complex next-nearest-neighbour hopping"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", "flat key = value file; explicit flags win");

  Common common;
  FrontsArgs fronts_args;
  ScalingArgs scaling_args;
  EdgeArgs edge_args;

  auto* evolve_cmd = app.add_subcommand("evolve", "evolve the localized state; density.csv, summary.json");
  add_common(evolve_cmd, common);

  auto* fronts_cmd = app.add_subcommand("fronts", "extremal fronts over a g sweep; fronts.csv, gc.json");
  add_common(fronts_cmd, common, false);
  fronts_cmd->add_option("--g-min", fronts_args.g_min);
  fronts_cmd->add_option("--g-max", fronts_args.g_max);
  fronts_cmd->add_option("--g-steps", fronts_args.g_steps);
  fronts_cmd->add_option("--phi-list", fronts_args.phi_list, "comma-separated phases (overrides --phi)");

  auto* scaling_cmd = app.add_subcommand("scaling", "numeric vs hydrodynamic bulk; bulk.csv, bulk_report.json");
  add_common(scaling_cmd, common);
  scaling_cmd->add_option("--times", scaling_args.times, "comma-separated times (overrides --t)");
  scaling_cmd->add_option("--window-factor", scaling_args.window_factor);

  auto* edge_cmd = app.add_subcommand("edge", "edge profiles and staircases; edge.csv, staircase.csv");
  add_common(edge_cmd, common);
  edge_cmd->add_option("--front", edge_args.front, "left, right or all");
  edge_cmd->add_option("--window-factor", edge_args.window_factor, "window half-width in units of the edge scale");

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (evolve_cmd->parsed()) return cmd_evolve(common);
    if (fronts_cmd->parsed()) return cmd_fronts(common, fronts_args);
    if (scaling_cmd->parsed()) return cmd_scaling(common, scaling_args);
    if (edge_cmd->parsed()) return cmd_edge(common, edge_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const GuardViolation& e) {
    std::cerr << "guard violation: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace qwalk::cli
