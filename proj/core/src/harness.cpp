#include "scs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "scs/csv.hpp"
#include "scs/svg.hpp"

namespace scs::harness {

namespace fs = std::filesystem;
using io::Csv;
using io::format_double;

namespace {

Scenario load_or_default(const std::string& path) {
  if (path.empty()) return default_scenario();
  return load_scenario_file(path);
}

std::string slot_phase(const mission::MissionResult& r, size_t i) {
  return phase_name(r.phases[i]);
}

}  // namespace

void write_mission_files(const std::string& dir, const mission::MissionResult& r,
                         const Scenario& s) {
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "mission_result.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write mission_result.json");
    out << mission::mission_to_json(r, s);
  }
  {
    Csv csv;
    csv.header = {"slot", "phase", "rate_bits"};
    for (size_t i = 0; i < r.rates.size(); ++i) {
      csv.rows.push_back({std::to_string(i + 1), slot_phase(r, i),
                          format_double(r.rates[i])});
    }
    io::write_csv((fs::path(dir) / "rates.csv").string(), csv);
  }
  {
    Csv csv;
    csv.header = {"slot", "x_a", "y_a", "x_j", "y_j"};
    for (size_t n = 0; n < r.alice.pts.size(); ++n) {
      const Vec2& a = r.alice.pts[n];
      std::string xj = "nan", yj = "nan";
      if (r.has_jack) {
        xj = format_double(r.jack.pts[n].x());
        yj = format_double(r.jack.pts[n].y());
      }
      csv.rows.push_back({std::to_string(n), format_double(a.x()),
                          format_double(a.y()), xj, yj});
    }
    io::write_csv((fs::path(dir) / "trajectory.csv").string(), csv);
  }
  {
    Csv csv;
    csv.header = {"slot", "target", "gain_w", "threshold_w", "feasible"};
    for (const auto& g : r.gains) {
      csv.rows.push_back({std::to_string(g.slot), std::to_string(g.target + 1),
                          format_double(g.gain), format_double(g.threshold),
                          g.feasible ? "1" : "0"});
    }
    io::write_csv((fs::path(dir) / "gains.csv").string(), csv);
  }
  {
    Csv csv;
    csv.header = {"target", "slot"};
    for (size_t k = 0; k < r.assignment.slots_per_target.size(); ++k) {
      for (int slot : r.assignment.slots_per_target[k]) {
        csv.rows.push_back({std::to_string(k + 1), std::to_string(slot)});
      }
    }
    io::write_csv((fs::path(dir) / "assignment.csv").string(), csv);
  }
  if (!r.solver_log.empty()) {
    Csv csv;
    csv.header = {"slot", "stage", "iteration", "barrier_t", "objective",
                  "merit", "step"};
    for (const auto& row : r.solver_log) {
      csv.rows.push_back({std::to_string(row.slot), std::to_string(row.rec.stage),
                          std::to_string(row.rec.iter),
                          format_double(row.rec.barrier_t),
                          format_double(row.rec.objective),
                          format_double(row.rec.merit),
                          format_double(row.rec.step)});
    }
    io::write_csv((fs::path(dir) / "solver_log.csv").string(), csv);
  }
}

int cmd_run(const RunOptions& opts) {
  try {
    Scenario s = load_or_default(opts.scenario_path);
    if (opts.seed) s.rng_seed = *opts.seed;
    if (opts.tau) s.tau_weight = *opts.tau;
    s.solver.log_solver = s.solver.log_solver || opts.log_solver;
    validate(s);
    const mission::Scheme scheme = mission::scheme_from_name(opts.scheme);
    const mission::MissionResult r = mission::run_scheme(scheme, s);
    write_mission_files(opts.out_dir, r, s);
    if (r.degraded) {
      std::cerr << "degraded result:\n";
      for (const auto& n : r.notes) std::cerr << "  " << n << "\n";
      for (const auto& v : r.feasibility.violations) std::cerr << "  " << v << "\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

std::vector<std::string> parameter_names() {
  return {"gamma_sense",  "p_max_alice", "p_max_jack",  "num_antennas",
          "horizon",      "slots_per_target", "num_targets", "resid_bob",
          "resid_eve",    "tau_weight",  "v_max",       "d_min"};
}

void set_parameter(Scenario& s, const std::string& name, double value) {
  auto as_int = [&](const char* field) {
    const int v = int(std::llround(value));
    if (std::abs(value - double(v)) > 1e-9) {
      throw ValidationError(field, "must be an integer");
    }
    return v;
  };
  if (name == "gamma_sense") {
    s.gamma_sense = value;
  } else if (name == "p_max_alice") {
    s.p_max_alice = value;
  } else if (name == "p_max_jack") {
    s.p_max_jack = value;
  } else if (name == "num_antennas") {
    s.num_antennas = as_int("num_antennas");
  } else if (name == "horizon") {
    s.horizon = value;
  } else if (name == "slots_per_target") {
    s.slots_per_target = as_int("slots_per_target");
  } else if (name == "num_targets") {
    s.targets = spread_targets(s.alice_start, s.alice_end, as_int("num_targets"));
  } else if (name == "resid_bob") {
    s.resid_jam_bob = s.resid_sense_bob = value;
  } else if (name == "resid_eve") {
    s.resid_jam_eve = s.resid_sense_eve = value;
  } else if (name == "tau_weight") {
    s.tau_weight = value;
  } else if (name == "v_max") {
    s.v_max = value;
  } else if (name == "d_min") {
    s.d_min = value;
  } else {
    throw ValidationError(name, "unknown sweep parameter");
  }
  validate(s);
}

namespace {

struct SweepPoint {
  std::string scheme;
  double value = 0.0;
  std::string dir;
  bool ran = false;
  bool feasible = false;
  std::string error;
  double asr_sc = 0.0, asr_scs = 0.0, asr_overall = 0.0, min_gain = 0.0;
};

void run_point(const Scenario& base, const std::string& param, SweepPoint& pt) {
  try {
    Scenario s = base;
    set_parameter(s, param, pt.value);
    const mission::MissionResult r =
        mission::run_scheme(mission::scheme_from_name(pt.scheme), s);
    write_mission_files(pt.dir, r, s);
    pt.ran = true;
    pt.feasible = !r.degraded;
    pt.asr_sc = r.asr_sc;
    pt.asr_scs = r.asr_scs;
    pt.asr_overall = r.asr_overall;
    double min_gain = std::numeric_limits<double>::quiet_NaN();
    for (const auto& g : r.gains) {
      if (std::isnan(min_gain) || g.gain < min_gain) min_gain = g.gain;
    }
    pt.min_gain = min_gain;
  } catch (const std::exception& e) {
    pt.ran = false;
    pt.feasible = false;
    pt.error = e.what();
    pt.asr_sc = pt.asr_scs = pt.asr_overall = pt.min_gain =
        std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

int cmd_sweep(const SweepOptions& opts) {
  try {
    if (opts.values.empty()) throw std::runtime_error("empty sweep value list");
    if (opts.schemes.empty()) throw std::runtime_error("no schemes given");
    const Scenario base = load_or_default(opts.scenario_path);
    {
      Scenario probe = base;  // reject unknown parameters before spawning work
      set_parameter(probe, opts.param, opts.values.front());
    }

    std::vector<SweepPoint> points;
    for (const auto& scheme : opts.schemes) {
      mission::scheme_from_name(scheme);
      for (double v : opts.values) {
        SweepPoint pt;
        pt.scheme = scheme;
        pt.value = v;
        std::ostringstream dir;
        dir << scheme << "_" << opts.param << "=" << format_double(v);
        pt.dir = (fs::path(opts.out_dir) / dir.str()).string();
        points.push_back(std::move(pt));
      }
    }
    fs::create_directories(opts.out_dir);

    Scenario seeded = base;
    if (opts.seed) seeded.rng_seed = *opts.seed;
    const int jobs = opts.jobs > 0
                         ? opts.jobs
                         : std::max(1u, std::thread::hardware_concurrency());
    for (size_t begin = 0; begin < points.size(); begin += size_t(jobs)) {
      const size_t end = std::min(points.size(), begin + size_t(jobs));
      std::vector<std::future<void>> batch;
      for (size_t i = begin; i < end; ++i) {
        batch.push_back(std::async(std::launch::async, run_point,
                                   std::cref(seeded), std::cref(opts.param),
                                   std::ref(points[i])));
      }
      for (auto& f : batch) f.get();
    }

    Csv csv;
    csv.header = {"scheme", "param",       "value",   "asr_sc", "asr_scs",
                  "asr_overall", "min_gain_w", "feasible"};
    bool any_failed = false;
    for (const auto& pt : points) {
      any_failed = any_failed || !pt.ran;
      csv.rows.push_back({pt.scheme, opts.param, format_double(pt.value),
                          format_double(pt.asr_sc), format_double(pt.asr_scs),
                          format_double(pt.asr_overall),
                          format_double(pt.min_gain),
                          pt.ran ? (pt.feasible ? "1" : "0") : "0"});
      if (!pt.error.empty()) {
        std::cerr << pt.scheme << " " << opts.param << "=" << pt.value
                  << " failed: " << pt.error << "\n";
      }
    }
    io::write_csv((fs::path(opts.out_dir) / "sweep.csv").string(), csv);
    return any_failed ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

namespace {

// Trajectory map with ground-node markers (read from mission_result.json
// when present).
void plot_trajectory(const fs::path& in_dir, const fs::path& out_dir) {
  const Csv csv = io::read_csv((in_dir / "trajectory.csv").string());
  const int xa = io::column_index(csv, "x_a");
  const int ya = io::column_index(csv, "y_a");
  const int xj = io::column_index(csv, "x_j");
  const int yj = io::column_index(csv, "y_j");
  if (xa < 0 || ya < 0 || xj < 0 || yj < 0) {
    throw std::runtime_error("trajectory.csv: missing columns");
  }
  std::vector<Vec2> alice, jack;
  for (const auto& row : csv.rows) {
    alice.emplace_back(io::parse_double(row[size_t(xa)]),
                       io::parse_double(row[size_t(ya)]));
    const double jx = io::parse_double(row[size_t(xj)]);
    const double jy = io::parse_double(row[size_t(yj)]);
    if (!std::isnan(jx) && !std::isnan(jy)) jack.emplace_back(jx, jy);
  }

  std::vector<Vec2> nodes_bob, nodes_eve, targets;
  {
    std::ifstream in(in_dir / "mission_result.json", std::ios::binary);
    if (in) {
      try {
        const nlohmann::json j = nlohmann::json::parse(in);
        const auto& nodes = j.at("nodes");
        nodes_bob.emplace_back(nodes.at("bob_m")[0], nodes.at("bob_m")[1]);
        nodes_eve.emplace_back(nodes.at("eve_m")[0], nodes.at("eve_m")[1]);
        for (const auto& t : nodes.at("targets_m")) {
          targets.emplace_back(t[0], t[1]);
        }
      } catch (const nlohmann::json::exception&) {
        // plot without markers
      }
    }
  }

  Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
  auto grow = [&](const std::vector<Vec2>& pts) {
    for (const auto& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  };
  grow(alice);
  grow(jack);
  grow(nodes_bob);
  grow(nodes_eve);
  grow(targets);
  const Vec2 pad = (hi - lo).cwiseMax(Vec2(1.0, 1.0)) * 0.08;
  svg::Canvas canvas(640, 480);
  svg::DataMap map(lo - pad, hi + pad, Vec2(40, 20), Vec2(620, 440));

  auto mapped = [&](const std::vector<Vec2>& pts) {
    std::vector<Vec2> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(map(p));
    return out;
  };
  canvas.polyline(mapped(alice), "#1f77b4", 2.0);
  if (!jack.empty()) canvas.polyline(mapped(jack), "#d62728", 2.0);
  for (const auto& b : nodes_bob) canvas.circle(map(b), 5, "#2ca02c");
  for (const auto& e : nodes_eve) canvas.cross(map(e), 5, "#d62728");
  for (const auto& t : targets) canvas.rect(map(t) - Vec2(4, 4), 8, 8, "#7f7f7f");
  canvas.text({44, 466}, "alice: blue, jack: red, bob: green dot, eve: red x, targets: grey squares");

  std::ofstream out(out_dir / "trajectory.svg", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trajectory.svg");
  out << canvas.str();
}

void plot_rates(const fs::path& in_dir, const fs::path& out_dir) {
  const Csv csv = io::read_csv((in_dir / "rates.csv").string());
  const int slot_col = io::column_index(csv, "slot");
  const int phase_col = io::column_index(csv, "phase");
  const int rate_col = io::column_index(csv, "rate_bits");
  if (slot_col < 0 || phase_col < 0 || rate_col < 0) {
    throw std::runtime_error("rates.csv: missing columns");
  }
  std::vector<double> rates;
  std::vector<std::string> phases;
  for (const auto& row : csv.rows) {
    rates.push_back(io::parse_double(row[size_t(rate_col)]));
    phases.push_back(row[size_t(phase_col)]);
  }
  const double top = std::max(1e-9, *std::max_element(rates.begin(), rates.end()));

  svg::Canvas canvas(640, 360);
  const double x0 = 50, x1 = 620, y0 = 320, y1 = 30;
  canvas.line({x0, y0}, {x1, y0}, "#000000");
  canvas.line({x0, y0}, {x0, y1}, "#000000");
  const double bar_w = (x1 - x0) / double(rates.size());
  for (size_t i = 0; i < rates.size(); ++i) {
    const double h = (y0 - y1) * rates[i] / top;
    canvas.rect({x0 + bar_w * double(i) + 1.0, y0 - h}, bar_w - 2.0, h,
                phases[i] == "scs" ? "#ff7f0e" : "#1f77b4");
  }
  canvas.text({x0, 340}, "per-slot secrecy rate (bits/s/Hz); sensing slots orange");
  canvas.text({8, y1 + 6}, io::format_double(top), 10);

  std::ofstream out(out_dir / "rates.svg", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write rates.svg");
  out << canvas.str();
}

void plot_sweep(const fs::path& in_dir, const fs::path& out_dir) {
  const Csv csv = io::read_csv((in_dir / "sweep.csv").string());
  const int scheme_col = io::column_index(csv, "scheme");
  const int value_col = io::column_index(csv, "value");
  const int asr_col = io::column_index(csv, "asr_overall");
  if (scheme_col < 0 || value_col < 0 || asr_col < 0) {
    throw std::runtime_error("sweep.csv: missing columns");
  }
  struct Series {
    std::string name;
    std::vector<Vec2> pts;
  };
  std::vector<Series> series;
  Vec2 lo(1e300, 0.0), hi(-1e300, 1e-12);
  for (const auto& row : csv.rows) {
    const std::string& name = row[size_t(scheme_col)];
    const double x = io::parse_double(row[size_t(value_col)]);
    const double y = io::parse_double(row[size_t(asr_col)]);
    if (std::isnan(x) || std::isnan(y)) continue;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.name == name; });
    if (it == series.end()) {
      series.push_back({name, {}});
      it = series.end() - 1;
    }
    it->pts.emplace_back(x, y);
    lo.x() = std::min(lo.x(), x);
    hi.x() = std::max(hi.x(), x);
    hi.y() = std::max(hi.y(), y);
  }
  if (series.empty()) throw std::runtime_error("sweep.csv: no plottable rows");
  if (hi.x() <= lo.x()) {
    lo.x() -= 0.5;
    hi.x() += 0.5;
  }

  svg::Canvas canvas(640, 400);
  const Vec2 pmin(60, 30), pmax(620, 350);
  svg::DataMap map(Vec2(lo.x(), 0.0), Vec2(hi.x(), hi.y() * 1.05), pmin, pmax);
  canvas.line(map({lo.x(), 0.0}), map({hi.x(), 0.0}), "#000000");
  canvas.line(map({lo.x(), 0.0}), map({lo.x(), hi.y() * 1.05}), "#000000");
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  for (size_t i = 0; i < series.size(); ++i) {
    auto& s = series[i];
    std::sort(s.pts.begin(), s.pts.end(),
              [](const Vec2& a, const Vec2& b) { return a.x() < b.x(); });
    std::vector<Vec2> px;
    px.reserve(s.pts.size());
    for (const auto& p : s.pts) px.push_back(map(p));
    canvas.polyline(px, palette[i % 4], 2.0);
    for (const auto& p : px) canvas.circle(p, 3, palette[i % 4]);
    canvas.text({pmin.x() + 6 + 110.0 * double(i), 20}, s.name);
  }
  canvas.text({pmin.x(), 380}, "ASR (bits/s/Hz) vs parameter value");

  std::ofstream out(out_dir / "sweep.svg", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write sweep.svg");
  out << canvas.str();
}

}  // namespace

int cmd_plot(const PlotOptions& opts) {
  try {
    const fs::path in_dir(opts.in_dir);
    const fs::path out_dir(opts.out_dir.empty() ? opts.in_dir : opts.out_dir);
    fs::create_directories(out_dir);
    int made = 0;
    if (fs::exists(in_dir / "trajectory.csv")) {
      plot_trajectory(in_dir, out_dir);
      ++made;
    }
    if (fs::exists(in_dir / "rates.csv")) {
      plot_rates(in_dir, out_dir);
      ++made;
    }
    if (fs::exists(in_dir / "sweep.csv")) {
      plot_sweep(in_dir, out_dir);
      ++made;
    }
    if (made == 0) {
      std::cerr << "error: no plottable files in " << opts.in_dir << "\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace scs::harness
