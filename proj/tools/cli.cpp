#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sdd/sdd.hpp"

namespace sddtool {

namespace fs = std::filesystem;
using sdd::io::Json;

namespace {

constexpr double kResidualTolerance = 1e-9;
constexpr double kPlainTolerance = 1e-6;
constexpr double kBranchTolerance = 1e-3;
constexpr double kGeometryTolerance = 1e-12;
constexpr double kDistinctThreshold = 1e-3;
constexpr std::size_t kCompareSamples = 1001;

const std::map<std::string, std::string> kParamAliases{{"α", "alpha"}, {"β", "beta"}, {"δ", "delta"}};

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
    throw sdd::Error(sdd::ErrorKind::Parameter, "cannot parse " + what + " value '" + text + "' as a number");
  }
  return v;
}

std::string fmt(double v) { return sdd::io::format_double(v); }

std::string solution_name(const sdd::ClosedFormSolution& s) {
  if (s.family == sdd::Color::Red) return "red";
  return std::string(sdd::to_string(s.family)) + "-tau" + fmt(s.tau);
}

std::vector<double> sorted_taus(std::vector<double> taus) {
  for (double t : taus) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw sdd::Error(sdd::ErrorKind::Parameter, "tau must be finite and >= 0");
  }
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  return taus;
}

struct Context {
  sdd::ProblemInstance inst;
  RunReport rep;
  fs::path out;
  std::vector<double> taus;
  std::chrono::steady_clock::time_point started;
};

Context begin(const std::string& command, const Options& o) {
  if (!(o.step > 0.0)) throw sdd::Error(sdd::ErrorKind::Parameter, "--step must be positive");
  if (!(o.eps > 0.0)) throw sdd::Error(sdd::ErrorKind::Parameter, "--eps must be positive");
  if (!(o.tol_red > 0.0)) throw sdd::Error(sdd::ErrorKind::Parameter, "--tol-red must be positive");
  if (!(o.margin > 0.0)) throw sdd::Error(sdd::ErrorKind::Parameter, "--margin must be positive");
  if (!(o.t_end > 0.0)) throw sdd::Error(sdd::ErrorKind::Parameter, "--t-end must be positive");
  Context c{sdd::make_problem(o.key, collect_params(o)), {}, fs::path(o.out_dir), sorted_taus(o.taus),
            std::chrono::steady_clock::now()};
  c.rep.command = command;
  c.rep.problem = o.key;
  c.rep.params = c.inst.params;
  Json taus = Json::array();
  for (double t : c.taus) taus.push_back(t);
  c.rep.flags = Json{{"step", o.step},   {"eps", o.eps},     {"tol_red", o.tol_red}, {"margin", o.margin},
                     {"grid", o.grid},   {"t_end", o.t_end}, {"taus", taus},         {"which", o.which}};
  fs::create_directories(c.out);
  return c;
}

template <class Writer>
void write_output(Context& c, const std::string& name, Writer&& writer) {
  const fs::path path = c.out / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw sdd::Error(sdd::ErrorKind::Parameter, "cannot open '" + path.string() + "' for writing");
  writer(os);
  if (!os) throw sdd::Error(sdd::ErrorKind::Parameter, "failed writing '" + path.string() + "'");
  c.rep.outputs.push_back(name);
}

void write_json(Context& c, const std::string& name, const Json& j) {
  write_output(c, name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

RunReport finish(Context& c, const Options& o) {
  const auto elapsed = std::chrono::steady_clock::now() - c.started;
  if (o.timing) c.rep.wall_time = std::chrono::duration<double>(elapsed).count();
  const std::string name = c.rep.command + "-" + c.rep.problem + "-report.json";
  c.rep.outputs.push_back(name);
  const Json j = c.rep.to_json();
  std::ofstream os(c.out / name, std::ios::binary);
  if (!os) throw sdd::Error(sdd::ErrorKind::Parameter, "cannot write report into '" + c.out.string() + "'");
  os << j.dump(2) << '\n';
  return std::move(c.rep);
}

// Integrations shared by branches, classify and export3d.

struct Job {
  std::string name;
  std::optional<sdd::ClosedFormSolution> sol;
  bool plain = false;
};

struct JobResult {
  std::string name;
  std::optional<sdd::Trajectory> traj;
  double deviation = 0.0;
  double compare_lo = 0.0;
  double compare_hi = 0.0;
  double tolerance = 0.0;
  std::string error;

  [[nodiscard]] bool ok() const {
    return error.empty() && traj && !traj->aborted() && deviation <= tolerance;
  }
};

std::vector<Job> branch_jobs(const Context& c) {
  std::vector<Job> jobs;
  Job plain{"plain", std::nullopt, true};
  if (!c.inst.solutions.empty()) plain.sol = c.inst.solutions.front();
  jobs.push_back(plain);
  for (const auto& s : sdd::closed_forms(c.inst, c.taus)) {
    if (s.family == sdd::Color::Red || !(s.coeff > 0.0)) continue;
    jobs.push_back({solution_name(s), s, false});
  }
  return jobs;
}

double plain_end(const Job& j, const Options& o) {
  return j.sol ? std::min(o.t_end, j.sol->window.hi) : o.t_end;
}

JobResult run_job(const sdd::SddProblem& p, const Job& j, const Options& o) {
  JobResult r;
  r.name = j.name;
  try {
    if (j.plain) {
      r.tolerance = kPlainTolerance;
      r.compare_lo = 0.0;
      r.compare_hi = plain_end(j, o);
      r.traj = sdd::integrate(p, r.compare_hi, o.step);
    } else {
      const sdd::ClosedFormSolution& s = *j.sol;
      r.tolerance = kBranchTolerance;
      const double hi = s.window.bounded() ? s.window.hi : s.tau + sdd::kDefaultHorizon;
      r.compare_hi = s.tau + 0.5 * (hi - s.tau);
      r.compare_lo = s.tau + o.eps;
      if (!(r.compare_hi > r.compare_lo)) {
        throw sdd::Error(sdd::ErrorKind::Domain, "eps = " + fmt(o.eps) + " reaches past half the family window");
      }
      const sdd::Seed seed = sdd::seed_branch(p, sdd::branch_spec(s), o.eps);
      r.traj = sdd::integrate(p, r.compare_hi, o.step, seed);
    }
    if (j.sol) {
      for (const sdd::Node& n : r.traj->nodes()) {
        if (n.t < r.compare_lo || n.t > r.compare_hi) continue;
        r.deviation = std::max(r.deviation, std::fabs(n.x - j.sol->value(n.t).value()));
      }
    }
  } catch (const sdd::Error& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<JobResult> run_jobs(const sdd::SddProblem& p, const std::vector<Job>& jobs, const Options& o) {
  std::vector<std::future<JobResult>> futures;
  futures.reserve(jobs.size());
  const auto policy = o.parallel ? std::launch::async : std::launch::deferred;
  for (const Job& j : jobs) futures.push_back(std::async(policy, [&p, &j, &o] { return run_job(p, j, o); }));
  std::vector<JobResult> out;
  out.reserve(jobs.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

bool same_colors(const std::vector<sdd::ColorSegment>& got, const std::vector<sdd::ColorSpan>& want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].color != want[i].color) return false;
  }
  return true;
}

std::string color_sequence(const std::vector<sdd::ColorSegment>& segs) {
  std::string out;
  for (const auto& s : segs) out += (out.empty() ? "" : ",") + std::string(sdd::to_string(s.color));
  return out;
}

std::string color_sequence(const std::vector<sdd::ColorSpan>& spans) {
  std::string out;
  for (const auto& s : spans) out += (out.empty() ? "" : ",") + std::string(sdd::to_string(s.color));
  return out;
}

double sup_difference(const sdd::ClosedFormSolution& a, const sdd::ClosedFormSolution& b, double horizon) {
  const double lo = std::max(a.window.lo, b.window.lo);
  // the horizon only stands in when neither window is bounded
  const double hi = std::min(a.window.hi, b.window.hi) == sdd::kUnbounded ? horizon : std::min(a.window.hi, b.window.hi);
  if (!(hi > lo)) return 0.0;
  double worst = 0.0;
  for (double t : sdd::linspace(lo, hi, kCompareSamples)) {
    worst = std::max(worst, std::fabs((a.value(t) - b.value(t)).value()));
  }
  return worst;
}

}  // namespace

// ---------------------------------------------------------------------------
// RunReport
// ---------------------------------------------------------------------------

bool RunReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

Json RunReport::to_json() const {
  Json vs = Json::array();
  for (const auto& v : verdicts) {
    vs.push_back(Json{{"item", v.item}, {"verdict", v.verdict}, {"pass", v.pass}, {"detail", v.detail}});
  }
  Json j{{"command", command},
         {"problem", problem},
         {"params", sdd::io::params_to_json(params)},
         {"flags", flags},
         {"outputs", outputs},
         {"verdicts", vs},
         {"max_residuals", max_residuals},
         {"details", details},
         {"passed", passed()}};
  if (wall_time >= 0.0) j["wall_time"] = wall_time;
  return j;
}

sdd::ParamMap collect_params(const Options& o) {
  sdd::ParamMap m;
  if (!o.params_doc.empty()) {
    Json doc;
    try {
      if (o.params_doc.front() == '{') {
        doc = Json::parse(o.params_doc);
      } else {
        std::ifstream is(o.params_doc);
        if (!is) throw sdd::Error(sdd::ErrorKind::Parameter, "cannot read parameter file '" + o.params_doc + "'");
        doc = Json::parse(is);
      }
    } catch (const Json::parse_error& e) {
      throw sdd::Error(sdd::ErrorKind::Parameter, std::string("malformed parameter JSON: ") + e.what());
    }
    m = sdd::io::params_from_json(doc);
  }
  for (const std::string& kv : o.param_kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw sdd::Error(sdd::ErrorKind::Parameter, "--param expects name=value, got '" + kv + "'");
    }
    std::string name = kv.substr(0, eq);
    if (const auto it = kParamAliases.find(name); it != kParamAliases.end()) name = it->second;
    m[name] = parse_double(kv.substr(eq + 1), name);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

std::string cmd_list() {
  std::ostringstream os;
  for (const auto& e : sdd::registry()) {
    os << e.key << (e.families ? "  [tau families]" : "") << "\n  " << e.summary << '\n';
    for (const auto& ps : e.params) {
      std::string alias;
      for (const auto& [a, name] : kParamAliases) {
        if (name == ps.name) alias = " (" + a + ")";
      }
      os << "    " << ps.name << alias << " = " << fmt(ps.default_value) << "  " << ps.description << '\n';
    }
  }
  return os.str();
}

RunReport cmd_verify(const Options& o) {
  Context c = begin("verify", o);
  Json sols = Json::array();
  std::size_t checked = 0;
  for (const auto& s : sdd::closed_forms(c.inst, c.taus)) {
    const std::string name = solution_name(s);
    double r = 0.0;
    std::string err;
    try {
      r = sdd::max_residual(c.inst.problem, s, 100, sdd::kDefaultHorizon);
    } catch (const sdd::Error& e) {
      err = e.what();
    }
    ++checked;
    const bool ok = err.empty() && r <= kResidualTolerance;
    c.rep.max_residuals[name] = r;
    Json entry = sdd::io::to_json(s);
    entry["max_residual"] = r;
    if (!err.empty()) entry["error"] = err;
    sols.push_back(entry);
    c.rep.verdicts.push_back({"residual:" + name, ok ? "pass" : "fail", ok,
                              err.empty() ? "max |residual| = " + fmt(r) : err});
  }
  c.rep.details["solutions_checked"] = checked;
  c.rep.details["solutions"] = sols;
  if (checked == 0) c.rep.details["note"] = "problem has no closed-form solutions";
  return finish(c, o);
}

RunReport cmd_branches(const Options& o) {
  Context c = begin("branches", o);
  const auto jobs = branch_jobs(c);
  const auto results = run_jobs(c.inst.problem, jobs, o);
  Json summary = Json::array();
  for (const JobResult& r : results) {
    Json entry{{"name", r.name}, {"compare_window", Json::array({r.compare_lo, r.compare_hi})}};
    if (r.traj) {
      const std::string file = "branches-" + c.rep.problem + "-" + r.name + ".csv";
      write_output(c, file, [&](std::ostream& os) { sdd::io::write_trajectory_csv(os, *r.traj, c.inst.problem.delay); });
      entry["file"] = file;
      entry["nodes"] = r.traj->nodes().size();
      entry["t_last"] = r.traj->t_last();
      entry["extrapolated_stages"] = r.traj->extrapolated_stages();
      if (r.traj->aborted()) entry["abort_reason"] = r.traj->abort_reason();
    }
    const bool compared = jobs[&r - results.data()].sol.has_value();
    entry["max_deviation"] = compared ? Json(r.deviation) : Json(nullptr);
    if (!r.error.empty()) entry["error"] = r.error;
    summary.push_back(entry);
    if (compared) c.rep.max_residuals[r.name] = r.deviation;

    std::string detail;
    if (!r.error.empty()) {
      detail = r.error;
    } else if (r.traj->aborted()) {
      detail = "aborted at t = " + fmt(r.traj->t_last()) + ": " + r.traj->abort_reason();
    } else if (compared) {
      detail = "max deviation " + fmt(r.deviation) + " (tolerance " + fmt(r.tolerance) + ")";
    } else {
      detail = "no closed form to compare against";
    }
    const bool pass = compared ? r.ok() : (r.error.empty() && !r.traj->aborted());
    c.rep.verdicts.push_back({"branch:" + r.name, pass ? "pass" : "fail", pass, detail});
  }
  c.rep.details["trajectories"] = summary;
  write_json(c, "branches-" + c.rep.problem + "-summary.json", summary);
  return finish(c, o);
}

RunReport cmd_classify(const Options& o) {
  Context c = begin("classify", o);
  Json segments = Json::object();

  for (const auto& s : sdd::closed_forms(c.inst, c.taus)) {
    const std::string name = "exact:" + solution_name(s);
    try {
      const double t_hi = s.window.bounded() ? s.window.hi : o.t_end;
      const sdd::Trajectory tr = sdd::exact_trajectory(s, t_hi, std::max<std::size_t>(o.grid, 2));
      const auto segs = sdd::classify(tr, c.inst.problem.delay, o.tol_red);
      const auto declared = s.declared_colors(t_hi);
      const bool ok = same_colors(segs, declared);
      segments[name] = sdd::io::to_json(segs);
      c.rep.verdicts.push_back({name, ok ? "match" : "mismatch", ok,
                                "classified " + color_sequence(segs) + ", declared " + color_sequence(declared)});
    } catch (const sdd::Error& e) {
      c.rep.verdicts.push_back({name, "error", false, e.what()});
    }
  }

  Job plain{"plain", std::nullopt, true};
  if (!c.inst.solutions.empty()) plain.sol = c.inst.solutions.front();
  const JobResult r = run_job(c.inst.problem, plain, o);
  if (!r.error.empty()) {
    c.rep.verdicts.push_back({"integrated:plain", "error", false, r.error});
  } else {
    try {
      const auto segs = sdd::classify(*r.traj, c.inst.problem.delay, o.tol_red);
      segments["integrated:plain"] = sdd::io::to_json(segs);
      if (r.traj->aborted()) c.rep.details["plain_abort_reason"] = r.traj->abort_reason();
      if (plain.sol) {
        const auto declared = plain.sol->declared_colors(r.traj->t_last());
        const bool ok = same_colors(segs, declared);
        c.rep.verdicts.push_back({"integrated:plain", ok ? "match" : "mismatch", ok,
                                  "classified " + color_sequence(segs) + ", declared " + color_sequence(declared)});
      } else {
        c.rep.verdicts.push_back({"integrated:plain", "reported", true, "classified " + color_sequence(segs)});
      }
    } catch (const sdd::Error& e) {
      c.rep.verdicts.push_back({"integrated:plain", "error", false, e.what()});
    }
  }
  c.rep.details["segments"] = segments;
  write_json(c, "classify-" + c.rep.problem + "-segments.json", segments);
  return finish(c, o);
}

RunReport cmd_certify(const Options& o) {
  Context c = begin("certify", o);
  const sdd::SddProblem& p = c.inst.problem;
  Json certs = Json::object();

  if (p.pure_delay()) {
    const sdd::RedCertificate rc = sdd::red_certificate(p);
    certs["red"] = sdd::io::to_json(rc);
    c.rep.verdicts.push_back({"red_certificate", sdd::to_string(rc.verdict), true,
                              "s0 = " + fmt(rc.s0) + ", f(phi(s0)) = " + fmt(rc.f_at_phi_s0)});
    if (rc.verdict == sdd::RedVerdict::CandidateExists) {
      const sdd::RedVerification v = sdd::verify_red(p, rc, o.t_end);
      certs["red_verification"] = sdd::io::to_json(v);
      c.rep.max_residuals["red_candidate"] = v.max_residual;
      c.rep.verdicts.push_back({"verify_red", v.passed ? "pass" : "fail", v.passed, v.message});
    }
  } else {
    certs["red"] = Json{{"verdict", "inapplicable"}, {"reason", "red certificate needs the pure-delay form"}};
    c.rep.verdicts.push_back({"red_certificate", "inapplicable", true, "full right-hand side"});
  }
  if (p.lipschitz_in_state()) {
    const sdd::RedUniquenessReport ru = sdd::red_uniqueness_check(p, o.t_end, o.step);
    certs["red_uniqueness"] = sdd::io::to_json(ru);
    c.rep.verdicts.push_back({"red_uniqueness", ru.reduced_is_red ? "one-red" : "no-red", true,
                              "s0 = " + fmt(ru.s0) + ", reduced slope " + fmt(ru.reduced_slope_at_0)});
  }

  try {
    const sdd::UniquenessCertificate u = sdd::prop2_certificate(p, o.margin);
    certs["prop2"] = sdd::io::to_json(u);
    c.rep.verdicts.push_back({"prop2", sdd::to_string(u.verdict), true, "q = " + fmt(u.q)});
    if (u.verdict == sdd::UniquenessVerdict::Unique) {
      const double s_end = u.q < 1.0 ? p.phi.upper() : p.phi.lower();
      const sdd::TransformedTrajectory tt = sdd::integrate_transformed(p, s_end, o.step);
      write_output(c, "certify-" + c.rep.problem + "-transformed.csv",
                   [&](std::ostream& os) { sdd::io::write_transformed_csv(os, tt); });
      Json tj{{"s_end", s_end}, {"samples", tt.samples.size()}, {"direction", tt.direction}};
      if (tt.aborted()) tj["abort_reason"] = tt.abort_reason;
      certs["transformed"] = tj;
    }
  } catch (const sdd::Error& e) {
    if (e.kind() != sdd::ErrorKind::NonDifferentiable) throw;
    certs["prop2"] = Json{{"verdict", "inapplicable"}, {"reason", e.what()}};
    c.rep.verdicts.push_back({"prop2", "inapplicable", true, e.what()});
  }
  c.rep.details["certificates"] = certs;
  write_json(c, "certify-" + c.rep.problem + "-certificates.json", certs);
  return finish(c, o);
}

RunReport cmd_export3d(const Options& o) {
  static const std::vector<std::string> kWhich{"all", "red", "yellow", "blue", "plain"};
  if (std::find(kWhich.begin(), kWhich.end(), o.which) == kWhich.end()) {
    throw sdd::Error(sdd::ErrorKind::Parameter, "--which must be one of all, red, yellow, blue, plain");
  }
  if (o.grid < 2) throw sdd::Error(sdd::ErrorKind::Parameter, "--grid must be at least 2");
  Context c = begin("export3d", o);
  const sdd::DelaySpec& delay = c.inst.problem.delay;

  std::vector<std::pair<std::string, sdd::Curve3D>> curves;
  if (o.which != "plain") {
    for (const auto& s : sdd::closed_forms(c.inst, c.taus)) {
      if (o.which != "all" && o.which != sdd::to_string(s.family)) continue;
      curves.emplace_back(solution_name(s), sdd::lift(s, delay, o.grid, c.rep.problem, o.t_end));
    }
  }
  if (o.which == "plain" || (o.which == "all" && curves.empty())) {
    Job plain{"plain", std::nullopt, true};
    if (!c.inst.solutions.empty()) plain.sol = c.inst.solutions.front();
    const JobResult r = run_job(c.inst.problem, plain, o);
    if (!r.error.empty()) throw sdd::Error(sdd::ErrorKind::Domain, r.error);
    curves.emplace_back("plain", sdd::lift(*r.traj, delay, o.grid));
  }

  Json summary = Json::array();
  for (const auto& [name, curve] : curves) {
    const std::string file = "export3d-" + c.rep.problem + "-" + name + ".csv";
    write_output(c, file, [&](std::ostream& os) { sdd::io::write_curve_csv(os, curve); });
    write_json(c, "export3d-" + c.rep.problem + "-" + name + ".json", sdd::io::to_json(curve));
    const double surf = sdd::surface_residual(curve, delay);
    Json entry{{"name", name}, {"rows", curve.rows.size()}, {"surface_residual", surf}};
    c.rep.max_residuals["surface:" + name] = surf;
    const bool surf_ok = surf <= kGeometryTolerance;
    c.rep.verdicts.push_back({"surface:" + name, surf_ok ? "pass" : "fail", surf_ok, "residual " + fmt(surf)});
    if (c.inst.plane) {
      const auto [a, b] = *c.inst.plane;
      const double pl = sdd::plane_residual(curve, a, b);
      entry["plane"] = Json::array({a, b});
      entry["plane_residual"] = pl;
      c.rep.max_residuals["plane:" + name] = pl;
      const bool ok = pl <= kGeometryTolerance;
      c.rep.verdicts.push_back({"plane:" + name, ok ? "pass" : "fail", ok,
                                "residual " + fmt(pl) + " for -t + s + " + fmt(a) + " x + " + fmt(b) + " = 0"});
    }
    summary.push_back(entry);
  }
  c.rep.details["curves"] = summary;
  return finish(c, o);
}

RunReport cmd_sweep(const Options& o) {
  Options opts = o;
  if (opts.taus.empty()) {
    for (int k = 0; k <= 10; ++k) opts.taus.push_back(0.1 * k);
  }
  Context c = begin("sweep", opts);
  if (!c.inst.key_params) {
    throw sdd::Error(sdd::ErrorKind::Inapplicable, "problem '" + c.rep.problem + "' has no tau-families to sweep");
  }
  const auto sols = sdd::closed_forms(c.inst, c.taus);
  std::vector<std::size_t> verified;
  Json entries = Json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < sols.size(); ++i) {
    const double r = sdd::max_residual(c.inst.problem, sols[i], 100, sdd::kDefaultHorizon);
    worst = std::max(worst, r);
    Json e = sdd::io::to_json(sols[i]);
    e["max_residual"] = r;
    e["verified"] = r <= kResidualTolerance;
    if (r <= kResidualTolerance) verified.push_back(i);
    entries.push_back(e);
  }

  // Greedy count: a verified solution is new if it differs from every
  // previously accepted one by at least the threshold.
  std::vector<std::size_t> distinct;
  double min_gap = sdd::kUnbounded;
  for (std::size_t i : verified) {
    bool fresh = true;
    for (std::size_t j : distinct) {
      const double d = sup_difference(sols[i], sols[j], sdd::kDefaultHorizon);
      min_gap = std::min(min_gap, d);
      if (d < kDistinctThreshold) fresh = false;
    }
    if (fresh) distinct.push_back(i);
  }
  const std::size_t required = 2 * c.taus.size() + 1;
  const bool ok = distinct.size() >= required;
  c.rep.max_residuals["closed_forms"] = worst;
  c.rep.details["solutions"] = entries;
  c.rep.details["verified"] = verified.size();
  c.rep.details["distinct"] = distinct.size();
  c.rep.details["required"] = required;
  c.rep.details["min_pairwise_sup_difference"] = sdd::io::number(min_gap);
  c.rep.verdicts.push_back({"distinct_solutions", ok ? "pass" : "fail", ok,
                            std::to_string(distinct.size()) + " distinct verified solutions, need " +
                                std::to_string(required)});
  write_json(c, "sweep-" + c.rep.problem + "-solutions.json", entries);
  return finish(c, opts);
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

namespace {

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("problem", o.key, "registry key (see 'list')")->required();
  sub->add_option("--param", o.param_kv, "problem parameter name=value (repeatable)");
  sub->add_option("--params", o.params_doc, "flat JSON object or path to a JSON file of parameters");
  sub->add_option("--out", o.out_dir, "output directory")->capture_default_str();
  sub->add_option("--tau", o.taus, "branch points for tau-families (comma separated)")->delimiter(',');
  sub->add_option("--eps", o.eps, "branch seed offset")->capture_default_str();
  sub->add_option("--step", o.step, "integrator step")->capture_default_str();
  sub->add_option("--tol-red", o.tol_red, "|s'| threshold for red")->capture_default_str();
  sub->add_option("--margin", o.margin, "uniqueness margin around q = 1")->capture_default_str();
  sub->add_option("--grid", o.grid, "samples per exported curve or exact trajectory")->capture_default_str();
  sub->add_option("--t-end", o.t_end, "horizon for plain integrations and unbounded windows")->capture_default_str();
  sub->add_flag("--timing", o.timing, "record wall time in the report");
  sub->add_flag("!--serial", o.parallel, "run branch integrations one after another");
}

void print_report(const RunReport& r, std::ostream& out, std::ostream& err) {
  for (const auto& v : r.verdicts) {
    (v.pass ? out : err) << (v.pass ? "ok    " : "FAIL  ") << v.item << ": " << v.verdict
                         << (v.detail.empty() ? "" : " (" + v.detail + ")") << '\n';
  }
  out << r.outputs.size() << " file(s) written; report " << (r.outputs.empty() ? "-" : r.outputs.back()) << '\n';
  if (r.wall_time >= 0.0) err << "wall time " << r.wall_time << " s\n";
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explore non-unique solutions of scalar state-dependent delay equations", "sddtool"};
  app.require_subcommand(1);
  Options o;
  auto* list = app.add_subcommand("list", "print registry keys and parameters");
  struct Cmd {
    const char* name;
    const char* help;
    RunReport (*fn)(const Options&);
  };
  const std::vector<Cmd> cmds{
      {"verify", "check closed-form residuals", cmd_verify},
      {"branches", "seed and integrate solution branches", cmd_branches},
      {"classify", "color solutions red/yellow/blue", cmd_classify},
      {"certify", "red-solution and uniqueness certificates", cmd_certify},
      {"export3d", "write (t, s, x) curves", cmd_export3d},
      {"sweep", "count distinct verified solutions over a tau grid", cmd_sweep},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, o);
    if (std::string(c.name) == "export3d") {
      sub->add_option("--which", o.which, "all | red | yellow | blue | plain")->capture_default_str();
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      out << cmd_list();
      return 0;
    }
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const RunReport r = cmds[i].fn(o);
      print_report(r, out, err);
      return r.passed() ? 0 : 1;
    }
  } catch (const sdd::Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace sddtool
