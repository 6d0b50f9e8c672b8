#include "thinflow/harness/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "thinflow/error.hpp"
#include "thinflow/fit.hpp"
#include "thinflow/harness/experiment.hpp"
#include "thinflow/jump.hpp"

namespace thinflow {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

struct Context {
  const RunConfig& cfg;
  std::optional<std::string> sweep_csv;  // concatenated tables of the first sweep
  std::optional<ResultBundle> bundle;

  VorticitySample sample() const { return discretize(cfg.vorticity, cfg.h, cfg.delta); }
  double alpha(const VorticitySample& s) const { return cfg.gamma + s.total_strength(); }

  const ResultBundle& sweep() {
    if (!bundle) {
      bundle = run_experiment(cfg, false);
      sweep_csv = serialize(*bundle);
    }
    return *bundle;
  }

  static std::string serialize(const ResultBundle& b) {
    return b.conservation.to_csv(b.config_hash) + b.convergence.to_csv(b.config_hash) +
           b.family.to_csv(b.config_hash) + b.jump.to_csv(b.config_hash) + b.fits.dump();
  }
};

struct Outcome {
  bool passed;
  std::string detail;
};

double contour_circulation(const ConformalMap& m, double radius, std::size_t n) {
  double c = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    const Vec2 x = radius * Vec2{std::cos(t), std::sin(t)};
    const Vec2 dx = radius * Vec2{-std::sin(t), std::cos(t)};
    c += dot(harmonic_field(m, x), dx);
  }
  return c * 2.0 * kPi / static_cast<double>(n);
}

Outcome ac1(Context&) {
  double worst = 0.0;
  const MapPtr maps[] = {disk_identity_map(), segment_map(), epsilon_map(segment_map(), 0.05)};
  for (const auto& m : maps)
    for (double r : {1.5, 3.0, 10.0}) worst = std::max(worst, std::abs(contour_circulation(*m, r, 512) - 1.0));
  return {worst <= 1e-10, "max |circulation - 1| = " + num(worst) + " (tol 1e-10)"};
}

Outcome ac2(Context& ctx) {
  std::mt19937_64 rng(ctx.cfg.seed);
  std::uniform_real_distribution<double> rad(1.3, 4.0), ang(0.0, 2.0 * kPi);
  const MapPtr maps[] = {segment_map(), disk_identity_map()};
  const double h = 1e-5;
  double worst = 0.0;
  for (const auto& m : maps) {
    int pairs = 0;
    while (pairs < 500) {
      const double a = ang(rng), b = ang(rng);
      const double ra = rad(rng), rb = rad(rng);
      const Vec2 x = ra * Vec2{std::cos(a), std::sin(a)};
      const Vec2 y = rb * Vec2{std::cos(b), std::sin(b)};
      if (norm(x - y) < 0.2) continue;
      const Vec2 k = biot_savart_kernel(*m, x, y);
      const double gx = (green_function(*m, x + Vec2{h, 0}, y) - green_function(*m, x - Vec2{h, 0}, y)) / (2 * h);
      const double gy = (green_function(*m, x + Vec2{0, h}, y) - green_function(*m, x - Vec2{0, h}, y)) / (2 * h);
      worst = std::max(worst, norm(k - Vec2{-gy, gx}) / norm(k));
      ++pairs;
    }
  }
  return {worst <= 1e-6, "max relative error over 1000 pairs = " + num(worst) + " (tol 1e-6)"};
}

Outcome ac3(Context& ctx) {
  const auto s = ctx.sample();
  const MapPtr m = epsilon_map(segment_map(), 0.05);
  const VelocityEvaluator ev(m, s, ctx.alpha(s));
  double max_normal = 0.0, max_speed = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double t = 2.0 * kPi * (k + 0.5) / 1000.0;
    const Vec2 x = m->inverse({std::cos(t), std::sin(t)});
    const Complex w = m->forward(x);
    const Vec2 n = to_vec(std::conj(m->derivative(x)) * w);
    const Vec2 u = ev.total_velocity(x);
    max_normal = std::max(max_normal, std::abs(dot(u, n / norm(n))));
    max_speed = std::max(max_speed, norm(u));
  }
  const double ratio = max_normal / max_speed;
  return {ratio <= 1e-6, "max|u.n|/max|u| = " + num(ratio) + " (tol 1e-6)"};
}

Outcome ac4(Context& ctx) {
  const auto s = ctx.sample();
  const MapPtr m = segment_map();
  const VelocityEvaluator ev(m, s, ctx.alpha(s));
  std::vector<std::pair<double, double>> kser, hser;
  const Vec2 dir{std::cos(0.7), std::sin(0.7)};
  for (int k = 0; k <= 20; ++k) {
    const double r = 10.0 * std::pow(100.0, k / 20.0);
    kser.push_back({r, norm(ev.vortical_part(r * dir))});
    hser.push_back({r, norm(harmonic_field(*m, r * dir))});
  }
  const double ek = fit_exponent(kser).exponent;
  const double eh = fit_exponent(hser).exponent;
  const bool ok = ek >= -2.05 && ek <= -1.95 && eh >= -1.02 && eh <= -0.98;
  return {ok, "K[omega] exponent " + num(ek) + " in [-2.05,-1.95], H exponent " + num(eh) + " in [-1.02,-0.98]"};
}

Outcome ac5(Context& ctx) {
  const auto s = ctx.sample();
  const VelocityEvaluator ev(segment_map(), s, ctx.alpha(s));
  std::vector<std::pair<double, double>> ser;
  for (double d : {1e-3, 1e-4, 1e-5}) ser.push_back({d, norm(ev.total_velocity({1.0 + d, 0.0}))});
  const double e = fit_exponent(ser).exponent;
  return {e >= -0.53 && e <= -0.47, "exponent " + num(e) + " in [-0.53,-0.47]"};
}

Outcome ac6(Context& ctx) {
  const double h = 0.02;
  const VorticitySample s = discretize(ctx.cfg.vorticity, h, 2.0 * h);
  const Trajectory tr = run(FlowConfig{ctx.cfg.gamma, s}, segment_map(), 1.0, 1e-3, {1000});
  const ConservationReport rep = conservation_report(tr, s.strengths);
  std::vector<double> sorted0 = s.strengths, sorted1 = tr.state(tr.positions.size() - 1).strengths;
  std::sort(sorted0.begin(), sorted0.end());
  std::sort(sorted1.begin(), sorted1.end());
  const bool ok = rep.drift_free() && rep.strengths_identical && sorted0 == sorted1 && rep.max_envelope_excess <= 0.0;
  std::ostringstream d;
  d << "N=" << s.size() << ", total drift " << num(rep.max_total_drift) << ", multiset "
    << (rep.strengths_identical ? "identical" : "changed") << ", support R(1)=" << num(tr.diagnostics.back().support_radius)
    << " vs envelope excess " << num(rep.max_envelope_excess) << " (rate " << num(rep.growth_rate) << ")";
  return {ok, d.str()};
}

Outcome ac7(Context& ctx) {
  std::mt19937_64 rng(ctx.cfg.seed + 7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst = 0.0;
  std::vector<double> ratios;
  for (double eps : ctx.cfg.sweep.eps) {
    const MapPtr m = epsilon_map(segment_map(), eps);
    const CutoffField c(m);
    for (int k = 0; k < 10000 / static_cast<int>(ctx.cfg.sweep.eps.size()) + 1; ++k) {
      const double r = 1.0 + eps * (1.0 + u01(rng));
      const double t = 2.0 * kPi * u01(rng);
      const Vec2 x = m->inverse(r * Complex{std::cos(t), std::sin(t)});
      worst = std::max(worst, std::abs(dot(harmonic_field(*m, x), c.gradient(x))));
    }
    ratios.push_back(transition_measure(c, ctx.cfg.quadrature) / eps);
  }
  const double spread = *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end());
  return {worst <= 1e-12 && spread <= 2.0,
          "max |H.grad Phi| = " + num(worst) + " (tol 1e-12), measure/eps spread " + num(spread) + " (<= 2)"};
}

Outcome ac8(Context& ctx) {
  const auto& b = ctx.sweep();
  std::vector<double> v;
  std::vector<std::pair<double, double>> ser;
  for (const auto& m : b.metrics) {
    v.push_back(m.flux);
    ser.push_back({m.eps, m.flux});
  }
  const double e = fit_exponent(ser).exponent;
  std::string list;
  for (double x : v) list += num(x) + " ";
  return {strictly_decreasing(v) && e >= 0.25, "flux norms " + list + "exponent " + num(e) + " (>= 0.25)"};
}

Outcome ac9(Context& ctx) {
  const auto& b = ctx.sweep();
  bool ok = true;
  std::string detail;
  for (std::size_t s = 0; s < ctx.cfg.sweep.snapshots.size(); ++s) {
    std::vector<double> v;
    for (const auto& m : b.metrics) v.push_back(m.l2_error[s]);
    const bool dec = strictly_decreasing(v);
    const double ratio = v.back() / v.front();
    ok = ok && dec && ratio <= 0.5;
    detail += "t=" + format_double(ctx.cfg.sweep.snapshots[s]) + ": " + (dec ? "decreasing" : "NOT decreasing") +
              ", final/first " + num(ratio) + "; ";
  }
  return {ok, detail + "(<= 0.5)"};
}

Outcome ac10(Context&) {
  VorticitySample none;
  none.blob_radius = 1.0;
  const VelocityEvaluator ev(segment_map(), none, 1.0);
  const double g0 = std::abs(jump_density(ev, 0.0) - 1.0 / kPi);
  double worst = 0.0;
  for (int k = 0; k <= 180; ++k) {
    const double s = -0.9 + 1.8 * k / 180.0;
    worst = std::max(worst, std::abs(jump_density(ev, s) - circulation_jump(s)));
  }
  const double mass = std::abs(jump_mass(ev) - 1.0);
  const bool ok = g0 <= 1e-6 && worst <= 1e-6 && mass <= 1e-6;
  return {ok, "|g(0)-1/pi| " + num(g0) + ", max pointwise " + num(worst) + ", |mass-1| " + num(mass) + " (tol 1e-6)"};
}

Outcome ac11(Context& ctx) {
  const auto s = ctx.sample();
  const VelocityEvaluator ev(segment_map(), s, ctx.alpha(s));
  const std::vector<SpatialTest> tests{{{0.0, 0.0}, 1.5, false},
                                       {{0.8, 0.2}, 0.6, false},
                                       {{0.3, 1.1}, 0.8, false},
                                       {{-0.9, -0.1}, 0.5, false},
                                       {{0.0, 0.5}, 2.0, false}};
  const auto coarse = distributional_curl_check(ev, tests, {256, 1024});
  const auto fine = distributional_curl_check(ev, tests, {512, 1024});
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k < tests.size(); ++k) {
    const double rc = std::abs(coarse[k].relative());
    const double rf = std::abs(fine[k].relative());
    // Below the roundoff floor the refinement order is meaningless.
    const bool converged = rf <= 1e-9;
    const double order = std::log2(rc / rf);
    ok = ok && rf <= 1e-3 && (converged || order >= 1.8);
    detail += "[" + num(rf) + (converged ? " floor" : " p=" + num(order)) + "] ";
  }
  return {ok, "relative residuals " + detail + "(<= 1e-3, order >= 1.8)"};
}

Outcome ac12(Context& ctx) {
  const std::vector<SpatialTest> psis{{{0.3, 1.1}, 0.7, false}, {{0.0, 1.0}, 1.2, false}};
  double res[2][2];
  for (int lvl = 0; lvl < 2; ++lvl) {
    const double h = 0.1 / (1 << lvl);
    const double dt = 0.04 / (1 << lvl);
    const auto s = discretize(ctx.cfg.vorticity, h, 2.0 * h);
    const auto tr = run(FlowConfig{ctx.cfg.gamma, s}, segment_map(), 1.0, dt);
    for (int p = 0; p < 2; ++p) res[p][lvl] = std::abs(weak_residual(tr, separable_test(psis[p], 0.8), ctx.cfg.vorticity));
  }
  bool ok = true;
  std::string detail;
  for (int p = 0; p < 2; ++p) {
    const double order = std::log2(res[p][0] / res[p][1]);
    ok = ok && order >= 1.8;
    detail += "[" + num(res[p][0]) + " -> " + num(res[p][1]) + ", p=" + num(order) + "] ";
  }
  return {ok, "weak residual " + detail + "(order >= 1.8)"};
}

Outcome ac13(Context& ctx) {
  ctx.sweep();
  const std::string again = Context::serialize(run_experiment(ctx.cfg, false));
  const bool same = again == *ctx.sweep_csv;
  return {same, same ? "sweep tables bit-identical (" + std::to_string(again.size()) + " bytes)" : "sweep tables differ"};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*fn)(Context&);
};

const Criterion kCriteria[] = {
    {1, "harmonic circulation", ac1},    {2, "kernel consistency", ac2},   {3, "tangency", ac3},
    {4, "far-field decay", ac4},         {5, "endpoint blow-up", ac5},     {6, "conservation", ac6},
    {7, "cutoff orthogonality/measure", ac7}, {8, "flux decay", ac8},     {9, "L2loc convergence", ac9},
    {10, "circulation jump", ac10},      {11, "distributional curl", ac11}, {12, "weak residual", ac12},
    {13, "determinism", ac13},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  options.config.validate();
  Context ctx{options.config, std::nullopt, std::nullopt};
  std::vector<CriterionResult> out;
  for (const auto& c : kCriteria) {
    if (!options.only.empty() && !options.only.count(c.id)) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.fn(ctx);
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] AC%02d ", r.passed ? "PASS" : "FAIL", r.id);
  char tail[32];
  std::snprintf(tail, sizeof tail, " (%.2f s)", r.seconds);
  return head + r.name + ": " + r.detail + tail;
}

}  // namespace thinflow
