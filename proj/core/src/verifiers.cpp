#include "pfreq/verifiers.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pfreq/eigenfunctions.hpp"
#include "pfreq/error.hpp"
#include "pfreq/geometry.hpp"

namespace pfreq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

VerificationReport start(std::string name, const Background& bg, double tol) {
  VerificationReport r;
  r.check_name = std::move(name);
  r.background = bg.name();
  r.tolerance = tol;
  return r;
}

bool any_zero_field(const Trajectory& traj) {
  return std::any_of(traj.fields.begin(), traj.fields.end(), [](const CoefficientField& f) { return compute_I(f) == 0.0; });
}

bool all_zero_fields(const Trajectory& traj) {
  return std::all_of(traj.fields.begin(), traj.fields.end(), [](const CoefficientField& f) { return compute_I(f) == 0.0; });
}

std::vector<double> node_times(const Trajectory& traj) {
  std::vector<double> t;
  for (const auto& f : traj.fields) t.push_back(f.time());
  return t;
}

// Value and derivatives of sum_i a_i phi_i at a point.
struct FieldJet {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  double drift_laplacian = 0.0;
};

FieldJet field_jet(const ModeBasis& basis, const Eigen::VectorXd& a, const Eigen::VectorXd& p, const GeometryData& geom) {
  FieldJet out;
  out.gradient = Eigen::VectorXd::Zero(p.size());
  out.hessian = Eigen::MatrixXd::Zero(p.size(), p.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double ai = a[static_cast<Eigen::Index>(i)];
    if (ai == 0.0) continue;
    const ModeJet j = basis.jet(i, p, geom);
    out.value += ai * j.value;
    out.gradient += ai * j.gradient;
    out.hessian += ai * j.hessian;
    out.drift_laplacian += ai * j.drift_laplacian;
  }
  return out;
}

std::vector<Mode> field_modes(const CoefficientField& f) {
  std::vector<Mode> m;
  for (const auto& t : f.terms()) m.push_back(t.mode);
  return m;
}

// Returns the first node index whose forcing certificate fails, or npos.
std::size_t first_uncertified_node(const Trajectory& traj, const QuadratureRule& rule, double* worst) {
  *worst = kInf;
  if (!traj.forcing) return std::string::npos;
  for (std::size_t i = 0; i < traj.fields.size(); ++i) {
    const double m = forcing_bound_margin(traj.fields[i], *traj.forcing, rule);
    *worst = std::min(*worst, m);
    if (m < -1e-12) return i;
  }
  return std::string::npos;
}

double c_at(const Trajectory& traj, double t) { return traj.forcing ? traj.forcing->c_profile(t) : 0.0; }

}  // namespace

// ---------------------------------------------------------------- report plumbing

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inapplicable:
      return "inapplicable";
  }
  return "inapplicable";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "inapplicable") return Verdict::Inapplicable;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

bool VerificationReport::operator==(const VerificationReport& o) const {
  if (nodes.size() != o.nodes.size()) return false;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!same_double(nodes[i].t, o.nodes[i].t) || !same_double(nodes[i].value, o.nodes[i].value)) return false;
  return check_name == o.check_name && background == o.background && scenario_id == o.scenario_id &&
         same_double(min_margin, o.min_margin) && same_double(tolerance, o.tolerance) && verdict == o.verdict &&
         passed == o.passed && report_only == o.report_only && notes == o.notes;
}

void finalize(VerificationReport& r) {
  if (r.nodes.empty()) {
    r.verdict = Verdict::Inapplicable;
    r.passed = false;
    r.min_margin = kNaN;
    if (r.notes.empty()) r.notes = "no nodes to check";
    return;
  }
  double m = kInf;
  bool has_nan = false;
  for (const auto& n : r.nodes) {
    if (std::isnan(n.value)) has_nan = true;
    m = std::min(m, n.value);
  }
  r.min_margin = has_nan ? kNaN : m;
  r.passed = !has_nan && r.min_margin >= -r.tolerance;
  r.verdict = r.passed ? Verdict::Pass : Verdict::Fail;
}

VerificationReport inapplicable(std::string check_name, const Background& bg, std::string why) {
  VerificationReport r = start(std::move(check_name), bg, 0.0);
  r.verdict = Verdict::Inapplicable;
  r.passed = false;
  r.min_margin = kNaN;
  r.notes = std::move(why);
  return r;
}

std::vector<VerificationReport> merge_reports(std::vector<VerificationReport> a, std::vector<VerificationReport> b) {
  a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
  std::stable_sort(a.begin(), a.end(), [](const VerificationReport& x, const VerificationReport& y) {
    if (x.scenario_id != y.scenario_id) return x.scenario_id < y.scenario_id;
    return x.check_name < y.check_name;
  });
  return a;
}

// ---------------------------------------------------------------- helpers

std::vector<double> centered_derivative(const std::vector<double>& t, const std::vector<double>& f) {
  if (t.size() != f.size()) throw std::invalid_argument("centered_derivative: size mismatch");
  std::vector<double> d;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    d.push_back(-h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] + h1 / (h2 * (h1 + h2)) * f[i + 1]);
  }
  return d;
}

double centered_difference_error_scale(const std::vector<double>& t, const std::vector<double>& f) {
  if (t.size() < 4) return 0.0;
  double h_max = 0.0, third_max = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) h_max = std::max(h_max, t[i] - t[i - 1]);
  for (std::size_t i = 0; i + 3 < t.size(); ++i) {
    // Newton divided differences up to order three; 6 f[t0..t3] ~ f'''.
    double d[4] = {f[i], f[i + 1], f[i + 2], f[i + 3]};
    for (std::size_t order = 1; order <= 3; ++order)
      for (std::size_t j = 3; j >= order; --j) d[j] = (d[j] - d[j - 1]) / (t[i + j] - t[i + j - order]);
    third_max = std::max(third_max, std::abs(6.0 * d[3]));
  }
  return h_max * h_max * third_max;
}

// ---------------------------------------------------------------- heat flow

VerificationReport verify_frequency_monotonicity(const Trajectory& traj, double kappa, double rel_tol) {
  const Background& bg = traj.background();
  if (any_zero_field(traj))
    return inapplicable("frequency_monotonicity", bg, "zero initial data: frequency undefined");
  const FrequencyTrace tr = frequency_trace(traj, kappa);
  double u_max = 0.0;
  std::vector<double> t, u;
  for (const auto& r : tr) {
    u_max = std::max(u_max, std::abs(r.U));
    t.push_back(r.t);
    u.push_back(r.U);
  }
  VerificationReport rep = start("frequency_monotonicity", bg, rel_tol * u_max);
  for (std::size_t i = 1; i < tr.size(); ++i) rep.nodes.push_back({tr[i].t, tr[i].U - tr[i - 1].U});
  finalize(rep);

  const std::vector<double> du = centered_derivative(t, u);
  double worst = kInf, worst_scaled = kInf;
  for (std::size_t i = 0; i < du.size(); ++i) {
    worst = std::min(worst, du[i]);
    worst_scaled = std::min(worst_scaled, du[i] * 0.5 * (t[i + 2] - t[i]));
  }
  if (!du.empty() && worst_scaled < -rep.tolerance) {
    rep.passed = false;
    rep.verdict = Verdict::Fail;
  }
  rep.notes = fmt::format("kappa={:.17g}; min centered dU/dt={:.17g}", kappa, du.empty() ? kNaN : worst);
  return rep;
}

VerificationReport verify_equality_case(const Trajectory& traj, double kappa, double tol) {
  const Background& bg = traj.background();
  if (any_zero_field(traj)) return inapplicable("equality_case", bg, "zero initial data: frequency undefined");
  const FrequencyTrace tr = frequency_trace(traj, kappa);
  VerificationReport rep = start("equality_case", bg, tol);
  int flat = 0;
  for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
    const double du = tr[i + 1].U - tr[i].U;
    if (std::abs(du) >= 1e-10 * std::max(1.0, std::abs(tr[i].U))) {
      rep.nodes.push_back({tr[i].t, 0.0});
      continue;
    }
    ++flat;
    const auto& row = tr[i];
    const CoefficientField& f = traj.fields[i];
    const double c_fit = row.D / (2.0 * row.I);
    const double c_frequency = row.U / (2.0 * std::pow(-row.t, 1.0 + 2.0 * kappa));
    double mu_active = 0.0;
    for (const auto& term : f.terms())
      if (term.amplitude != 0.0) {
        mu_active = term.mode.mu;
        break;
      }
    const double c_spectral = -mu_active / (-row.t);
    const double scale = std::max(1.0, std::abs(c_fit));
    const double residual = std::max({row.cs_defect / (row.I * row.I), std::abs(c_fit - c_frequency) / scale,
                                      std::abs(c_fit - c_spectral) / scale});
    rep.nodes.push_back({row.t, -residual});
  }
  finalize(rep);
  rep.notes = fmt::format("{} of {} node pairs flat; eigenfunction certified where flat", flat, tr.size() - 1);
  return rep;
}

DualReport verify_harnack(const Trajectory& traj, double kappa, double tol) {
  const Background& bg = traj.background();
  const FrequencyTrace tr = frequency_trace(traj, kappa);
  DualReport out{start("harnack", bg, tol), std::nullopt};
  const bool kappa_zero = kappa == 0.0;
  if (kappa_zero) out.verbatim = start("harnack_printed", bg, tol);

  const double a = tr.front().t, i_a = tr.front().I;
  if (all_zero_fields(traj)) {
    for (std::size_t i = 1; i < tr.size(); ++i) {
      out.primary.nodes.push_back({tr[i].t, 0.0});
      if (out.verbatim) out.verbatim->nodes.push_back({tr[i].t, 0.0});
    }
    finalize(out.primary);
    out.primary.notes = "zero data: I vanishes identically, backward-uniqueness degenerate branch (0 >= 0)";
    if (out.verbatim) {
      finalize(*out.verbatim);
      out.verbatim->notes = out.primary.notes;
    }
    return out;
  }
  if (i_a == 0.0) {
    for (auto* r : {&out.primary}) *r = inapplicable(r->check_name, bg, "I(a) = 0 with later nonzero data");
    if (out.verbatim) *out.verbatim = inapplicable("harnack_printed", bg, "I(a) = 0 with later nonzero data");
    return out;
  }
  const double u_a = tr.front().U;
  for (std::size_t i = 1; i < tr.size(); ++i) {
    const double b = tr[i].t;
    const double log_ratio = tr[i].I > 0.0 ? std::log(tr[i].I) - std::log(i_a) : -kInf;
    if (kappa_zero) {
      out.primary.nodes.push_back({b, log_ratio + u_a * std::log(b / a)});
      out.verbatim->nodes.push_back({b, log_ratio - (-u_a + std::log(b / a))});
    } else {
      const double bound = (std::pow(-b, -2.0 * kappa) - std::pow(-a, -2.0 * kappa)) / (2.0 * kappa) * u_a;
      out.primary.nodes.push_back({b, log_ratio - bound});
    }
  }
  finalize(out.primary);
  out.primary.notes = kappa_zero ? "kappa=0: log I(b) - log I(a) >= -U(a) log(b/a)"
                                 : fmt::format("kappa={:.17g}: exponential Harnack bound", kappa);
  if (out.verbatim) {
    finalize(*out.verbatim);
    out.verbatim->notes = "kappa=0 printed form I(b) >= I(a) e^{-U(a)} (b/a); differs from the integrated bound";
  }
  return out;
}

std::vector<TestFunction> packaged_test_functions(const Background& bg) {
  const auto nv = static_cast<std::size_t>(bg.ambient_dim());
  const std::size_t last = nv - 1;
  const Polynomial x = Polynomial::variable(nv, last);
  Polynomial norm_sq(nv);
  for (std::size_t i = 0; i < nv; ++i) norm_sq += Polynomial::variable(nv, i) * Polynomial::variable(nv, i);
  const Polynomial x2 = x * x;
  const std::string axis = "x" + std::to_string(last + 1);
  return {
      {"one", Polynomial::constant(nv, 1.0)},
      {"norm_sq", norm_sq},
      {axis + "^2", x2},
      {axis + "^4", x2 * x2},
      {axis + "^6", x2 * x2 * x2},
  };
}

VerificationReport verify_weighted_monotonicity(const Background& bg, const TestFunction& test, const TimeGrid& grid,
                                                const QuadratureRule& rule, double tol) {
  const std::string name = "weighted_monotonicity";
  if (!bg.supports_evaluation()) return inapplicable(name, bg, "no pointwise evaluation on " + bg.name());
  if (grid.size() < 3) return inapplicable(name, bg, "need at least three time nodes");
  const DifferentiatedPolynomial f(test.f);
  std::vector<GeometryData> geoms;
  geoms.reserve(rule.size());
  for (const auto& p : rule.points) geoms.push_back(geometry_at(bg, p));

  const auto& ts = grid.nodes();
  std::vector<double> integral(ts.size()), rhs(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    const double s = std::sqrt(-t);
    double j_sum = 0.0, r_sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const GeometryData& g = geoms[q];
      const Eigen::VectorXd x = s * rule.points[q];
      const PolynomialJet jet = f.jet(x);
      const Eigen::VectorXd h = g.mean_curvature / s;  // H on M_t
      const Eigen::VectorXd x_perp = s * g.x_perp;
      const double dt_f = jet.gradient.dot(h);  // normal motion, F independent of t
      const double lap_f = (g.metric * jet.hessian * g.metric).trace() + jet.gradient.dot(h);
      const double defect = (h - x_perp / (2.0 * t)).squaredNorm();
      j_sum += rule.weights[q] * jet.value;
      r_sum += rule.weights[q] * (dt_f - lap_f - defect * jet.value);
    }
    integral[k] = j_sum;
    rhs[k] = r_sum;
  }
  const std::vector<double> lhs = centered_derivative(ts, integral);
  const double disc = centered_difference_error_scale(ts, integral);
  VerificationReport rep = start(name, bg, tol + disc);
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double r = lhs[i] - rhs[i + 1];
    worst = std::max(worst, std::abs(r));
    rep.nodes.push_back({ts[i + 1], -std::abs(r)});
  }
  finalize(rep);
  rep.notes = fmt::format("f={}; max residual={:.17g}; discretization allowance={:.17g}", test.name, worst, disc);
  return rep;
}

BochnerTerms drift_bochner_terms(const CoefficientField& field, const QuadratureRule& rule) {
  const Background& bg = field.background();
  const ModeBasis basis(bg, field_modes(field));
  const Eigen::VectorXd a = field.amplitudes();
  BochnerTerms out;
  out.t = field.time();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& p = rule.points[q];
    const GeometryData g = geometry_at(bg, p);
    const FieldJet j = field_jet(basis, a, p, g);
    const double w = rule.weights[q];
    out.hessian_ricci += w * (j.hessian.squaredNorm() + j.gradient.dot(g.ric * j.gradient));
    out.drift_minus_gradient += w * (j.drift_laplacian * j.drift_laplacian - 0.5 * j.gradient.squaredNorm());
    out.curvature_pairing += w * j.gradient.dot(g.shape_pairing * j.gradient);
    out.half_gradient_energy += w * 0.5 * j.gradient.squaredNorm();
  }
  // Every term carries two derivatives of u at scale sqrt(-t): factor (-t)^{-2}.
  const double s2 = 1.0 / (field.time() * field.time());
  out.hessian_ricci *= s2;
  out.drift_minus_gradient *= s2;
  out.curvature_pairing *= s2;
  out.half_gradient_energy *= s2;
  return out;
}

DualReport verify_drift_bochner(const Trajectory& traj, const QuadratureRule& rule, double tol) {
  const Background& bg = traj.background();
  DualReport out{start("drift_bochner", bg, tol), start("drift_bochner_verbatim", bg, tol)};
  if (!bg.supports_evaluation()) {
    out.primary = inapplicable("drift_bochner", bg, "no pointwise Hessians on " + bg.name());
    out.verbatim = inapplicable("drift_bochner_verbatim", bg, "no pointwise Hessians on " + bg.name());
    return out;
  }
  double worst_a = 0.0, worst_b = 0.0, max_gap = 0.0;
  for (const auto& f : traj.fields) {
    const BochnerTerms bt = drift_bochner_terms(f, rule);
    out.primary.nodes.push_back({bt.t, -std::abs(bt.residual_corrected())});
    out.verbatim->nodes.push_back({bt.t, -std::abs(bt.residual_verbatim())});
    worst_a = std::abs(bt.residual_verbatim()) > std::abs(worst_a) ? bt.residual_verbatim() : worst_a;
    worst_b = std::abs(bt.residual_corrected()) > std::abs(worst_b) ? bt.residual_corrected() : worst_b;
    max_gap = std::max(max_gap, std::abs(bt.residual_verbatim() - bt.curvature_pairing));
  }
  finalize(out.primary);
  finalize(*out.verbatim);
  out.primary.notes =
      fmt::format("variant B (with <H,A(grad u,grad u)> term); worst signed residual={:.17g}", worst_b);
  out.verbatim->notes = fmt::format(
      "variant A (as printed); worst signed residual={:.17g}; max |residual - int <H,A(grad u,grad u)>|={:.17g}",
      worst_a, max_gap);
  return out;
}

DualReport verify_drift_bochner(const CoefficientField& field, const QuadratureRule& rule, double tol) {
  const Trajectory single{TimeGrid({field.time() - 1.0, field.time()}), {field}, EvolutionMethod::Exact, std::nullopt};
  return verify_drift_bochner(single, rule, tol);
}

VerificationReport verify_eigenvalue_monotonicity(const Background& bg, const TimeGrid& grid, double kappa, double tol) {
  VerificationReport rep = start("eigenvalue_monotonicity", bg, tol);
  const auto& ts = grid.nodes();
  auto scaled = [&](double t) { return std::pow(-t, 1.0 + 2.0 * kappa) * lambda1(bg, t); };
  double lo = kInf, hi = -kInf;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double v = scaled(ts[i]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    if (i > 0) rep.nodes.push_back({ts[i], scaled(ts[i - 1]) - v});
  }
  finalize(rep);
  rep.notes = fmt::format("kappa={:.17g}; (-t)^(1+2kappa) lambda1 ranges over [{:.17g}, {:.17g}]", kappa, lo, hi);
  return rep;
}

VerificationReport verify_selfsimilar_scaling(const Trajectory& traj, const QuadratureRule& rule, double rel_tol) {
  const std::string name = "selfsimilar_scaling";
  const Background& bg = traj.background();
  if (traj.forcing) return inapplicable(name, bg, "requires a pure heat trajectory");
  if (!bg.supports_evaluation()) return inapplicable(name, bg, "no pointwise evaluation on " + bg.name());
  if (any_zero_field(traj)) return inapplicable(name, bg, "zero initial data: frequency undefined");
  const double n0 = compute_N_raw(traj.fields.front());
  for (const auto& f : traj.fields)
    if (std::abs(compute_N_raw(f) - n0) > 1e-10 * std::max(1.0, std::abs(n0)))
      return inapplicable(name, bg, "trajectory does not have constant frequency");

  const CoefficientField reference = evolve_exact(traj.fields.front(), -1.0);
  const ModeBasis basis(bg, field_modes(reference));
  const Eigen::VectorXd a_ref = reference.amplitudes();
  std::vector<double> v_ref(rule.size(), 0.0);
  double sup_ref = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (std::size_t i = 0; i < basis.size(); ++i) v_ref[q] += a_ref[static_cast<Eigen::Index>(i)] * basis.value(i, rule.points[q]);
    sup_ref = std::max(sup_ref, std::abs(v_ref[q]));
  }
  VerificationReport rep = start(name, bg, rel_tol * std::max(1.0, sup_ref));
  for (const auto& f : traj.fields) {
    const Eigen::VectorXd a = f.amplitudes();
    const double factor = std::pow(-f.time(), -n0 / 2.0);
    double sup = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double v = 0.0;
      for (std::size_t i = 0; i < basis.size(); ++i) v += a[static_cast<Eigen::Index>(i)] * basis.value(i, rule.points[q]);
      sup = std::max(sup, std::abs(v - factor * v_ref[q]));
    }
    rep.nodes.push_back({f.time(), -sup});
  }
  finalize(rep);
  rep.notes = fmt::format("U = -2 mu = {:.17g} (kappa-free normalization); sup |v(t)| at t=-1 is {:.17g}", n0, sup_ref);
  return rep;
}

VerificationReport verify_mass_consistency(const Trajectory& traj, const QuadratureRule& rule, double tol) {
  const Background& bg = traj.background();
  if (!bg.supports_evaluation()) return inapplicable("mass_consistency", bg, "no quadrature on " + bg.name());
  VerificationReport rep = start("mass_consistency", bg, tol);
  for (const auto& f : traj.fields) {
    const double i_c = compute_I(f), i_q = compute_I_quadrature(f, rule);
    const double d_c = compute_D(f), d_q = compute_D_quadrature(f, rule);
    const double err = std::max(std::abs(i_c - i_q) / std::max(1.0, i_c), std::abs(d_c - d_q) / std::max(1.0, std::abs(d_c)));
    rep.nodes.push_back({f.time(), -err});
  }
  finalize(rep);
  rep.notes = fmt::format("coefficient path vs quadrature path ({} points)", rule.size());
  return rep;
}

// ---------------------------------------------------------------- perturbed flow

VerificationReport verify_general_bounds(const Trajectory& traj, double kappa, const QuadratureRule& rule, double tol) {
  const std::string name = "general_bounds";
  const Background& bg = traj.background();
  if (any_zero_field(traj)) return inapplicable(name, bg, "zero initial data: frequency undefined");
  if (traj.fields.size() < 3) return inapplicable(name, bg, "need at least three time nodes");
  if (traj.forcing && !bg.supports_evaluation())
    return inapplicable(name, bg, "forcing hypothesis cannot be certified on " + bg.name());
  double worst_cert = kInf;
  const std::size_t bad = first_uncertified_node(traj, rule, &worst_cert);
  if (bad != std::string::npos)
    return inapplicable(name, bg,
                        fmt::format("forcing hypothesis fails at node t={:.17g} (margin {:.17g})",
                                    traj.fields[bad].time(), worst_cert));

  const FrequencyTrace tr = frequency_trace(traj, kappa);
  const std::vector<double> t = node_times(traj);
  std::vector<double> log_i, u;
  for (const auto& r : tr) {
    log_i.push_back(std::log(r.I));
    u.push_back(r.U);
  }
  const std::vector<double> dlog_i = centered_derivative(t, log_i);
  const std::vector<double> du = centered_derivative(t, u);
  const double disc = std::max(centered_difference_error_scale(t, log_i), centered_difference_error_scale(t, u));
  VerificationReport rep = start(name, bg, tol + disc);
  double worst_i = kInf, worst_u = kInf;
  for (std::size_t k = 0; k < dlog_i.size(); ++k) {
    const std::size_t i = k + 1;
    const double ti = t[i], c = c_at(traj, ti);
    const double i_bound = (1.0 + 0.5 * c) * std::pow(-ti, -1.0 - 2.0 * kappa) * u[i] - 3.0 * c;
    const double u_bound = c * c * (u[i] - 2.0 * std::pow(-ti, 1.0 + 2.0 * kappa));
    const double m_i = dlog_i[k] - i_bound, m_u = du[k] - u_bound;
    worst_i = std::min(worst_i, m_i);
    worst_u = std::min(worst_u, m_u);
    rep.nodes.push_back({ti, std::min(m_i, m_u)});
  }
  finalize(rep);
  rep.notes = fmt::format(
      "kappa={:.17g}; min (log I)' margin={:.17g}; min U' margin={:.17g}; discretization allowance={:.17g}; "
      "min forcing certificate={:.17g}",
      kappa, worst_i, worst_u, disc, traj.forcing ? worst_cert : 0.0);
  return rep;
}

double general_harnack_exponent(double a, double b, double U_a, double kappa, const CProfile& c) {
  if (!(a < b && b < 0.0)) throw std::invalid_argument("general_harnack_exponent: need a < b < 0");
  const double anchor = 2.0 * std::pow(-a, 1.0 + 2.0 * kappa);
  // Panels uniform in log(-t) so (-t)^{-1-2 kappa} is resolved near 0, split at profile breakpoints.
  constexpr int kPanels = 32;
  std::vector<double> cuts;
  for (int p = 0; p <= kPanels; ++p)
    cuts.push_back(-std::exp(std::log(-a) + (std::log(-b) - std::log(-a)) * p / kPanels));
  cuts.front() = a;
  cuts.back() = b;
  for (double bp : c.breakpoints(a, b)) cuts.push_back(bp);
  std::sort(cuts.begin(), cuts.end());
  static const GaussRule gl = gauss_legendre(16);
  double outer = 0.0;
  for (std::size_t p = 1; p < cuts.size(); ++p) {
    const double lo = cuts[p - 1], hi = cuts[p];
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double t = mid + half * gl.nodes[q];
      const double ct = c(t);
      const double u_lower = (U_a - anchor) * std::exp(c.integral_sq(a, t)) + anchor;
      outer += half * gl.weights[q] * (1.0 + 0.5 * ct) * std::pow(-t, -1.0 - 2.0 * kappa) * u_lower;
    }
  }
  return outer - 3.0 * c.integral(a, b);
}

VerificationReport verify_general_harnack(const Trajectory& traj, double kappa, const QuadratureRule& rule, double tol) {
  const std::string name = "general_harnack";
  const Background& bg = traj.background();
  VerificationReport rep = start(name, bg, tol);
  const std::vector<double> t = node_times(traj);
  if (all_zero_fields(traj)) {
    for (std::size_t i = 1; i < t.size(); ++i) rep.nodes.push_back({t[i], 0.0});
    finalize(rep);
    rep.notes = "zero data: I vanishes identically, backward-uniqueness degenerate branch (0 >= 0)";
    return rep;
  }
  if (traj.forcing && !bg.supports_evaluation())
    return inapplicable(name, bg, "forcing hypothesis cannot be certified on " + bg.name());
  double worst_cert = kInf;
  const std::size_t bad = first_uncertified_node(traj, rule, &worst_cert);
  if (bad != std::string::npos)
    return inapplicable(name, bg,
                        fmt::format("forcing hypothesis fails at node t={:.17g} (margin {:.17g})",
                                    traj.fields[bad].time(), worst_cert));
  const double i_a = compute_I(traj.fields.front());
  if (i_a == 0.0) return inapplicable(name, bg, "I(a) = 0 with later nonzero data");
  const double u_a = compute_U(traj.fields.front(), kappa);
  const CProfile c = traj.forcing ? traj.forcing->c_profile : CProfile::constant(0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double i_b = compute_I(traj.fields[i]);
    const double log_ratio = i_b > 0.0 ? std::log(i_b) - std::log(i_a) : -kInf;
    rep.nodes.push_back({t[i], log_ratio - general_harnack_exponent(t.front(), t[i], u_a, kappa, c)});
  }
  finalize(rep);
  rep.notes = fmt::format("kappa={:.17g}; U(a)={:.17g}; integral of C^2 over [a,b]={:.17g}", kappa, u_a,
                          c.integral_sq(t.front(), t.back()));
  return rep;
}

}  // namespace pfreq
